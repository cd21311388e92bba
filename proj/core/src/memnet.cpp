#include "dedupvault/net/memnet.hpp"

namespace dedupvault::net {

wire::ProtocolMessage call_checked(Channel& ch, const wire::ProtocolMessage& req, int retries) {
  for (int attempt = 0;; ++attempt) {
    try {
      wire::ProtocolMessage reply = ch.call(req);
      if (auto* err = std::get_if<wire::ErrorMsg>(&reply)) throw Error(err->code);
      return reply;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Timeout || attempt >= retries) throw;
    }
  }
}

bool SimNet::should_drop(wire::Tag tag) {
  auto it = drops_.find(tag);
  if (it == drops_.end() || it->second <= 0) return false;
  --it->second;
  return true;
}

void SimNet::record(const std::string& from, const std::string& to, const Bytes& frame,
                    bool dropped) {
  transcript_.push_back({from, to, wire::tag_of(wire::decode(frame)), frame, dropped});
}

wire::ProtocolMessage SimNet::inject(const std::string& from, const std::string& to,
                                     const wire::ProtocolMessage& msg) {
  auto it = actors_.find(to);
  if (it == actors_.end()) throw Error(ErrorCode::Timeout, "no such actor: " + to);
  Bytes frame = wire::encode(msg);
  record(from, to, frame, false);
  wire::ProtocolMessage reply = it->second->handle(wire::decode(frame));
  record(to, from, wire::encode(reply), false);
  return reply;
}

wire::ProtocolMessage SimNet::Link::call(const wire::ProtocolMessage& req) {
  auto it = net_.actors_.find(to_);
  if (it == net_.actors_.end()) throw Error(ErrorCode::Timeout, "actor offline: " + to_);

  Bytes frame = wire::encode(req);
  bool drop_req = net_.should_drop(wire::tag_of(req));
  net_.record(from_, to_, frame, drop_req);
  if (drop_req) throw Error(ErrorCode::Timeout, "request dropped");

  wire::ProtocolMessage reply = it->second->handle(wire::decode(frame));
  Bytes reply_frame = wire::encode(reply);
  bool drop_reply = net_.should_drop(wire::tag_of(reply));
  net_.record(to_, from_, reply_frame, drop_reply);
  if (drop_reply) throw Error(ErrorCode::Timeout, "reply dropped");
  return wire::decode(reply_frame);
}

}  // namespace dedupvault::net
