#ifndef DEDUPVAULT_NET_TRANSPORT_HPP
#define DEDUPVAULT_NET_TRANSPORT_HPP

#include <functional>
#include <string>

#include "dedupvault/wire/messages.hpp"

namespace dedupvault::net {

// An actor consumes one request and produces one reply. Handlers map internal
// failures to ErrorMsg replies; they do not throw across the transport.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual wire::ProtocolMessage handle(const wire::ProtocolMessage& req) = 0;
};

// A duplex channel to a remote actor. call() throws Error(Timeout) when the
// request or reply is lost.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual wire::ProtocolMessage call(const wire::ProtocolMessage& req) = 0;
};

// Retries Timeout failures; converts an ErrorMsg reply into a thrown Error.
wire::ProtocolMessage call_checked(Channel& ch, const wire::ProtocolMessage& req,
                                   int retries = 3);

template <typename T>
T call_expect(Channel& ch, const wire::ProtocolMessage& req, int retries = 3) {
  wire::ProtocolMessage reply = call_checked(ch, req, retries);
  if (auto* t = std::get_if<T>(&reply)) return std::move(*t);
  throw Error(ErrorCode::Internal, std::string("unexpected reply ") +
                                       wire::tag_name(wire::tag_of(reply)));
}

using ClockFn = std::function<std::uint64_t()>;  // milliseconds

}  // namespace dedupvault::net

#endif
