#ifndef DEDUPVAULT_NET_MEMNET_HPP
#define DEDUPVAULT_NET_MEMNET_HPP

#include <map>
#include <memory>
#include <vector>

#include "dedupvault/net/transport.hpp"

namespace dedupvault::net {

// In-process simulated network. Every call is encoded to wire bytes, recorded
// in the transcript, optionally dropped per the fault script, then decoded and
// delivered — so tests observe exactly the frames TCP would carry.
class SimNet {
 public:
  struct TranscriptEntry {
    std::string from, to;
    wire::Tag tag;
    Bytes frame;
    bool dropped = false;
  };

  void attach(const std::string& name, Actor* actor) { actors_[name] = actor; }
  void detach(const std::string& name) { actors_.erase(name); }
  bool attached(const std::string& name) const { return actors_.count(name) != 0; }

  // Logical clock, advanced explicitly by tests.
  std::uint64_t now_ms() const { return clock_ms_; }
  void advance_ms(std::uint64_t d) { clock_ms_ += d; }
  ClockFn clock() {
    return [this] { return clock_ms_; };
  }

  // Fault script: drop the next `times` frames with this tag (request or reply).
  void drop_next(wire::Tag tag, int times = 1) { drops_[tag] += times; }

  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  void clear_transcript() { transcript_.clear(); }

  // Raw delivery of one frame (bypasses channels; for adversarial injection).
  wire::ProtocolMessage inject(const std::string& from, const std::string& to,
                               const wire::ProtocolMessage& msg);

  class Link : public Channel {
   public:
    Link(SimNet& net, std::string from, std::string to)
        : net_(net), from_(std::move(from)), to_(std::move(to)) {}
    wire::ProtocolMessage call(const wire::ProtocolMessage& req) override;

   private:
    SimNet& net_;
    std::string from_, to_;
  };

  std::unique_ptr<Link> link(const std::string& from, const std::string& to) {
    return std::make_unique<Link>(*this, from, to);
  }

 private:
  friend class Link;
  bool should_drop(wire::Tag tag);
  void record(const std::string& from, const std::string& to, const Bytes& frame, bool dropped);

  std::map<std::string, Actor*> actors_;
  std::map<wire::Tag, int> drops_;
  std::vector<TranscriptEntry> transcript_;
  std::uint64_t clock_ms_ = 0;
};

}  // namespace dedupvault::net

#endif
