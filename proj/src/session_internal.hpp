#pragma once

#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "qauth/adversary.hpp"
#include "qauth/protocol.hpp"

namespace qauth::detail {

// Classical link between the two parties. Every message passes through here;
// Eve may record or substitute whole messages.
class ClassicalLink {
  public:
    ClassicalLink(std::uint64_t session_id, SessionTrace* trace, const EveStrategy& eve,
                  std::vector<Message>* eve_record, std::string prefix = {})
        : session_id_(session_id),
          trace_(trace),
          eve_(eve),
          eve_record_(eve_record),
          prefix_(std::move(prefix)) {}

    template <class T>
    T deliver(T payload) {
        if constexpr (std::is_same_v<T, AuthMessage>) {
            if (eve_.kind == EveKind::replay && eve_.replay_message) {
                payload = *eve_.replay_message;
            }
        }
        if (eve_record_ != nullptr) {
            eve_record_->push_back(Message{session_id_, payload});
        }
        if (trace_ != nullptr) {
            const std::string line = encode_message(Message{session_id_, payload});
            trace_->messages.push_back(line);
            return std::get<T>(decode_message(line).payload);
        }
        return payload;
    }

    bool tracing() const { return trace_ != nullptr; }

    void step(const std::string& text) {
        if (trace_ != nullptr) {
            trace_->steps.push_back(prefix_ + text);
        }
    }

  private:
    std::uint64_t session_id_;
    SessionTrace* trace_;
    const EveStrategy& eve_;
    std::vector<Message>* eve_record_;
    std::string prefix_;
};

// Runs Steps 2-8 between the two given party objects. The channel must be
// open and may carry a tap.
SessionOutcome drive_session(Alice& alice, Bob& bob, QuantumChannel& channel, std::size_t n_pairs,
                             ClassicalLink& link);

}  // namespace qauth::detail
