#pragma once

// Eve strategies: intercept-resend on the Bob-bound qubits, the
// man-in-the-middle impersonation, passive classical recording and replay of
// a recorded challenge.

#include <optional>
#include <string_view>
#include <vector>

#include "qauth/keycodec.hpp"
#include "qauth/protocol.hpp"
#include "qauth/quantum_core.hpp"
#include "qauth/random.hpp"

namespace qauth {

enum class EveKind : std::uint8_t {
    none,
    intercept_resend,
    mitm_impersonate,
    classical_record,
    replay,
};

std::string_view to_string(EveKind k);
EveKind eve_kind_from_string(std::string_view s);

struct EveStrategy {
    EveKind kind = EveKind::none;
    double intercept_fraction = 1.0;
    std::vector<MeasurementBasis> eve_basis_set{basis::rectilinear, basis::diagonal};
    std::optional<Bits> guess_key;            // mitm; absent means uniformly random of |K1|
    std::optional<AuthMessage> replay_message;

    static EveStrategy honest() { return {}; }
    static EveStrategy intercept(double fraction,
                                 std::vector<MeasurementBasis> bases = {basis::rectilinear,
                                                                        basis::diagonal});
    static EveStrategy mitm(std::optional<Bits> guess = std::nullopt);
    static EveStrategy record();
    static EveStrategy replay(std::optional<AuthMessage> msg = std::nullopt);

    std::vector<std::string> validate() const;
};

struct Interception {
    std::size_t position = 0;
    MeasurementBasis basis;
    Outcome outcome = Outcome::up;
};

struct TapResult {
    QubitState forwarded;
    std::optional<Interception> intercepted;
};

// With probability intercept_fraction Eve measures the incoming qubit in a
// uniformly chosen basis from her set and resends that eigenstate. Any other
// strategy kind passes the qubit through untouched.
TapResult tap_quantum(std::size_t position, const QubitState& incoming, const EveStrategy& strategy,
                      RandomStream& rng);

struct MitmOutcome {
    SessionOutcome alice_side;   // Alice <-> Eve posing as Bob
    SessionOutcome bob_side;     // Eve posing as Alice <-> Bob
    Bits guess_key;
    std::optional<Bits> k_ae;
    std::optional<Bits> k_eb;

    bool passed_alice() const { return alice_side.bob_verified; }
    bool passed_bob() const { return bob_side.alice_verified; }
    bool passed_both() const { return passed_alice() && passed_bob(); }

    // Alice-facing verdicts in the joint view: bob_verified means Alice
    // accepted Eve, alice_verified means Bob accepted Eve.
    SessionOutcome combined() const;
};

MitmOutcome run_mitm(const SessionConfig& cfg, const EveStrategy& strategy,
                     SessionTrace* trace = nullptr);

struct ReplayOutcome {
    SessionOutcome recorded;   // honest session observed by a passive Eve
    std::optional<SessionOutcome> replayed;   // absent when no K2 came out of the recording

    bool replay_rejected() const { return replayed && !replayed->bob_verified; }
};

// Records an honest session's challenge, then replays it into a fresh session
// keyed with that session's K2.
ReplayOutcome run_replay_attack(const SessionConfig& cfg, SessionTrace* trace = nullptr);

}  // namespace qauth
