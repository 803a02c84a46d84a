#pragma once

// Party ledgers, step operations and the Alice/Bob state machines for one
// authentication session.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qauth/detection.hpp"
#include "qauth/keycodec.hpp"
#include "qauth/quantum_core.hpp"
#include "qauth/random.hpp"

namespace qauth {

enum class Purpose : std::uint8_t { auth, keygen, bell_candidate };

std::string_view to_string(Purpose p);

namespace angles {
// Alice's random basis set and Bob's non-auth set (Ekert angles).
inline const std::array<MeasurementBasis, 3> alice{basis::deg0, basis::deg45, basis::deg90};
inline const std::array<MeasurementBasis, 3> bob{basis::deg45, basis::deg90, basis::deg135};
}  // namespace angles

struct AliceEntry {
    MeasurementBasis basis;
    Outcome outcome = Outcome::up;
};

struct BobEntry {
    Purpose purpose = Purpose::keygen;
    MeasurementBasis basis;
    Outcome outcome = Outcome::up;
};

// Merged per-position view of both ledgers.
struct PairRecord {
    std::size_t index = 0;
    MeasurementBasis alice_basis;
    Outcome alice_outcome = Outcome::up;
    std::optional<MeasurementBasis> bob_basis;
    std::optional<Outcome> bob_outcome;
    Purpose purpose = Purpose::keygen;
    bool disclosed = false;
};

std::vector<PairRecord> merge_ledgers(const std::vector<AliceEntry>& alice,
                                      const std::vector<BobEntry>& bob);

struct AuthMessage {
    std::vector<std::size_t> indices;
    Ciphertext ciphertext;
    friend bool operator==(const AuthMessage&, const AuthMessage&) = default;
};

struct AliceReveal {
    Bits m_prime;
    friend bool operator==(const AliceReveal&, const AliceReveal&) = default;
};

enum class AbortReason : std::uint8_t {
    none,
    eavesdropper_detected,
    bob_rejected,
    alice_rejected,
    inconclusive,
};

std::string_view to_string(AbortReason r);
AbortReason abort_reason_from_string(std::string_view s);

struct SessionConfig {
    std::size_t n_pairs = 2000;
    Bits key;                   // K1, shared by both parties
    std::size_t auth_len = 0;   // 0 means |key|
    double f_auth = 0.25;
    double f_disclose = 0.5;
    double e_t = 0.10;
    double s_min = 2.5;
    std::size_t n_min_auth = 20;
    NoiseModel noise;
    std::uint64_t seed = 1;
    DetectionChecks checks;

    std::size_t effective_auth_len() const { return auth_len == 0 ? key.size() : auth_len; }

    // Field-path prefixed messages, empty when valid.
    std::vector<std::string> validate() const;
};

struct SessionOutcome {
    bool bob_verified = false;
    bool alice_verified = false;
    bool channel_clean = false;
    std::optional<double> qber_bell;
    std::optional<double> chsh_s;
    double auth_mismatch_rate = 0.0;
    std::size_t matched_auth_count = 0;
    std::optional<Bits> new_key;       // Alice's K2
    std::optional<Bits> bob_new_key;   // Bob's K2
    AbortReason abort_reason = AbortReason::inconclusive;

    bool accepted() const { return abort_reason == AbortReason::none; }
    bool keys_agree() const { return new_key && bob_new_key && *new_key == *bob_new_key; }
};

// Serialized outcome with sorted keys; used for byte-level determinism checks.
std::string to_json_string(const SessionOutcome& o);

// ---------------------------------------------------------------------------
// Quantum channel: carries the Bob-bound half of each pair.

class QuantumChannel {
  public:
    using Tap = std::function<QubitState(std::size_t position, const QubitState&)>;

    void open() { open_ = true; }
    void close() { open_ = false; }
    bool is_open() const { return open_; }

    void set_tap(Tap tap) { tap_ = std::move(tap); }

    // Throws ErrorKind::channel_closed when the channel is not open.
    void send(const QubitState& q);
    std::vector<QubitState> receive_all();

  private:
    bool open_ = false;
    Tap tap_;
    std::vector<QubitState> in_flight_;
};

// ---------------------------------------------------------------------------
// Step operations.

// Step 2: Alice picks a basis from {0, 45, 90} per pair and measures her
// half; the collapsed partner is sent down the channel.
std::vector<AliceEntry> alice_measure(QuantumChannel& channel, std::size_t n_pairs,
                                      RandomStream& rng);

// Step 3: exactly auth_len positions, chosen uniformly without replacement,
// are tagged auth; the rest keygen.
std::vector<Purpose> bob_assign_purposes(std::size_t n_pairs, double f_auth, std::size_t auth_len,
                                         RandomStream& rng);

// Step 3: auth positions use auth_bases in rank order; others a uniform pick
// from {45, 90, 135}. Noise is applied after measurement.
std::vector<BobEntry> bob_measure(const std::vector<Purpose>& purposes,
                                  const BasisSequence& auth_bases,
                                  const std::vector<QubitState>& incoming, const NoiseModel& noise,
                                  RandomStream& rng, RandomStream& noise_rng);

// Uniform f_disclose share of non-auth positions, sorted.
std::vector<std::size_t> select_disclosure(const std::vector<Purpose>& purposes, double f_disclose,
                                           RandomStream& rng);

struct BellCheck {
    ChannelVerdict verdict = ChannelVerdict::inconclusive;
    std::optional<double> qber;
    std::optional<ChshEstimate> chsh;
    std::vector<std::size_t> disclosed;

    bool clean() const { return verdict == ChannelVerdict::clean; }
};

BellCheck assess_disclosure(const DisclosedSample& sample, double e_t, double s_min,
                            DetectionChecks checks);

// Step 4 on the merged ledger: selects, marks and evaluates the disclosed set.
BellCheck run_bell_check(std::vector<PairRecord>& records, double f_disclose, double s_min,
                         double e_t, RandomStream& rng, DetectionChecks checks = {});

struct BuiltChallenge {
    AuthMessage message;
    Bits m;
};

// Step 5: m is the auth outcomes in index order, encrypted under K1.
BuiltChallenge bob_build_auth_message(const std::vector<BobEntry>& bob, const SharedKey& k1);

struct BobVerification {
    bool bob_verified = false;
    double auth_mismatch_rate = 0.0;
    std::size_t matched_auth_count = 0;
    Bits m;
};

// Step 6. Matched positions are auth indices where Alice's basis equals the
// K1 basis at that rank; a mismatch is a position not anti-correlated.
// Throws ErrorKind::malformed_message on inconsistent messages.
BobVerification alice_verify_bob(const AuthMessage& msg, const std::vector<AliceEntry>& alice,
                                 const SharedKey& k1, double e_t, std::size_t n_min_auth);

// Step 7. Throws ErrorKind::malformed_message on a length mismatch.
bool bob_verify_alice(const AliceReveal& reveal, const Bits& m);

struct NewKeys {
    Bits alice;
    Bits bob;
};

// Step 8 sifting on the merged ledger: undisclosed non-auth positions where
// both chose the same basis in {45, 90}. Bob complements his bits.
// Throws ErrorKind::empty_key when nothing survives.
NewKeys derive_new_key(const std::vector<PairRecord>& records);

// ---------------------------------------------------------------------------
// Classical messages (line-delimited JSON on the wire).

enum class PartyId : std::uint8_t { alice, bob };

struct BasisAnnounce {
    PartyId from = PartyId::bob;
    std::vector<std::size_t> indices;
    std::vector<MeasurementBasis> bases;
};

struct BellDisclose {
    PartyId from = PartyId::bob;
    std::vector<std::size_t> indices;
    std::vector<MeasurementBasis> bases;
    Bits outcomes;
};

struct AbortNotice {
    PartyId from = PartyId::alice;
    AbortReason reason = AbortReason::inconclusive;
};

using Payload = std::variant<BasisAnnounce, BellDisclose, AuthMessage, AliceReveal, AbortNotice>;

struct Message {
    std::uint64_t session_id = 0;
    Payload payload;
};

std::string_view message_type(const Payload& p);

// One JSON object per line: {"payload":...,"session_id":N,"type":"..."}.
std::string encode_message(const Message& m);
// Throws ErrorKind::malformed_message.
Message decode_message(std::string_view line);

// ---------------------------------------------------------------------------
// Party state machines.

struct PartySettings {
    std::size_t auth_len = 0;
    double f_auth = 0.25;
    double f_disclose = 0.5;
    double e_t = 0.10;
    double s_min = 2.5;
    std::size_t n_min_auth = 20;
    DetectionChecks checks;
    NoiseModel noise;

    static PartySettings from(const SessionConfig& cfg);
};

class Alice {
  public:
    enum class State { ready, measured, checked, revealed, done, aborted };

    // Throws ErrorKind::key_consumed if `k1` was already used.
    Alice(SharedKey& k1, PartySettings settings, RandomStream rng);

    State state() const { return state_; }
    const std::vector<AliceEntry>& ledger() const { return ledger_; }

    // Impostors reveal whatever they decrypted even when their own check fails.
    void set_always_reveal(bool v) { always_reveal_ = v; }

    void measure(QuantumChannel& channel, std::size_t n_pairs);
    BellDisclose on_bell_disclose(const BellDisclose& from_bob);
    const BellCheck& bell_check() const { return bell_; }

    // Returns the reveal when Bob is verified, an abort notice otherwise.
    std::variant<AliceReveal, AbortNotice> on_auth_challenge(const AuthMessage& msg);
    const BobVerification& verification() const { return verification_; }

    BasisAnnounce on_basis_announce(const BasisAnnounce& from_bob);
    const std::optional<Bits>& new_key() const { return new_key_; }

    void abort();

  private:
    void expect(State s, std::string_view step) const;

    SharedKey* k1_;
    PartySettings settings_;
    RandomStream rng_;
    State state_ = State::ready;
    bool always_reveal_ = false;
    std::vector<AliceEntry> ledger_;
    BellCheck bell_;
    BobVerification verification_;
    std::optional<Bits> new_key_;
};

class Bob {
  public:
    enum class State { ready, measured, disclosed, checked, challenged, done, aborted };

    Bob(SharedKey& k1, PartySettings settings, RandomStream rng, RandomStream noise_rng);

    State state() const { return state_; }
    const std::vector<BobEntry>& ledger() const { return ledger_; }
    const std::vector<std::size_t>& disclosed() const { return disclosed_; }

    void measure(QuantumChannel& channel, std::size_t n_pairs);
    BellDisclose disclose();
    const BellCheck& on_bell_disclose(const BellDisclose& from_alice);
    const BellCheck& bell_check() const { return bell_; }

    AuthMessage challenge();
    bool on_reveal(const AliceReveal& reveal);
    const Bits& challenge_plaintext() const { return m_; }

    // Impostors accept whatever reveal arrives.
    void set_accept_any_reveal(bool v) { accept_any_reveal_ = v; }

    BasisAnnounce announce_bases() const;
    void on_basis_announce(const BasisAnnounce& from_alice);
    const std::optional<Bits>& new_key() const { return new_key_; }

    void abort();

  private:
    void expect(State s, std::string_view step) const;

    SharedKey* k1_;
    PartySettings settings_;
    RandomStream rng_;
    RandomStream noise_rng_;
    State state_ = State::ready;
    bool accept_any_reveal_ = false;
    std::vector<BobEntry> ledger_;
    std::vector<std::size_t> disclosed_;
    std::vector<bool> disclosed_mask_;
    BellCheck bell_;
    Bits m_;
    std::optional<Bits> new_key_;
};

// ---------------------------------------------------------------------------
// Session driver.

struct SessionTrace {
    std::vector<std::string> steps;
    std::vector<std::string> messages;   // encoded JSON lines in send order
};

struct EveStrategy;

// Runs Steps 1-8 and stops at the first failed check.
SessionOutcome run_session(const SessionConfig& cfg, const EveStrategy& eve,
                           SessionTrace* trace = nullptr);

// As above; `eve_record` receives every classical message as Eve sees it.
SessionOutcome run_session(const SessionConfig& cfg, const EveStrategy& eve, SessionTrace* trace,
                           std::vector<Message>* eve_record);

}  // namespace qauth
