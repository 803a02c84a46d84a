#include "qauth/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "qauth/error.hpp"

namespace qauth {

std::string_view to_string(Purpose p) {
    switch (p) {
        case Purpose::auth: return "auth";
        case Purpose::keygen: return "keygen";
        case Purpose::bell_candidate: return "bell_candidate";
    }
    return "unknown";
}

std::string_view to_string(AbortReason r) {
    switch (r) {
        case AbortReason::none: return "none";
        case AbortReason::eavesdropper_detected: return "eavesdropper_detected";
        case AbortReason::bob_rejected: return "bob_rejected";
        case AbortReason::alice_rejected: return "alice_rejected";
        case AbortReason::inconclusive: return "inconclusive";
    }
    return "unknown";
}

AbortReason abort_reason_from_string(std::string_view s) {
    for (const auto r : {AbortReason::none, AbortReason::eavesdropper_detected,
                         AbortReason::bob_rejected, AbortReason::alice_rejected,
                         AbortReason::inconclusive}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw Error(ErrorKind::malformed_message, "unknown abort reason '" + std::string(s) + "'");
}

std::vector<std::string> SessionConfig::validate() const {
    std::vector<std::string> issues;
    const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (n_pairs < 1) {
        issues.emplace_back("session.n_pairs: must be >= 1");
    }
    if (key.empty()) {
        issues.emplace_back("session.key: must contain at least one bit");
    }
    if (!in_unit(f_auth)) {
        issues.emplace_back("session.f_auth: must lie in [0, 1]");
    }
    if (!in_unit(f_disclose)) {
        issues.emplace_back("session.f_disclose: must lie in [0, 1]");
    }
    if (!(e_t >= 0.0 && e_t < 0.5)) {
        issues.emplace_back("session.e_t: must lie in [0, 0.5)");
    }
    if (!(s_min > 0.0 && s_min <= 2.0 * std::numbers::sqrt2 + 1e-12)) {
        issues.emplace_back("session.s_min: must lie in (0, 2*sqrt(2)]");
    }
    if (n_min_auth < 1) {
        issues.emplace_back("session.n_min_auth: must be >= 1");
    }
    if (!noise.valid()) {
        issues.emplace_back("session.p_flip: must lie in [0, 1]");
    }
    if (!key.empty() && n_pairs >= 1 && effective_auth_len() > n_pairs) {
        issues.emplace_back("session.auth_len: exceeds n_pairs");
    }
    return issues;
}

std::vector<PairRecord> merge_ledgers(const std::vector<AliceEntry>& alice,
                                      const std::vector<BobEntry>& bob) {
    if (alice.size() != bob.size()) {
        throw Error(ErrorKind::invalid_argument, "ledgers cover different numbers of pairs");
    }
    std::vector<PairRecord> records(alice.size());
    for (std::size_t i = 0; i < alice.size(); ++i) {
        auto& r = records[i];
        r.index = i;
        r.alice_basis = alice[i].basis;
        r.alice_outcome = alice[i].outcome;
        r.bob_basis = bob[i].basis;
        r.bob_outcome = bob[i].outcome;
        r.purpose = bob[i].purpose;
        r.disclosed = bob[i].purpose == Purpose::bell_candidate;
    }
    return records;
}

void QuantumChannel::send(const QubitState& q) {
    if (!open_) {
        throw Error(ErrorKind::channel_closed, "quantum channel is not open");
    }
    const std::size_t position = in_flight_.size();
    in_flight_.push_back(tap_ ? tap_(position, q) : q);
}

std::vector<QubitState> QuantumChannel::receive_all() {
    if (!open_) {
        throw Error(ErrorKind::channel_closed, "quantum channel is not open");
    }
    return std::exchange(in_flight_, {});
}

std::vector<AliceEntry> alice_measure(QuantumChannel& channel, std::size_t n_pairs,
                                      RandomStream& rng) {
    if (!channel.is_open()) {
        throw Error(ErrorKind::channel_closed, "quantum channel is not open");
    }
    std::vector<AliceEntry> ledger;
    ledger.reserve(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const MeasurementBasis b = angles::alice[rng.uniform_index(angles::alice.size())];
        const Outcome o = from_bit(rng.bit());
        ledger.push_back({b, o});
        channel.send(singlet_partner(b, o));
    }
    return ledger;
}

std::vector<Purpose> bob_assign_purposes(std::size_t n_pairs, double f_auth, std::size_t auth_len,
                                         RandomStream& rng) {
    if (auth_len > n_pairs) {
        throw Error(ErrorKind::not_enough_pairs, std::to_string(auth_len) +
                                                     " auth positions requested from " +
                                                     std::to_string(n_pairs) + " pairs");
    }
    if (static_cast<double>(auth_len) > f_auth * static_cast<double>(n_pairs) + 1e-9) {
        throw Error(ErrorKind::not_enough_pairs,
                    "auth share exceeds f_auth of the available pairs");
    }
    std::vector<Purpose> purposes(n_pairs, Purpose::keygen);
    std::vector<std::size_t> order(n_pairs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < auth_len; ++k) {
        const std::size_t j = k + rng.uniform_index(n_pairs - k);
        std::swap(order[k], order[j]);
        purposes[order[k]] = Purpose::auth;
    }
    return purposes;
}

std::vector<BobEntry> bob_measure(const std::vector<Purpose>& purposes,
                                  const BasisSequence& auth_bases,
                                  const std::vector<QubitState>& incoming, const NoiseModel& noise,
                                  RandomStream& rng, RandomStream& noise_rng) {
    if (incoming.size() != purposes.size()) {
        throw Error(ErrorKind::invalid_argument, "received qubit count differs from purpose count");
    }
    const auto auth_count =
        static_cast<std::size_t>(std::count(purposes.begin(), purposes.end(), Purpose::auth));
    if (auth_bases.size() < auth_count) {
        throw Error(ErrorKind::key_too_short,
                    "basis sequence covers " + std::to_string(auth_bases.size()) + " of " +
                        std::to_string(auth_count) + " auth positions");
    }
    std::vector<BobEntry> ledger(purposes.size());
    std::size_t rank = 0;
    for (std::size_t i = 0; i < purposes.size(); ++i) {
        auto& e = ledger[i];
        e.purpose = purposes[i];
        e.basis = purposes[i] == Purpose::auth ? auth_bases[rank++]
                                               : angles::bob[rng.uniform_index(angles::bob.size())];
        e.outcome = apply_noise(measure(incoming[i], e.basis, rng), noise, noise_rng);
    }
    return ledger;
}

std::vector<std::size_t> select_disclosure(const std::vector<Purpose>& purposes, double f_disclose,
                                           RandomStream& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < purposes.size(); ++i) {
        if (purposes[i] != Purpose::auth) {
            candidates.push_back(i);
        }
    }
    const auto count = static_cast<std::size_t>(
        std::llround(f_disclose * static_cast<double>(candidates.size())));
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = k + rng.uniform_index(candidates.size() - k);
        std::swap(candidates[k], candidates[j]);
    }
    candidates.resize(count);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

BellCheck assess_disclosure(const DisclosedSample& sample, double e_t, double s_min,
                            DetectionChecks checks) {
    BellCheck result;
    result.qber = estimate_qber(sample);
    result.chsh = try_estimate_chsh(sample);
    result.verdict = decide(result.qber, result.chsh, e_t, s_min, checks);
    return result;
}

BellCheck run_bell_check(std::vector<PairRecord>& records, double f_disclose, double s_min,
                         double e_t, RandomStream& rng, DetectionChecks checks) {
    std::vector<Purpose> purposes;
    purposes.reserve(records.size());
    for (const auto& r : records) {
        if (!r.bob_basis || !r.bob_outcome) {
            throw Error(ErrorKind::out_of_order, "Bell check before Bob measured every position");
        }
        purposes.push_back(r.purpose);
    }
    const auto disclosed = select_disclosure(purposes, f_disclose, rng);
    DisclosedSample sample;
    sample.reserve(disclosed.size());
    for (const auto i : disclosed) {
        auto& r = records[i];
        r.disclosed = true;
        r.purpose = Purpose::bell_candidate;
        sample.push_back({r.alice_basis, r.alice_outcome, *r.bob_basis, *r.bob_outcome});
    }
    BellCheck result = assess_disclosure(sample, e_t, s_min, checks);
    result.disclosed = disclosed;
    return result;
}

BuiltChallenge bob_build_auth_message(const std::vector<BobEntry>& bob, const SharedKey& k1) {
    BuiltChallenge out;
    for (std::size_t i = 0; i < bob.size(); ++i) {
        if (bob[i].purpose == Purpose::auth) {
            out.message.indices.push_back(i);
            out.m.push_back(to_bit(bob[i].outcome));
        }
    }
    out.message.ciphertext = otp_encrypt(out.m, k1);
    return out;
}

BobVerification alice_verify_bob(const AuthMessage& msg, const std::vector<AliceEntry>& alice,
                                  const SharedKey& k1, double e_t, std::size_t n_min_auth) {
    const auto& idx = msg.indices;
    if (idx.size() != msg.ciphertext.bits.size()) {
        throw Error(ErrorKind::malformed_message, "index count differs from ciphertext length");
    }
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] >= alice.size() || (r > 0 && idx[r] <= idx[r - 1])) {
            throw Error(ErrorKind::malformed_message,
                        "auth indices must be strictly increasing and inside the session");
        }
    }
    BobVerification v;
    v.m = otp_decrypt(msg.ciphertext, k1);
    const BasisSequence auth_bases = extend_cyclic(key_to_bases(k1), idx.size());
    std::size_t mismatches = 0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto& mine = alice[idx[r]];
        if (mine.basis == auth_bases[r]) {
            ++v.matched_auth_count;
            mismatches += v.m[r] != 1 - to_bit(mine.outcome) ? 1 : 0;
        }
    }
    if (v.matched_auth_count > 0) {
        v.auth_mismatch_rate =
            static_cast<double>(mismatches) / static_cast<double>(v.matched_auth_count);
    }
    v.bob_verified = v.matched_auth_count > 0 && v.matched_auth_count >= n_min_auth &&
                     v.auth_mismatch_rate <= e_t;
    return v;
}

bool bob_verify_alice(const AliceReveal& reveal, const Bits& m) {
    if (reveal.m_prime.size() != m.size()) {
        throw Error(ErrorKind::malformed_message, "revealed string length differs from m");
    }
    return reveal.m_prime == m;
}

NewKeys derive_new_key(const std::vector<PairRecord>& records) {
    NewKeys keys;
    for (const auto& r : records) {
        if (r.purpose == Purpose::auth || r.disclosed || !r.bob_basis || !r.bob_outcome) {
            continue;
        }
        if (r.alice_basis == *r.bob_basis &&
            (r.alice_basis == basis::deg45 || r.alice_basis == basis::deg90)) {
            keys.alice.push_back(to_bit(r.alice_outcome));
            keys.bob.push_back(static_cast<std::uint8_t>(1 - to_bit(*r.bob_outcome)));
        }
    }
    if (keys.alice.empty()) {
        throw Error(ErrorKind::empty_key, "no sifted positions left for a new key");
    }
    return keys;
}

}  // namespace qauth
