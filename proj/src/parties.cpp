#include <algorithm>

#include "qauth/error.hpp"
#include "qauth/protocol.hpp"

namespace qauth {

namespace {

void check_indices(const std::vector<std::size_t>& indices, std::size_t limit) {
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= limit || (r > 0 && indices[r] <= indices[r - 1])) {
            throw Error(ErrorKind::malformed_message,
                        "indices must be strictly increasing and inside the session");
        }
    }
}

}  // namespace

PartySettings PartySettings::from(const SessionConfig& cfg) {
    PartySettings s;
    s.auth_len = cfg.effective_auth_len();
    s.f_auth = cfg.f_auth;
    s.f_disclose = cfg.f_disclose;
    s.e_t = cfg.e_t;
    s.s_min = cfg.s_min;
    s.n_min_auth = cfg.n_min_auth;
    s.checks = cfg.checks;
    s.noise = cfg.noise;
    return s;
}

// ---------------------------------------------------------------------------
// Alice

Alice::Alice(SharedKey& k1, PartySettings settings, RandomStream rng)
    : k1_(&k1), settings_(settings), rng_(rng) {
    if (k1.consumed()) {
        throw Error(ErrorKind::key_consumed, "Alice's authentication key was already used");
    }
}

void Alice::expect(State s, std::string_view step) const {
    if (state_ != s) {
        throw Error(ErrorKind::out_of_order, "Alice cannot " + std::string(step) + " now");
    }
}

void Alice::measure(QuantumChannel& channel, std::size_t n_pairs) {
    expect(State::ready, "measure");
    ledger_ = alice_measure(channel, n_pairs, rng_);
    state_ = State::measured;
}

BellDisclose Alice::on_bell_disclose(const BellDisclose& from_bob) {
    expect(State::measured, "answer a Bell disclosure");
    if (from_bob.from != PartyId::bob || from_bob.bases.size() != from_bob.indices.size() ||
        from_bob.outcomes.size() != from_bob.indices.size()) {
        throw Error(ErrorKind::malformed_message, "Bob's disclosure is inconsistent");
    }
    check_indices(from_bob.indices, ledger_.size());
    BellDisclose mine;
    mine.from = PartyId::alice;
    mine.indices = from_bob.indices;
    DisclosedSample sample;
    sample.reserve(from_bob.indices.size());
    for (std::size_t r = 0; r < from_bob.indices.size(); ++r) {
        const auto& e = ledger_[from_bob.indices[r]];
        mine.bases.push_back(e.basis);
        mine.outcomes.push_back(to_bit(e.outcome));
        sample.push_back({e.basis, e.outcome, from_bob.bases[r], from_bit(from_bob.outcomes[r])});
    }
    bell_ = assess_disclosure(sample, settings_.e_t, settings_.s_min, settings_.checks);
    bell_.disclosed = from_bob.indices;
    if (bell_.clean()) {
        state_ = State::checked;
    } else {
        abort();
    }
    return mine;
}

std::variant<AliceReveal, AbortNotice> Alice::on_auth_challenge(const AuthMessage& msg) {
    expect(State::checked, "verify Bob");
    try {
        verification_ = alice_verify_bob(msg, ledger_, *k1_, settings_.e_t, settings_.n_min_auth);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::malformed_message) {
            throw;
        }
        verification_ = BobVerification{};
    }
    if (verification_.bob_verified || always_reveal_) {
        state_ = State::revealed;
        return AliceReveal{verification_.m};
    }
    abort();
    return AbortNotice{PartyId::alice, AbortReason::bob_rejected};
}

BasisAnnounce Alice::on_basis_announce(const BasisAnnounce& from_bob) {
    expect(State::revealed, "sift a new key");
    if (from_bob.from != PartyId::bob || from_bob.bases.size() != from_bob.indices.size()) {
        throw Error(ErrorKind::malformed_message, "Bob's basis announcement is inconsistent");
    }
    check_indices(from_bob.indices, ledger_.size());
    BasisAnnounce mine;
    mine.from = PartyId::alice;
    mine.indices = from_bob.indices;
    Bits key;
    for (std::size_t r = 0; r < from_bob.indices.size(); ++r) {
        const auto& e = ledger_[from_bob.indices[r]];
        mine.bases.push_back(e.basis);
        if (e.basis == from_bob.bases[r]) {
            key.push_back(to_bit(e.outcome));
        }
    }
    if (!key.empty()) {
        new_key_ = std::move(key);
    }
    k1_->consume();
    state_ = State::done;
    return mine;
}

void Alice::abort() {
    if (state_ == State::done || state_ == State::aborted) {
        return;
    }
    if (!k1_->consumed()) {
        k1_->consume();
    }
    state_ = State::aborted;
}

// ---------------------------------------------------------------------------
// Bob

Bob::Bob(SharedKey& k1, PartySettings settings, RandomStream rng, RandomStream noise_rng)
    : k1_(&k1), settings_(settings), rng_(rng), noise_rng_(noise_rng) {
    if (k1.consumed()) {
        throw Error(ErrorKind::key_consumed, "Bob's authentication key was already used");
    }
}

void Bob::expect(State s, std::string_view step) const {
    if (state_ != s) {
        throw Error(ErrorKind::out_of_order, "Bob cannot " + std::string(step) + " now");
    }
}

void Bob::measure(QuantumChannel& channel, std::size_t n_pairs) {
    expect(State::ready, "measure");
    const auto purposes = bob_assign_purposes(n_pairs, settings_.f_auth, settings_.auth_len, rng_);
    const auto incoming = channel.receive_all();
    if (incoming.size() != n_pairs) {
        throw Error(ErrorKind::invalid_argument, "channel delivered " +
                                                     std::to_string(incoming.size()) +
                                                     " qubits, expected " + std::to_string(n_pairs));
    }
    const auto auth_bases = extend_cyclic(key_to_bases(*k1_), settings_.auth_len);
    ledger_ = bob_measure(purposes, auth_bases, incoming, settings_.noise, rng_, noise_rng_);
    state_ = State::measured;
}

BellDisclose Bob::disclose() {
    expect(State::measured, "disclose");
    std::vector<Purpose> purposes;
    purposes.reserve(ledger_.size());
    for (const auto& e : ledger_) {
        purposes.push_back(e.purpose);
    }
    disclosed_ = select_disclosure(purposes, settings_.f_disclose, rng_);
    disclosed_mask_.assign(ledger_.size(), false);
    BellDisclose mine;
    mine.from = PartyId::bob;
    mine.indices = disclosed_;
    for (const auto i : disclosed_) {
        disclosed_mask_[i] = true;
        ledger_[i].purpose = Purpose::bell_candidate;
        mine.bases.push_back(ledger_[i].basis);
        mine.outcomes.push_back(to_bit(ledger_[i].outcome));
    }
    state_ = State::disclosed;
    return mine;
}

const BellCheck& Bob::on_bell_disclose(const BellDisclose& from_alice) {
    expect(State::disclosed, "evaluate the Bell disclosure");
    if (from_alice.from != PartyId::alice || from_alice.indices != disclosed_ ||
        from_alice.bases.size() != disclosed_.size() ||
        from_alice.outcomes.size() != disclosed_.size()) {
        throw Error(ErrorKind::malformed_message, "Alice's disclosure does not answer Bob's");
    }
    DisclosedSample sample;
    sample.reserve(disclosed_.size());
    for (std::size_t r = 0; r < disclosed_.size(); ++r) {
        const auto& e = ledger_[disclosed_[r]];
        sample.push_back({from_alice.bases[r], from_bit(from_alice.outcomes[r]), e.basis, e.outcome});
    }
    bell_ = assess_disclosure(sample, settings_.e_t, settings_.s_min, settings_.checks);
    bell_.disclosed = disclosed_;
    if (bell_.clean()) {
        state_ = State::checked;
    } else {
        abort();
    }
    return bell_;
}

AuthMessage Bob::challenge() {
    expect(State::checked, "send the challenge");
    auto built = bob_build_auth_message(ledger_, *k1_);
    m_ = std::move(built.m);
    state_ = State::challenged;
    return std::move(built.message);
}

bool Bob::on_reveal(const AliceReveal& reveal) {
    expect(State::challenged, "verify Alice");
    bool ok = false;
    try {
        ok = bob_verify_alice(reveal, m_);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::malformed_message) {
            throw;
        }
    }
    ok = ok || accept_any_reveal_;
    if (!ok) {
        abort();
    }
    return ok;
}

BasisAnnounce Bob::announce_bases() const {
    expect(State::challenged, "announce bases");
    BasisAnnounce mine;
    mine.from = PartyId::bob;
    for (std::size_t i = 0; i < ledger_.size(); ++i) {
        if (ledger_[i].purpose == Purpose::keygen && !disclosed_mask_[i]) {
            mine.indices.push_back(i);
            mine.bases.push_back(ledger_[i].basis);
        }
    }
    return mine;
}

void Bob::on_basis_announce(const BasisAnnounce& from_alice) {
    expect(State::challenged, "sift a new key");
    const BasisAnnounce mine = announce_bases();
    if (from_alice.from != PartyId::alice || from_alice.indices != mine.indices ||
        from_alice.bases.size() != mine.indices.size()) {
        throw Error(ErrorKind::malformed_message, "Alice's basis announcement does not match");
    }
    Bits key;
    for (std::size_t r = 0; r < mine.indices.size(); ++r) {
        const auto& e = ledger_[mine.indices[r]];
        if (e.basis == from_alice.bases[r]) {
            key.push_back(static_cast<std::uint8_t>(1 - to_bit(e.outcome)));
        }
    }
    if (!key.empty()) {
        new_key_ = std::move(key);
    }
    k1_->consume();
    state_ = State::done;
}

void Bob::abort() {
    if (state_ == State::done || state_ == State::aborted) {
        return;
    }
    if (!k1_->consumed()) {
        k1_->consume();
    }
    state_ = State::aborted;
}

}  // namespace qauth
