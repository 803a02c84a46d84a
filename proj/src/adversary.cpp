#include "qauth/adversary.hpp"

#include <algorithm>

#include "qauth/error.hpp"
#include "session_internal.hpp"

namespace qauth {

std::string_view to_string(EveKind k) {
    switch (k) {
        case EveKind::none: return "none";
        case EveKind::intercept_resend: return "intercept_resend";
        case EveKind::mitm_impersonate: return "mitm_impersonate";
        case EveKind::classical_record: return "classical_record";
        case EveKind::replay: return "replay";
    }
    return "unknown";
}

EveKind eve_kind_from_string(std::string_view s) {
    for (const auto k : {EveKind::none, EveKind::intercept_resend, EveKind::mitm_impersonate,
                         EveKind::classical_record, EveKind::replay}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw Error(ErrorKind::invalid_argument, "unknown strategy '" + std::string(s) + "'");
}

EveStrategy EveStrategy::intercept(double fraction, std::vector<MeasurementBasis> bases) {
    EveStrategy s;
    s.kind = EveKind::intercept_resend;
    s.intercept_fraction = fraction;
    s.eve_basis_set = std::move(bases);
    return s;
}

EveStrategy EveStrategy::mitm(std::optional<Bits> guess) {
    EveStrategy s;
    s.kind = EveKind::mitm_impersonate;
    s.guess_key = std::move(guess);
    return s;
}

EveStrategy EveStrategy::record() {
    EveStrategy s;
    s.kind = EveKind::classical_record;
    return s;
}

EveStrategy EveStrategy::replay(std::optional<AuthMessage> msg) {
    EveStrategy s;
    s.kind = EveKind::replay;
    s.replay_message = std::move(msg);
    return s;
}

std::vector<std::string> EveStrategy::validate() const {
    std::vector<std::string> issues;
    if (!(intercept_fraction >= 0.0 && intercept_fraction <= 1.0)) {
        issues.emplace_back("strategy.intercept_fraction: must lie in [0, 1]");
    }
    if (kind == EveKind::intercept_resend && eve_basis_set.empty()) {
        issues.emplace_back("strategy.eve_bases: must not be empty");
    }
    if (kind == EveKind::mitm_impersonate && guess_key && guess_key->empty()) {
        issues.emplace_back("strategy.guess_key: must contain at least one bit");
    }
    return issues;
}

TapResult tap_quantum(std::size_t position, const QubitState& incoming, const EveStrategy& strategy,
                      RandomStream& rng) {
    if (strategy.kind != EveKind::intercept_resend || !rng.bernoulli(strategy.intercept_fraction)) {
        return {incoming, std::nullopt};
    }
    const MeasurementBasis eve_basis =
        strategy.eve_basis_set[rng.uniform_index(strategy.eve_basis_set.size())];
    const Outcome seen = measure(incoming, eve_basis, rng);
    return {QubitState{eve_basis, seen}, Interception{position, eve_basis, seen}};
}

SessionOutcome MitmOutcome::combined() const {
    SessionOutcome out;
    out.bob_verified = alice_side.bob_verified;
    out.alice_verified = bob_side.alice_verified;
    out.channel_clean = alice_side.channel_clean && bob_side.channel_clean;
    out.qber_bell = alice_side.qber_bell;
    out.chsh_s = alice_side.chsh_s;
    out.auth_mismatch_rate = alice_side.auth_mismatch_rate;
    out.matched_auth_count = alice_side.matched_auth_count;
    if (alice_side.abort_reason != AbortReason::none) {
        out.abort_reason = alice_side.abort_reason;
    } else if (bob_side.abort_reason != AbortReason::none) {
        out.abort_reason = bob_side.abort_reason;
    } else {
        out.abort_reason = AbortReason::none;
        out.new_key = k_ae;
        out.bob_new_key = k_eb;
    }
    return out;
}

MitmOutcome run_mitm(const SessionConfig& cfg, const EveStrategy& strategy, SessionTrace* trace) {
    if (const auto issues = cfg.validate(); !issues.empty()) {
        throw Error(ErrorKind::invalid_argument, issues.front());
    }
    MitmOutcome result;
    RandomStream eve_rng = derive_stream(cfg.seed, StreamId::eve);
    if (strategy.guess_key) {
        result.guess_key = *strategy.guess_key;
    } else {
        result.guess_key = SharedKey::random(cfg.key.size(), eve_rng).bits();
    }
    const auto settings = PartySettings::from(cfg);

    // Alice <-> Eve posing as Bob. Eve receives every Bob-bound qubit.
    {
        SharedKey alice_key(cfg.key);
        SharedKey eve_key(result.guess_key);
        Alice alice(alice_key, settings, derive_stream(cfg.seed, StreamId::alice));
        Bob eve_as_bob(eve_key, settings, derive_stream(cfg.seed, StreamId::eve_measure),
                       derive_stream(cfg.seed, StreamId::eve_noise));
        eve_as_bob.set_accept_any_reveal(true);
        QuantumChannel channel;
        channel.open();
        detail::ClassicalLink link(cfg.seed, trace, strategy, nullptr, "[A<->E] ");
        link.step("eve intercepts all qubits, guess key " +
                  (result.guess_key == cfg.key ? std::string("equals K1")
                                               : std::string("differs from K1")));
        result.alice_side = detail::drive_session(alice, eve_as_bob, channel, cfg.n_pairs, link);
        result.k_ae = result.alice_side.new_key;
    }

    // Eve posing as Alice <-> Bob. Eve runs her own singlet source.
    {
        SharedKey eve_key(result.guess_key);
        SharedKey bob_key(cfg.key);
        Alice eve_as_alice(eve_key, settings, derive_stream(cfg.seed, StreamId::eve_source));
        eve_as_alice.set_always_reveal(true);
        Bob bob(bob_key, settings, derive_stream(cfg.seed, StreamId::bob),
                derive_stream(cfg.seed, StreamId::noise));
        QuantumChannel channel;
        channel.open();
        detail::ClassicalLink link(cfg.seed ^ 1, trace, strategy, nullptr, "[E<->B] ");
        result.bob_side = detail::drive_session(eve_as_alice, bob, channel, cfg.n_pairs, link);
        result.k_eb = result.bob_side.bob_new_key;
    }
    return result;
}

ReplayOutcome run_replay_attack(const SessionConfig& cfg, SessionTrace* trace) {
    ReplayOutcome result;
    std::vector<Message> recorded;
    result.recorded = run_session(cfg, EveStrategy::record(), nullptr, &recorded);
    if (!result.recorded.new_key) {
        return result;
    }
    const auto it = std::find_if(recorded.begin(), recorded.end(), [](const Message& m) {
        return std::holds_alternative<AuthMessage>(m.payload);
    });
    if (it == recorded.end()) {
        return result;
    }

    SessionConfig fresh = cfg;
    fresh.key = *result.recorded.new_key;
    fresh.auth_len = 0;
    fresh.seed = mix_seed(cfg.seed ^ 0x5265706C6179ULL);
    fresh.f_auth = std::max(cfg.f_auth, static_cast<double>(fresh.key.size()) /
                                            static_cast<double>(fresh.n_pairs));
    if (trace != nullptr) {
        trace->steps.push_back("replay: recorded session produced K2 of " +
                               std::to_string(fresh.key.size()) +
                               " bits; replaying its auth_challenge into a session keyed with K2");
    }
    result.replayed =
        run_session(fresh, EveStrategy::replay(std::get<AuthMessage>(it->payload)), trace);
    return result;
}

}  // namespace qauth
