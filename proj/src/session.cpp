#include <cstdio>
#include <iomanip>
#include <sstream>

#include "qauth/adversary.hpp"
#include "qauth/error.hpp"
#include "qauth/protocol.hpp"
#include "session_internal.hpp"

namespace qauth {

namespace detail {

namespace {

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

std::string describe(const BellCheck& bell) {
    std::string s = "disclosed=" + std::to_string(bell.disclosed.size());
    s += " qber=" + (bell.qber ? fmt(*bell.qber) : std::string("n/a"));
    s += " S=" + (bell.chsh ? fmt(bell.chsh->s) : std::string("n/a"));
    s += " verdict=" + std::string(to_string(bell.verdict));
    return s;
}

}  // namespace

SessionOutcome drive_session(Alice& alice, Bob& bob, QuantumChannel& channel, std::size_t n_pairs,
                             ClassicalLink& link) {
    SessionOutcome out;

    // Steps 2-3.
    alice.measure(channel, n_pairs);
    bob.measure(channel, n_pairs);
    channel.close();
    link.step("step 2: source emitted " + std::to_string(n_pairs) +
              " singlet pairs; Alice measured in random bases from {0,45,90}");
    if (link.tracing()) {
        std::size_t auth = 0;
        for (const auto& e : bob.ledger()) {
            auth += e.purpose == Purpose::auth ? 1 : 0;
        }
        link.step("step 3: Bob measured " + std::to_string(auth) +
                  " auth positions in M_K1 and the rest in {45,90,135}");
    }

    // Step 4.
    const BellDisclose from_bob = link.deliver(bob.disclose());
    const BellDisclose from_alice = link.deliver(alice.on_bell_disclose(from_bob));
    const BellCheck& bell = bob.on_bell_disclose(from_alice);
    out.qber_bell = bell.qber;
    out.chsh_s = bell.chsh ? std::optional<double>(bell.chsh->s) : std::nullopt;
    link.step("step 4: eavesdropping check " + describe(bell));
    if (!bell.clean()) {
        out.abort_reason = bell.verdict == ChannelVerdict::inconclusive
                               ? AbortReason::inconclusive
                               : AbortReason::eavesdropper_detected;
        link.deliver(AbortNotice{PartyId::bob, out.abort_reason});
        alice.abort();
        link.step("abort: " + std::string(to_string(out.abort_reason)));
        return out;
    }
    out.channel_clean = true;

    // Step 5.
    const AuthMessage challenge = link.deliver(bob.challenge());
    link.step("step 5: Bob sent y = E_K1(m) over " + std::to_string(challenge.indices.size()) +
              " auth positions");

    // Step 6.
    const auto response = alice.on_auth_challenge(challenge);
    const auto& v = alice.verification();
    out.matched_auth_count = v.matched_auth_count;
    out.auth_mismatch_rate = v.auth_mismatch_rate;
    out.bob_verified = v.bob_verified;
    link.step("step 6: Alice matched " + std::to_string(v.matched_auth_count) +
              " auth positions, mismatch=" + fmt(v.auth_mismatch_rate) +
              (v.bob_verified ? " -> Bob verified" : " -> Bob rejected"));
    if (std::holds_alternative<AbortNotice>(response)) {
        link.deliver(std::get<AbortNotice>(response));
        bob.abort();
        out.abort_reason = AbortReason::bob_rejected;
        link.step("abort: bob_rejected");
        return out;
    }

    // Step 7.
    const AliceReveal reveal = link.deliver(std::get<AliceReveal>(response));
    const bool alice_ok = bob.on_reveal(reveal);
    link.step(std::string("step 7: Bob compared m' with m -> ") +
              (alice_ok ? "Alice verified" : "Alice rejected"));
    if (!alice_ok) {
        link.deliver(AbortNotice{PartyId::bob, AbortReason::alice_rejected});
        alice.abort();
        out.abort_reason = AbortReason::alice_rejected;
        link.step("abort: alice_rejected");
        return out;
    }
    out.alice_verified = true;

    // Step 8.
    const BasisAnnounce bob_bases = link.deliver(bob.announce_bases());
    const BasisAnnounce alice_bases = link.deliver(alice.on_basis_announce(bob_bases));
    bob.on_basis_announce(alice_bases);
    out.new_key = alice.new_key();
    out.bob_new_key = bob.new_key();
    out.abort_reason = AbortReason::none;
    link.step("step 8: K1 discarded; sifted K2 of " +
              std::to_string(out.new_key ? out.new_key->size() : 0) + " bits" +
              (out.keys_agree() ? " (parties agree)" : " (parties differ)"));
    return out;
}

}  // namespace detail

SessionOutcome run_session(const SessionConfig& cfg, const EveStrategy& eve, SessionTrace* trace) {
    return run_session(cfg, eve, trace, nullptr);
}

SessionOutcome run_session(const SessionConfig& cfg, const EveStrategy& eve, SessionTrace* trace,
                           std::vector<Message>* eve_record) {
    if (const auto issues = cfg.validate(); !issues.empty()) {
        throw Error(ErrorKind::invalid_argument, issues.front());
    }
    if (eve.kind == EveKind::mitm_impersonate) {
        return run_mitm(cfg, eve, trace).combined();
    }
    if (eve.kind == EveKind::replay && !eve.replay_message) {
        const auto r = run_replay_attack(cfg, trace);
        if (r.replayed) {
            return *r.replayed;
        }
        SessionOutcome none;
        none.abort_reason = AbortReason::inconclusive;
        return none;
    }

    SharedKey alice_key(cfg.key);
    SharedKey bob_key(cfg.key);
    const auto settings = PartySettings::from(cfg);
    Alice alice(alice_key, settings, derive_stream(cfg.seed, StreamId::alice));
    Bob bob(bob_key, settings, derive_stream(cfg.seed, StreamId::bob),
            derive_stream(cfg.seed, StreamId::noise));

    RandomStream eve_rng = derive_stream(cfg.seed, StreamId::eve);
    QuantumChannel channel;
    channel.open();
    if (eve.kind == EveKind::intercept_resend) {
        channel.set_tap([&eve, &eve_rng](std::size_t position, const QubitState& q) {
            return tap_quantum(position, q, eve, eve_rng).forwarded;
        });
    }

    detail::ClassicalLink link(cfg.seed, trace, eve, eve_record);
    link.step("step 1: K1=" + (cfg.key.size() <= 64 ? format_bits(cfg.key)
                                                      : std::to_string(cfg.key.size()) + " bits") +
              " -> M_K1 of " + std::to_string(settings.auth_len) + " bases" +
              (cfg.key.size() <= 16 ? " (" + format_bases(key_to_bases(SharedKey(cfg.key))) + ")"
                                    : std::string()));
    if (eve.kind != EveKind::none) {
        link.step("eve: " + std::string(to_string(eve.kind)));
    }
    return detail::drive_session(alice, bob, channel, cfg.n_pairs, link);
}

}  // namespace qauth
