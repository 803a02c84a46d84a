#include <nlohmann/json.hpp>

#include "qauth/error.hpp"
#include "qauth/protocol.hpp"

namespace qauth {

namespace {

using nlohmann::json;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string_view party_name(PartyId p) { return p == PartyId::alice ? "alice" : "bob"; }

PartyId party_from(const json& j) {
    const auto s = j.get<std::string>();
    if (s == "alice") {
        return PartyId::alice;
    }
    if (s == "bob") {
        return PartyId::bob;
    }
    throw Error(ErrorKind::malformed_message, "unknown party '" + s + "'");
}

json angles_json(const std::vector<MeasurementBasis>& bases) {
    json arr = json::array();
    for (const auto& b : bases) {
        arr.push_back(b.angle_deg());
    }
    return arr;
}

std::vector<MeasurementBasis> angles_from(const json& j) {
    std::vector<MeasurementBasis> out;
    for (const auto& v : j) {
        out.emplace_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string_view message_type(const Payload& p) {
    return std::visit(overloaded{
                          [](const BasisAnnounce&) { return std::string_view("basis_announce"); },
                          [](const BellDisclose&) { return std::string_view("bell_disclose"); },
                          [](const AuthMessage&) { return std::string_view("auth_challenge"); },
                          [](const AliceReveal&) { return std::string_view("auth_reveal"); },
                          [](const AbortNotice&) { return std::string_view("abort"); },
                      },
                      p);
}

std::string encode_message(const Message& m) {
    json payload = std::visit(
        overloaded{
            [](const BasisAnnounce& a) {
                return json{{"from", party_name(a.from)},
                            {"indices", a.indices},
                            {"bases", angles_json(a.bases)}};
            },
            [](const BellDisclose& d) {
                return json{{"from", party_name(d.from)},
                            {"indices", d.indices},
                            {"bases", angles_json(d.bases)},
                            {"outcomes", format_bits(d.outcomes)}};
            },
            [](const AuthMessage& a) {
                return json{{"indices", a.indices},
                            {"ciphertext", format_bits(a.ciphertext.bits)}};
            },
            [](const AliceReveal& r) { return json{{"m_prime", format_bits(r.m_prime)}}; },
            [](const AbortNotice& a) {
                return json{{"from", party_name(a.from)}, {"reason", to_string(a.reason)}};
            },
        },
        m.payload);
    const json line{{"type", message_type(m.payload)},
                    {"session_id", m.session_id},
                    {"payload", std::move(payload)}};
    return line.dump();
}

Message decode_message(std::string_view line) {
    try {
        const json j = json::parse(line);
        Message m;
        m.session_id = j.at("session_id").get<std::uint64_t>();
        const auto type = j.at("type").get<std::string>();
        const json& p = j.at("payload");
        if (type == "basis_announce") {
            BasisAnnounce a;
            a.from = party_from(p.at("from"));
            a.indices = p.at("indices").get<std::vector<std::size_t>>();
            a.bases = angles_from(p.at("bases"));
            if (a.indices.size() != a.bases.size()) {
                throw Error(ErrorKind::malformed_message, "basis_announce length mismatch");
            }
            m.payload = std::move(a);
        } else if (type == "bell_disclose") {
            BellDisclose d;
            d.from = party_from(p.at("from"));
            d.indices = p.at("indices").get<std::vector<std::size_t>>();
            d.bases = angles_from(p.at("bases"));
            d.outcomes = parse_bits(p.at("outcomes").get<std::string>());
            if (d.indices.size() != d.bases.size() || d.indices.size() != d.outcomes.size()) {
                throw Error(ErrorKind::malformed_message, "bell_disclose length mismatch");
            }
            m.payload = std::move(d);
        } else if (type == "auth_challenge") {
            AuthMessage a;
            a.indices = p.at("indices").get<std::vector<std::size_t>>();
            a.ciphertext.bits = parse_bits(p.at("ciphertext").get<std::string>());
            m.payload = std::move(a);
        } else if (type == "auth_reveal") {
            m.payload = AliceReveal{parse_bits(p.at("m_prime").get<std::string>())};
        } else if (type == "abort") {
            m.payload = AbortNotice{party_from(p.at("from")),
                                    abort_reason_from_string(p.at("reason").get<std::string>())};
        } else {
            throw Error(ErrorKind::malformed_message, "unknown message type '" + type + "'");
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::malformed_message, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::malformed_message) {
            throw;
        }
        throw Error(ErrorKind::malformed_message, e.what());
    }
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json optional_bits(const std::optional<Bits>& v) {
    return v ? json(format_bits(*v)) : json(nullptr);
}

}  // namespace

std::string to_json_string(const SessionOutcome& o) {
    const json j{
        {"abort_reason", to_string(o.abort_reason)},
        {"alice_verified", o.alice_verified},
        {"auth_mismatch_rate", o.auth_mismatch_rate},
        {"bob_new_key", optional_bits(o.bob_new_key)},
        {"bob_verified", o.bob_verified},
        {"channel_clean", o.channel_clean},
        {"chsh_s", optional_number(o.chsh_s)},
        {"matched_auth_count", o.matched_auth_count},
        {"new_key", optional_bits(o.new_key)},
        {"qber_bell", optional_number(o.qber_bell)},
    };
    return j.dump();
}

}  // namespace qauth
