#include "qauth/keycodec.hpp"

#include "qauth/error.hpp"

namespace qauth {

namespace {

Bits xor_keystream(std::span<const std::uint8_t> data, const SharedKey& k) {
    if (k.empty()) {
        throw Error(ErrorKind::empty_key, "cipher key has no bits");
    }
    const Bits& key = k.bits();
    Bits out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(data[i] ^ key[i % key.size()]);
    }
    return out;
}

}  // namespace

Bits parse_bits(std::string_view text) {
    Bits bits;
    bits.reserve(text.size());
    for (const char c : text) {
        if (c != '0' && c != '1') {
            throw Error(ErrorKind::invalid_argument,
                        "bit string may only contain '0' and '1', got '" + std::string(1, c) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (const auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

SharedKey SharedKey::random(std::size_t length, RandomStream& rng) {
    Bits bits(length);
    for (auto& b : bits) {
        b = rng.bit();
    }
    return SharedKey(std::move(bits));
}

void SharedKey::consume() {
    if (consumed_) {
        throw Error(ErrorKind::key_consumed, "authentication key already used in a session");
    }
    consumed_ = true;
}

BasisSequence key_to_bases(const SharedKey& k) {
    if (k.empty()) {
        throw Error(ErrorKind::empty_key, "cannot derive a basis sequence from an empty key");
    }
    BasisSequence seq;
    seq.reserve(k.size());
    for (const auto b : k.bits()) {
        seq.push_back(b ? basis::rectilinear : basis::diagonal);
    }
    return seq;
}

Bits bases_to_key(std::span<const MeasurementBasis> bases) {
    Bits bits;
    bits.reserve(bases.size());
    for (const auto& b : bases) {
        if (b == basis::rectilinear) {
            bits.push_back(1);
        } else if (b == basis::diagonal) {
            bits.push_back(0);
        } else {
            throw Error(ErrorKind::invalid_argument, "basis is neither rectilinear nor diagonal");
        }
    }
    return bits;
}

BasisSequence extend_cyclic(const BasisSequence& bases, std::size_t length) {
    if (bases.empty()) {
        throw Error(ErrorKind::empty_key, "cannot extend an empty basis sequence");
    }
    BasisSequence out;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        out.push_back(bases[i % bases.size()]);
    }
    return out;
}

std::string format_bases(std::span<const MeasurementBasis> bases) {
    std::string s;
    for (const auto& b : bases) {
        if (b == basis::rectilinear) {
            s += "⊘";
        } else if (b == basis::diagonal) {
            s += "⊙";
        } else {
            s += "?";
        }
    }
    return s;
}

Bits outcomes_to_bits(std::span<const Outcome> outs) {
    Bits bits;
    bits.reserve(outs.size());
    for (const auto o : outs) {
        bits.push_back(to_bit(o));
    }
    return bits;
}

std::vector<Outcome> bits_to_outcomes(std::span<const std::uint8_t> bits) {
    std::vector<Outcome> outs;
    outs.reserve(bits.size());
    for (const auto b : bits) {
        outs.push_back(from_bit(b));
    }
    return outs;
}

Ciphertext otp_encrypt(std::span<const std::uint8_t> m, const SharedKey& k) {
    return Ciphertext{xor_keystream(m, k)};
}

Bits otp_decrypt(const Ciphertext& y, const SharedKey& k) { return xor_keystream(y.bits, k); }

}  // namespace qauth
