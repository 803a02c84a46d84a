#pragma once

// Codecs between shared keys, basis sequences, outcome strings and the
// XOR cipher used for the authentication challenge.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qauth/quantum_core.hpp"

namespace qauth {

using Bits = std::vector<std::uint8_t>;

// Keys and bit strings travel as ASCII '0'/'1', first bit first.
Bits parse_bits(std::string_view text);
std::string format_bits(std::span<const std::uint8_t> bits);

// Authentication key. Single use: consume() succeeds once per key object.
class SharedKey {
  public:
    SharedKey() = default;
    explicit SharedKey(Bits bits) : bits_(std::move(bits)) {}

    static SharedKey from_string(std::string_view text) { return SharedKey(parse_bits(text)); }
    static SharedKey random(std::size_t length, RandomStream& rng);

    const Bits& bits() const { return bits_; }
    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    std::string str() const { return format_bits(bits_); }

    bool consumed() const { return consumed_; }
    // Throws ErrorKind::key_consumed on the second call.
    void consume();

  private:
    Bits bits_;
    bool consumed_ = false;
};

using BasisSequence = std::vector<MeasurementBasis>;

struct Ciphertext {
    Bits bits;
    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// 0 -> ⊙ (diagonal), 1 -> ⊘ (rectilinear).
BasisSequence key_to_bases(const SharedKey& k);

// Inverse of key_to_bases. Throws invalid_argument on a basis outside {⊘, ⊙}.
Bits bases_to_key(std::span<const MeasurementBasis> bases);

// Repeats `bases` cyclically up to `length` entries.
BasisSequence extend_cyclic(const BasisSequence& bases, std::size_t length);

// Compact display: ⊘ for rectilinear, ⊙ for diagonal.
std::string format_bases(std::span<const MeasurementBasis> bases);

Bits outcomes_to_bits(std::span<const Outcome> outs);
std::vector<Outcome> bits_to_outcomes(std::span<const std::uint8_t> bits);

// y_i = m_i XOR k_(i mod |k|).
Ciphertext otp_encrypt(std::span<const std::uint8_t> m, const SharedKey& k);
Bits otp_decrypt(const Ciphertext& y, const SharedKey& k);

}  // namespace qauth
