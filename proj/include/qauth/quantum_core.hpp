#pragma once

// Two-outcome spin-1/2 singlet statistics on a measurement plane.
//
// Angles are analyzer orientations in degrees. Two analyzers 180 degrees
// apart measure the same observable with relabeled outcomes, so every basis
// is stored in [0, 180). The singlet correlation is E(a, b) = -cos(a - b).

#include <cstdint>
#include <utility>

#include "qauth/random.hpp"

namespace qauth {

enum class Outcome : std::uint8_t { up = 0, down = 1 };

constexpr Outcome flip(Outcome o) { return o == Outcome::up ? Outcome::down : Outcome::up; }
constexpr std::uint8_t to_bit(Outcome o) { return static_cast<std::uint8_t>(o); }
constexpr Outcome from_bit(std::uint8_t b) { return b ? Outcome::down : Outcome::up; }

class MeasurementBasis {
  public:
    constexpr MeasurementBasis() = default;
    explicit MeasurementBasis(double angle_deg) : angle_deg_(normalize(angle_deg).first) {}

    double angle_deg() const { return angle_deg_; }

    // Splits an arbitrary angle into its [0, 180) analyzer and whether the
    // outcome labels are swapped relative to that analyzer.
    static std::pair<double, bool> normalize(double angle_deg);

    friend bool operator==(const MeasurementBasis&, const MeasurementBasis&) = default;

  private:
    double angle_deg_ = 0.0;
};

namespace basis {
inline const MeasurementBasis rectilinear{0.0};   // ⊘
inline const MeasurementBasis diagonal{90.0};     // ⊙
inline const MeasurementBasis deg0{0.0};
inline const MeasurementBasis deg45{45.0};
inline const MeasurementBasis deg90{90.0};
inline const MeasurementBasis deg135{135.0};
}  // namespace basis

struct NoiseModel {
    double p_flip = 0.0;

    bool valid() const { return p_flip >= 0.0 && p_flip <= 1.0; }
};

// Pure spin state along `basis` with the given outcome label, i.e. the state
// a measurement at `basis` would return `outcome` for with certainty.
struct QubitState {
    MeasurementBasis basis;
    Outcome outcome = Outcome::up;

    friend bool operator==(const QubitState&, const QubitState&) = default;
};

double correlation_expect(MeasurementBasis a, MeasurementBasis b);

// Probability that both parties report the same outcome: (1 + E(a, b)) / 2.
double equal_probability(MeasurementBasis a, MeasurementBasis b);

std::pair<Outcome, Outcome> sample_pair(MeasurementBasis a, MeasurementBasis b, RandomStream& rng);

// Measures the eigenstate (prepared, prepared_outcome) at analyzer b.
Outcome resend_measure(MeasurementBasis prepared, Outcome prepared_outcome, MeasurementBasis b,
                       RandomStream& rng);

inline Outcome measure(const QubitState& state, MeasurementBasis b, RandomStream& rng) {
    return resend_measure(state.basis, state.outcome, b, rng);
}

// State of the partner particle once one half of a singlet was measured.
inline QubitState singlet_partner(MeasurementBasis measured, Outcome result) {
    return {measured, flip(result)};
}

Outcome apply_noise(Outcome o, const NoiseModel& nm, RandomStream& rng);

}  // namespace qauth
