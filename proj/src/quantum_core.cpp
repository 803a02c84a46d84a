#include "qauth/quantum_core.hpp"

#include <cmath>
#include <numbers>

namespace qauth {

std::pair<double, bool> MeasurementBasis::normalize(double angle_deg) {
    double reduced = std::fmod(angle_deg, 360.0);
    if (reduced < 0.0) {
        reduced += 360.0;
    }
    bool relabeled = false;
    if (reduced >= 180.0) {
        reduced -= 180.0;
        relabeled = true;
    }
    // fmod can land exactly on the upper bound after the shift for tiny negatives.
    if (reduced >= 180.0) {
        reduced = 0.0;
        relabeled = !relabeled;
    }
    return {reduced, relabeled};
}

double correlation_expect(MeasurementBasis a, MeasurementBasis b) {
    const double delta = (a.angle_deg() - b.angle_deg()) * std::numbers::pi / 180.0;
    return -std::cos(delta);
}

double equal_probability(MeasurementBasis a, MeasurementBasis b) {
    return (1.0 + correlation_expect(a, b)) / 2.0;
}

std::pair<Outcome, Outcome> sample_pair(MeasurementBasis a, MeasurementBasis b, RandomStream& rng) {
    const Outcome first = from_bit(rng.bit());
    const Outcome second = measure(singlet_partner(a, first), b, rng);
    return {first, second};
}

Outcome resend_measure(MeasurementBasis prepared, Outcome prepared_outcome, MeasurementBasis b,
                       RandomStream& rng) {
    const double delta = (b.angle_deg() - prepared.angle_deg()) * std::numbers::pi / 180.0;
    const double keep = (1.0 + std::cos(delta)) / 2.0;
    return rng.bernoulli(keep) ? prepared_outcome : flip(prepared_outcome);
}

Outcome apply_noise(Outcome o, const NoiseModel& nm, RandomStream& rng) {
    return rng.bernoulli(nm.p_flip) ? flip(o) : o;
}

}  // namespace qauth
