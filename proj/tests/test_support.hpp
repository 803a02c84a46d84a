#pragma once

#include <cmath>
#include <cstddef>

namespace qauth::testing {

inline double binomial_sigma(double p, std::size_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline double deg_to_rad(double d) { return d * 3.14159265358979323846 / 180.0; }

}  // namespace qauth::testing
