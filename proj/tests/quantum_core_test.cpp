#include "qauth/quantum_core.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "test_support.hpp"

namespace qauth {
namespace {

using testing::binomial_sigma;

constexpr std::size_t kN = 100000;

double sampled_equal_rate(MeasurementBasis a, MeasurementBasis b, std::uint64_t seed) {
    RandomStream rng(seed);
    std::size_t equal = 0;
    for (std::size_t i = 0; i < kN; ++i) {
        const auto [x, y] = sample_pair(a, b, rng);
        equal += x == y ? 1 : 0;
    }
    return static_cast<double>(equal) / kN;
}

TEST(MeasurementBasis, NormalizesIntoHalfTurn) {
    EXPECT_DOUBLE_EQ(MeasurementBasis(180.0).angle_deg(), 0.0);
    EXPECT_DOUBLE_EQ(MeasurementBasis(225.0).angle_deg(), 45.0);
    EXPECT_DOUBLE_EQ(MeasurementBasis(-90.0).angle_deg(), 90.0);
    EXPECT_DOUBLE_EQ(MeasurementBasis(360.0).angle_deg(), 0.0);
    EXPECT_EQ(MeasurementBasis(180.0), basis::rectilinear);

    EXPECT_TRUE(MeasurementBasis::normalize(180.0).second);
    EXPECT_TRUE(MeasurementBasis::normalize(-90.0).second);
    EXPECT_FALSE(MeasurementBasis::normalize(360.0).second);
    EXPECT_FALSE(MeasurementBasis::normalize(135.0).second);
}

TEST(MeasurementBasis, NamedConstants) {
    EXPECT_DOUBLE_EQ(basis::rectilinear.angle_deg(), 0.0);
    EXPECT_DOUBLE_EQ(basis::diagonal.angle_deg(), 90.0);
}

TEST(CorrelationExpect, WorkedValues) {
    EXPECT_DOUBLE_EQ(correlation_expect(basis::deg0, basis::deg0), -1.0);
    EXPECT_NEAR(correlation_expect(basis::deg0, basis::deg90), 0.0, 1e-15);
    // -cos(45 deg) = -sqrt(2)/2
    EXPECT_NEAR(correlation_expect(basis::deg0, basis::deg45), -std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_NEAR(correlation_expect(basis::deg0, basis::deg45), -0.70711, 5e-6);
}

TEST(CorrelationExpect, SymmetricAndBounded) {
    for (double a = 0.0; a < 180.0; a += 7.5) {
        for (double b = 0.0; b < 180.0; b += 7.5) {
            const MeasurementBasis ba(a), bb(b);
            const double e = correlation_expect(ba, bb);
            EXPECT_GE(e, -1.0);
            EXPECT_LE(e, 1.0);
            EXPECT_DOUBLE_EQ(e, correlation_expect(bb, ba));
        }
        EXPECT_DOUBLE_EQ(correlation_expect(MeasurementBasis(a), MeasurementBasis(a)), -1.0);
    }
}

TEST(SamplePair, SameBasisAlwaysAntiCorrelated) {
    RandomStream rng(11);
    for (int i = 0; i < 10000; ++i) {
        const auto [x, y] = sample_pair(basis::deg0, basis::deg0, rng);
        ASSERT_NE(x, y);
    }
}

TEST(SamplePair, UnbiasedBasesGiveHalfAgreement) {
    EXPECT_NEAR(sampled_equal_rate(basis::deg0, basis::deg90, 21), 0.5, 0.01);
}

TEST(SamplePair, FortyFiveDegreeAgreement) {
    // (1 - sqrt(2)/2) / 2
    EXPECT_NEAR(sampled_equal_rate(basis::deg0, basis::deg45, 31), 0.14645, 0.01);
}

TEST(SamplePair, EqualRateWithinFourSigmaOfSingletPrediction) {
    const std::array<double, 6> angles{0.0, 30.0, 45.0, 90.0, 135.0, 170.0};
    std::uint64_t seed = 100;
    for (const double a : angles) {
        for (const double b : angles) {
            const double delta = testing::deg_to_rad(a - b);
            const double expected = (1.0 - std::cos(delta)) / 2.0;
            const double rate = sampled_equal_rate(MeasurementBasis(a), MeasurementBasis(b), ++seed);
            const double sigma = std::max(binomial_sigma(expected, kN), 1.0 / kN);
            EXPECT_LE(std::abs(rate - expected), 4.0 * sigma) << a << " vs " << b;
        }
    }
}

TEST(SamplePair, MarginalsAreUniform) {
    const std::array<double, 4> angles{0.0, 45.0, 90.0, 135.0};
    const double sigma = binomial_sigma(0.5, kN);
    std::uint64_t seed = 500;
    for (const double a : angles) {
        for (const double b : angles) {
            RandomStream rng(++seed);
            std::size_t first_up = 0;
            std::size_t second_up = 0;
            for (std::size_t i = 0; i < kN; ++i) {
                const auto [x, y] = sample_pair(MeasurementBasis(a), MeasurementBasis(b), rng);
                first_up += x == Outcome::up ? 1 : 0;
                second_up += y == Outcome::up ? 1 : 0;
            }
            EXPECT_LE(std::abs(static_cast<double>(first_up) / kN - 0.5), 4.0 * sigma);
            EXPECT_LE(std::abs(static_cast<double>(second_up) / kN - 0.5), 4.0 * sigma);
        }
    }
}

TEST(SamplePair, DeterministicForSeed) {
    RandomStream r1(77);
    RandomStream r2(77);
    for (int i = 0; i < 1000; ++i) {
        const MeasurementBasis b(static_cast<double>(i % 180));
        ASSERT_EQ(sample_pair(basis::deg45, b, r1), sample_pair(basis::deg45, b, r2));
    }
}

TEST(SamplePair, JointDistributionSymmetricUnderSwap) {
    const MeasurementBasis a(30.0), b(100.0);
    RandomStream r1(5), r2(6);
    std::array<double, 4> ab{}, ba{};
    for (std::size_t i = 0; i < kN; ++i) {
        const auto [x, y] = sample_pair(a, b, r1);
        ab[to_bit(x) * 2 + to_bit(y)] += 1.0 / kN;
        const auto [u, v] = sample_pair(b, a, r2);
        ba[to_bit(v) * 2 + to_bit(u)] += 1.0 / kN;
    }
    for (std::size_t k = 0; k < 4; ++k) {
        const double p = (ab[k] + ba[k]) / 2.0;
        // Two independent estimates: difference sigma is sqrt(2) * binomial sigma.
        EXPECT_LE(std::abs(ab[k] - ba[k]), 4.0 * std::sqrt(2.0) * binomial_sigma(p, kN));
    }
}

TEST(ResendMeasure, SameAnalyzerKeepsOutcome) {
    RandomStream rng(1);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(resend_measure(basis::deg0, Outcome::down, basis::deg0, rng), Outcome::down);
        ASSERT_EQ(resend_measure(basis::deg0, Outcome::up, MeasurementBasis(180.0), rng),
                  Outcome::up);
    }
}

TEST(ResendMeasure, UnbiasedAnalyzerIsAFairCoin) {
    RandomStream rng(2);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < kN; ++i) {
        kept += resend_measure(basis::deg0, Outcome::up, basis::deg90, rng) == Outcome::up ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(kept) / kN, 0.5, 0.01);
}

TEST(ApplyNoise, Extremes) {
    RandomStream rng(3);
    EXPECT_EQ(apply_noise(Outcome::up, NoiseModel{0.0}, rng), Outcome::up);
    EXPECT_EQ(apply_noise(Outcome::down, NoiseModel{1.0}, rng), Outcome::up);
    EXPECT_FALSE(NoiseModel{1.5}.valid());
    EXPECT_FALSE(NoiseModel{-0.1}.valid());
}

TEST(ApplyNoise, FlipRateMatchesModel) {
    RandomStream rng(4);
    std::size_t flips = 0;
    for (std::size_t i = 0; i < kN; ++i) {
        flips += apply_noise(Outcome::up, NoiseModel{0.05}, rng) == Outcome::down ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(flips) / kN, 0.05, 0.005);
}

TEST(RandomStream, UniformIndexCoversRange) {
    RandomStream rng(9);
    std::array<std::size_t, 3> counts{};
    for (int i = 0; i < 30000; ++i) {
        ++counts[rng.uniform_index(3)];
    }
    for (const auto c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / 30000.0, 1.0 / 3.0, 0.015);
    }
}

}  // namespace
}  // namespace qauth
