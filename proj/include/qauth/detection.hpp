#pragma once

// Step-4 estimators: CHSH statistic over the Ekert angle cells and the
// matched-basis anti-correlation error rate.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qauth/quantum_core.hpp"

namespace qauth {

struct DisclosedEntry {
    MeasurementBasis alice_basis;
    Outcome alice_outcome = Outcome::up;
    MeasurementBasis bob_basis;
    Outcome bob_outcome = Outcome::up;
};

using DisclosedSample = std::vector<DisclosedEntry>;

// Cells in combination order: (0,45), (0,135), (90,45), (90,135).
inline constexpr std::array<std::pair<double, double>, 4> kChshCells{{
    {0.0, 45.0}, {0.0, 135.0}, {90.0, 45.0}, {90.0, 135.0}}};
inline constexpr std::array<double, 4> kChshSigns{+1.0, -1.0, +1.0, +1.0};

struct ChshEstimate {
    double s = 0.0;
    std::array<std::size_t, 4> cell_counts{};
    std::array<double, 4> per_cell_correlation{};
    std::array<double, 4> per_cell_stderr{};

    // Propagated standard error of s, assuming independent cells.
    double stderr_s() const;
};

// Fraction of matched-basis positions whose outcomes agree. Empty when no
// position has matching bases.
std::optional<double> estimate_qber(const DisclosedSample& sample);

// Throws ErrorKind::insufficient_cells when any CHSH cell is empty.
ChshEstimate estimate_chsh(const DisclosedSample& sample);

// Nullopt instead of throwing when a cell is empty.
std::optional<ChshEstimate> try_estimate_chsh(const DisclosedSample& sample);

enum class ChannelVerdict { clean, eavesdropper_detected, inconclusive };

std::string_view to_string(ChannelVerdict v);

struct DetectionChecks {
    bool use_qber = true;
    bool use_chsh = true;
};

// clean iff qber <= e_t and |s| >= s_min; a missing estimate for an enabled
// check is inconclusive.
ChannelVerdict decide(std::optional<double> qber, const std::optional<ChshEstimate>& chsh,
                      double e_t, double s_min, DetectionChecks checks = {});

}  // namespace qauth
