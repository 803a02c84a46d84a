#include "qauth/detection.hpp"

#include <cmath>

#include "qauth/error.hpp"

namespace qauth {

double ChshEstimate::stderr_s() const {
    double var = 0.0;
    for (const double se : per_cell_stderr) {
        var += se * se;
    }
    return std::sqrt(var);
}

std::optional<double> estimate_qber(const DisclosedSample& sample) {
    std::size_t matched = 0;
    std::size_t equal = 0;
    for (const auto& e : sample) {
        if (e.alice_basis == e.bob_basis) {
            ++matched;
            equal += e.alice_outcome == e.bob_outcome ? 1 : 0;
        }
    }
    if (matched == 0) {
        return std::nullopt;
    }
    return static_cast<double>(equal) / static_cast<double>(matched);
}

std::optional<ChshEstimate> try_estimate_chsh(const DisclosedSample& sample) {
    std::array<std::size_t, 4> counts{};
    std::array<long long, 4> sums{};
    for (const auto& e : sample) {
        const double a = e.alice_basis.angle_deg();
        const double b = e.bob_basis.angle_deg();
        for (std::size_t c = 0; c < kChshCells.size(); ++c) {
            if (a == kChshCells[c].first && b == kChshCells[c].second) {
                ++counts[c];
                sums[c] += e.alice_outcome == e.bob_outcome ? 1 : -1;
                break;
            }
        }
    }
    ChshEstimate est;
    est.cell_counts = counts;
    for (std::size_t c = 0; c < 4; ++c) {
        if (counts[c] == 0) {
            return std::nullopt;
        }
        const double n = static_cast<double>(counts[c]);
        const double corr = static_cast<double>(sums[c]) / n;
        est.per_cell_correlation[c] = corr;
        est.per_cell_stderr[c] = std::sqrt(std::max(0.0, 1.0 - corr * corr) / n);
        est.s += kChshSigns[c] * corr;
    }
    return est;
}

ChshEstimate estimate_chsh(const DisclosedSample& sample) {
    auto est = try_estimate_chsh(sample);
    if (!est) {
        throw Error(ErrorKind::insufficient_cells, "a CHSH angle cell has no disclosed positions");
    }
    return *est;
}

std::string_view to_string(ChannelVerdict v) {
    switch (v) {
        case ChannelVerdict::clean: return "clean";
        case ChannelVerdict::eavesdropper_detected: return "eavesdropper_detected";
        case ChannelVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

ChannelVerdict decide(std::optional<double> qber, const std::optional<ChshEstimate>& chsh,
                      double e_t, double s_min, DetectionChecks checks) {
    if ((checks.use_qber && !qber) || (checks.use_chsh && !chsh)) {
        return ChannelVerdict::inconclusive;
    }
    const bool qber_ok = !checks.use_qber || *qber <= e_t;
    const bool chsh_ok = !checks.use_chsh || std::abs(chsh->s) >= s_min;
    return qber_ok && chsh_ok ? ChannelVerdict::clean : ChannelVerdict::eavesdropper_detected;
}

}  // namespace qauth
