#pragma once

// Monte-Carlo experiment runner: config parsing, scenario presets, trial
// batches and JSON/CSV reports.
//
// Trial i of an experiment runs with session seed base_seed + i. Trials are
// independent, so run_experiment may spread them over OpenMP threads; rows
// are always assembled in trial order and the report bytes do not depend on
// the thread count. run_experiment_serial is the single-threaded reference.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qauth/adversary.hpp"
#include "qauth/protocol.hpp"

namespace qauth {

enum class ReportFormat { json, csv };

struct ExperimentConfig {
    std::string name = "custom";
    SessionConfig session;
    EveStrategy strategy;
    std::size_t trials = 1;
    ReportFormat format = ReportFormat::json;
    std::string output_path;   // empty means stdout

    std::vector<std::string> validate() const;
};

struct TrialRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool accepted = false;
    bool bob_verified = false;
    bool alice_verified = false;
    bool channel_clean = false;
    AbortReason abort_reason = AbortReason::inconclusive;
    std::optional<double> qber_bell;
    std::optional<double> chsh_s;
    double auth_mismatch_rate = 0.0;
    std::size_t matched_auth_count = 0;
    std::size_t k2_len = 0;
    bool keys_agree = false;
};

struct Aggregate {
    std::size_t trials = 0;
    double acceptance_rate = 0.0;
    std::optional<double> mean_qber;      // over trials with a QBER estimate
    std::optional<double> mean_abs_s;     // over trials with a CHSH estimate
    double mean_k2_len = 0.0;
    std::map<std::string, std::size_t> abort_histogram;

    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct TrialReport {
    ExperimentConfig config;
    std::vector<TrialRow> rows;
    Aggregate aggregate;
};

TrialRow make_row(std::size_t trial, std::uint64_t seed, const SessionOutcome& o);

// One trial of `cfg` with seed session.seed + trial.
TrialRow run_trial(const ExperimentConfig& cfg, std::size_t trial);

Aggregate aggregate_rows(const std::vector<TrialRow>& rows);

TrialReport run_experiment_serial(const ExperimentConfig& cfg);

// threads <= 0 uses the OpenMP default.
TrialReport run_experiment(const ExperimentConfig& cfg, int threads = 0);

std::string to_json(const TrialReport& report);
std::string to_csv(const TrialReport& report);
std::string render(const TrialReport& report);

// CSV column order.
const std::vector<std::string>& csv_columns();

// Validation error listing every offending field ("line N: ..." for syntax,
// field path for semantics).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

  private:
    std::vector<std::string> issues_;
};

// Flat YAML mapping; see README for the schema.
ExperimentConfig parse_config(std::string_view text);

struct Preset {
    std::string name;
    std::string description;
    std::vector<ExperimentConfig> points;
    std::size_t headline = 0;
    std::string sweep_field;   // empty for single-point presets

    const ExperimentConfig& main() const { return points.at(headline); }
};

const std::vector<Preset>& presets();
// Throws ConfigError for an unknown name.
const Preset& find_preset(std::string_view name);

}  // namespace qauth
