#include "qauth/harness.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qauth/error.hpp"

namespace qauth {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string number_text(double v) { return json(v).dump(); }

json config_json(const ExperimentConfig& cfg) {
    const auto& s = cfg.session;
    json bases = json::array();
    for (const auto& b : cfg.strategy.eve_basis_set) {
        bases.push_back(b.angle_deg());
    }
    json strategy{{"kind", to_string(cfg.strategy.kind)}};
    if (cfg.strategy.kind == EveKind::intercept_resend) {
        strategy["intercept_fraction"] = cfg.strategy.intercept_fraction;
        strategy["eve_bases"] = bases;
    }
    if (cfg.strategy.kind == EveKind::mitm_impersonate) {
        strategy["guess_key"] = cfg.strategy.guess_key ? json(format_bits(*cfg.strategy.guess_key))
                                                       : json("random");
    }
    return json{
        {"name", cfg.name},
        {"trials", cfg.trials},
        {"session",
         {{"n_pairs", s.n_pairs},
          {"key", format_bits(s.key)},
          {"auth_len", s.effective_auth_len()},
          {"f_auth", s.f_auth},
          {"f_disclose", s.f_disclose},
          {"e_t", s.e_t},
          {"s_min", s.s_min},
          {"n_min_auth", s.n_min_auth},
          {"p_flip", s.noise.p_flip},
          {"seed", s.seed},
          {"check_qber", s.checks.use_qber},
          {"check_chsh", s.checks.use_chsh}}},
        {"strategy", strategy},
    };
}

}  // namespace

std::vector<std::string> ExperimentConfig::validate() const {
    auto issues = session.validate();
    const auto eve_issues = strategy.validate();
    issues.insert(issues.end(), eve_issues.begin(), eve_issues.end());
    if (trials < 1) {
        issues.emplace_back("trials: must be >= 1");
    }
    if (strategy.kind == EveKind::mitm_impersonate && strategy.guess_key &&
        strategy.guess_key->size() != session.key.size()) {
        issues.emplace_back("strategy.guess_key: length must equal the key length");
    }
    return issues;
}

TrialRow make_row(std::size_t trial, std::uint64_t seed, const SessionOutcome& o) {
    TrialRow row;
    row.trial = trial;
    row.seed = seed;
    row.accepted = o.accepted();
    row.bob_verified = o.bob_verified;
    row.alice_verified = o.alice_verified;
    row.channel_clean = o.channel_clean;
    row.abort_reason = o.abort_reason;
    row.qber_bell = o.qber_bell;
    row.chsh_s = o.chsh_s;
    row.auth_mismatch_rate = o.auth_mismatch_rate;
    row.matched_auth_count = o.matched_auth_count;
    row.k2_len = o.new_key ? o.new_key->size() : 0;
    row.keys_agree = o.keys_agree();
    return row;
}

TrialRow run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    SessionConfig session = cfg.session;
    session.seed = cfg.session.seed + trial;
    return make_row(trial, session.seed, run_session(session, cfg.strategy));
}

Aggregate aggregate_rows(const std::vector<TrialRow>& rows) {
    Aggregate a;
    a.trials = rows.size();
    if (rows.empty()) {
        return a;
    }
    std::size_t accepted = 0;
    std::size_t n_qber = 0;
    std::size_t n_s = 0;
    double sum_qber = 0.0;
    double sum_s = 0.0;
    double sum_k2 = 0.0;
    for (const auto& r : rows) {
        accepted += r.accepted ? 1 : 0;
        if (r.qber_bell) {
            sum_qber += *r.qber_bell;
            ++n_qber;
        }
        if (r.chsh_s) {
            sum_s += std::abs(*r.chsh_s);
            ++n_s;
        }
        sum_k2 += static_cast<double>(r.k2_len);
        ++a.abort_histogram[std::string(to_string(r.abort_reason))];
    }
    const double n = static_cast<double>(rows.size());
    a.acceptance_rate = static_cast<double>(accepted) / n;
    if (n_qber > 0) {
        a.mean_qber = sum_qber / static_cast<double>(n_qber);
    }
    if (n_s > 0) {
        a.mean_abs_s = sum_s / static_cast<double>(n_s);
    }
    a.mean_k2_len = sum_k2 / n;
    return a;
}

namespace {

void check(const ExperimentConfig& cfg) {
    if (auto issues = cfg.validate(); !issues.empty()) {
        throw ConfigError(std::move(issues));
    }
}

TrialReport assemble(const ExperimentConfig& cfg, std::vector<TrialRow> rows) {
    TrialReport report;
    report.config = cfg;
    report.aggregate = aggregate_rows(rows);
    report.rows = std::move(rows);
    return report;
}

}  // namespace

TrialReport run_experiment_serial(const ExperimentConfig& cfg) {
    check(cfg);
    std::vector<TrialRow> rows;
    rows.reserve(cfg.trials);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        rows.push_back(run_trial(cfg, i));
    }
    return assemble(cfg, std::move(rows));
}

TrialReport run_experiment(const ExperimentConfig& cfg, int threads) {
    check(cfg);
    std::vector<TrialRow> rows(cfg.trials);
    std::vector<std::exception_ptr> errors(cfg.trials);
    const auto n = static_cast<std::int64_t>(cfg.trials);
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const auto t = static_cast<std::size_t>(i);
        try {
            rows[t] = run_trial(cfg, t);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return assemble(cfg, std::move(rows));
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns{
        "trial",          "seed",         "accepted",           "bob_verified",
        "alice_verified", "channel_clean", "abort_reason",      "qber_bell",
        "chsh_s",         "auth_mismatch_rate", "matched_auth_count", "k2_len",
        "keys_agree"};
    return columns;
}

std::string to_json(const TrialReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back(json{{"trial", r.trial},
                            {"seed", r.seed},
                            {"accepted", r.accepted},
                            {"bob_verified", r.bob_verified},
                            {"alice_verified", r.alice_verified},
                            {"channel_clean", r.channel_clean},
                            {"abort_reason", to_string(r.abort_reason)},
                            {"qber_bell", optional_number(r.qber_bell)},
                            {"chsh_s", optional_number(r.chsh_s)},
                            {"auth_mismatch_rate", r.auth_mismatch_rate},
                            {"matched_auth_count", r.matched_auth_count},
                            {"k2_len", r.k2_len},
                            {"keys_agree", r.keys_agree}});
    }
    const auto& a = report.aggregate;
    const json agg{{"trials", a.trials},
                   {"acceptance_rate", a.acceptance_rate},
                   {"mean_qber", optional_number(a.mean_qber)},
                   {"mean_abs_s", optional_number(a.mean_abs_s)},
                   {"mean_k2_len", a.mean_k2_len},
                   {"abort_histogram", a.abort_histogram}};
    const json doc{{"config", config_json(report.config)}, {"aggregate", agg}, {"trials", rows}};
    return doc.dump(2) + "\n";
}

std::string to_csv(const TrialReport& report) {
    std::ostringstream os;
    const auto& cols = csv_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        os << (c ? "," : "") << cols[c];
    }
    os << '\n';
    const auto opt = [](const std::optional<double>& v) { return v ? number_text(*v) : ""; };
    const auto flag = [](bool b) { return b ? "1" : "0"; };
    for (const auto& r : report.rows) {
        os << r.trial << ',' << r.seed << ',' << flag(r.accepted) << ',' << flag(r.bob_verified)
           << ',' << flag(r.alice_verified) << ',' << flag(r.channel_clean) << ','
           << to_string(r.abort_reason) << ',' << opt(r.qber_bell) << ',' << opt(r.chsh_s) << ','
           << number_text(r.auth_mismatch_rate) << ',' << r.matched_auth_count << ','
           << r.k2_len << ',' << flag(r.keys_agree) << '\n';
    }
    const auto& a = report.aggregate;
    os << "# name=" << report.config.name << '\n';
    os << "# trials=" << a.trials << '\n';
    os << "# acceptance_rate=" << number_text(a.acceptance_rate) << '\n';
    os << "# mean_qber=" << opt(a.mean_qber) << '\n';
    os << "# mean_abs_s=" << opt(a.mean_abs_s) << '\n';
    os << "# mean_k2_len=" << number_text(a.mean_k2_len) << '\n';
    for (const auto& [reason, count] : a.abort_histogram) {
        os << "# abort." << reason << '=' << count << '\n';
    }
    return os.str();
}

std::string render(const TrialReport& report) {
    return report.config.format == ReportFormat::json ? to_json(report) : to_csv(report);
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration";
          for (const auto& i : issues) {
              msg += "\n  " + i;
          }
          return msg;
      }()),
      issues_(std::move(issues)) {}

}  // namespace qauth
