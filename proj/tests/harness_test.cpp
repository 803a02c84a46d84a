#include "qauth/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qauth {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> issues_of(std::string_view yaml) {
    try {
        parse_config(yaml);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, std::string_view needle) {
    return std::any_of(v.begin(), v.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

ExperimentConfig preset_with_trials(std::string_view name, std::size_t trials) {
    auto cfg = find_preset(name).main();
    cfg.trials = trials;
    return cfg;
}

TEST(ParseConfig, MinimalGetsDefaults) {
    const auto cfg = parse_config("n_pairs: 2000\nkey: \"001101\"\n");
    EXPECT_EQ(cfg.session.n_pairs, 2000U);
    EXPECT_EQ(format_bits(cfg.session.key), "001101");
    EXPECT_DOUBLE_EQ(cfg.session.e_t, 0.10);
    EXPECT_DOUBLE_EQ(cfg.session.s_min, 2.5);
    EXPECT_DOUBLE_EQ(cfg.session.f_disclose, 0.5);
    EXPECT_EQ(cfg.session.n_min_auth, 20U);
    EXPECT_EQ(cfg.strategy.kind, EveKind::none);
    EXPECT_EQ(cfg.trials, 1U);
    EXPECT_EQ(cfg.format, ReportFormat::json);
}

TEST(ParseConfig, FullSchema) {
    const auto cfg = parse_config(R"(
name: sweep
n_pairs: 4000
key: "0110"
auth_len: 100
f_auth: 0.1
f_disclose: 0.4
e_t: 0.08
s_min: 2.3
n_min_auth: 10
p_flip: 0.02
seed: 77
check_qber: false
strategy: intercept_resend
intercept_fraction: 0.5
eve_bases: [0, 45]
trials: 12
format: csv
output: out.csv
)");
    EXPECT_EQ(cfg.name, "sweep");
    EXPECT_EQ(cfg.session.auth_len, 100U);
    EXPECT_DOUBLE_EQ(cfg.session.noise.p_flip, 0.02);
    EXPECT_EQ(cfg.session.seed, 77U);
    EXPECT_FALSE(cfg.session.checks.use_qber);
    EXPECT_TRUE(cfg.session.checks.use_chsh);
    EXPECT_EQ(cfg.strategy.kind, EveKind::intercept_resend);
    EXPECT_DOUBLE_EQ(cfg.strategy.intercept_fraction, 0.5);
    ASSERT_EQ(cfg.strategy.eve_basis_set.size(), 2U);
    EXPECT_EQ(cfg.strategy.eve_basis_set[1], basis::deg45);
    EXPECT_EQ(cfg.trials, 12U);
    EXPECT_EQ(cfg.format, ReportFormat::csv);
    EXPECT_EQ(cfg.output_path, "out.csv");
}

TEST(ParseConfig, SemanticErrorsNameTheField) {
    const auto issues = issues_of("n_pairs: 2000\nkey: \"001101\"\ne_t: 0.7\ntrials: 0\n");
    EXPECT_TRUE(any_contains(issues, "session.e_t")) << issues.size();
    EXPECT_TRUE(any_contains(issues, "trials"));
}

TEST(ParseConfig, UnknownKeyAndSyntaxErrorsGiveLine) {
    EXPECT_TRUE(any_contains(issues_of("key: \"01\"\nwarp: 3\n"), "line 2"));
    EXPECT_TRUE(any_contains(issues_of("key: \"01\"\nwarp: 3\n"), "warp"));
    EXPECT_TRUE(any_contains(issues_of("key: \"01\"\nn_pairs: [1, \n"), "line"));
    EXPECT_TRUE(any_contains(issues_of("key: \"01\"\nn_pairs: many\n"), "n_pairs"));
    EXPECT_TRUE(any_contains(issues_of("key: \"01x\"\n"), "key"));
}

TEST(ParseConfig, PresetBaseWithOverride) {
    const auto cfg = parse_config("preset: mitm\ntrials: 7\nseed: 5\n");
    const auto& base = find_preset("mitm").main();
    EXPECT_EQ(cfg.trials, 7U);
    EXPECT_EQ(cfg.session.seed, 5U);
    EXPECT_EQ(cfg.session.key, base.session.key);
    EXPECT_EQ(cfg.session.auth_len, base.session.auth_len);
    EXPECT_EQ(cfg.strategy.kind, EveKind::mitm_impersonate);
    EXPECT_FALSE(issues_of("preset: nope\n").empty());
}

TEST(Presets, AllValid) {
    for (const auto& p : presets()) {
        EXPECT_FALSE(p.points.empty());
        for (const auto& pt : p.points) {
            EXPECT_TRUE(pt.validate().empty()) << p.name;
        }
    }
    EXPECT_THROW(find_preset("nope"), ConfigError);
}

TEST(Experiment, HonestPresetAlwaysAccepts) {
    const auto report = run_experiment(preset_with_trials("honest", 100));
    EXPECT_EQ(report.aggregate.acceptance_rate, 1.0);
    for (const auto& r : report.rows) {
        EXPECT_TRUE(r.keys_agree);
    }
}

TEST(Experiment, FullInterceptAlwaysDetected) {
    const auto report = run_experiment(preset_with_trials("intercept", 100));
    EXPECT_EQ(report.aggregate.acceptance_rate, 0.0);
    ASSERT_TRUE(report.aggregate.mean_qber.has_value());
    EXPECT_NEAR(*report.aggregate.mean_qber, 0.25, 0.02);
}

TEST(Experiment, ReportsAreByteIdenticalAcrossRunsAndThreads) {
    auto cfg = preset_with_trials("intercept", 40);
    cfg.strategy.intercept_fraction = 0.3;
    const auto serial = run_experiment_serial(cfg);
    const auto json = to_json(serial);
    const auto csv = to_csv(serial);
    EXPECT_EQ(to_json(run_experiment_serial(cfg)), json);
    for (const int threads : {1, 2, 4}) {
        const auto par = run_experiment(cfg, threads);
        EXPECT_EQ(to_json(par), json) << threads;
        EXPECT_EQ(to_csv(par), csv) << threads;
    }
}

TEST(Experiment, AggregateRecomputableFromRows) {
    auto cfg = preset_with_trials("intercept", 30);
    cfg.strategy.intercept_fraction = 0.3;
    const auto report = run_experiment(cfg);
    EXPECT_EQ(aggregate_rows(report.rows), report.aggregate);

    std::size_t accepted = 0;
    std::map<std::string, std::size_t> hist;
    for (const auto& r : report.rows) {
        accepted += r.accepted ? 1 : 0;
        ++hist[std::string(to_string(r.abort_reason))];
    }
    EXPECT_DOUBLE_EQ(report.aggregate.acceptance_rate, accepted / 30.0);
    EXPECT_EQ(report.aggregate.abort_histogram, hist);
}

TEST(Experiment, TrialSeedsAreConsecutive) {
    auto cfg = preset_with_trials("honest", 5);
    cfg.session.seed = 40;
    const auto report = run_experiment_serial(cfg);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(report.rows[i].trial, i);
        EXPECT_EQ(report.rows[i].seed, 40 + i);
    }
}

TEST(Reports, CsvColumnOrder) {
    const std::vector<std::string> expected{
        "trial",         "seed",      "accepted",   "bob_verified",       "alice_verified",
        "channel_clean", "abort_reason", "qber_bell", "chsh_s",           "auth_mismatch_rate",
        "matched_auth_count", "k2_len", "keys_agree"};
    EXPECT_EQ(csv_columns(), expected);
}

TEST(Reports, GoldenCsv) {
    const auto cfg = parse_config(read_file(QAUTH_TEST_DATA_DIR "/golden_small.yaml"));
    EXPECT_EQ(to_csv(run_experiment(cfg)), read_file(QAUTH_TEST_DATA_DIR "/golden_small.csv"));
}

TEST(Reports, JsonHasConfigAggregateAndTrials) {
    const auto json = to_json(run_experiment_serial(preset_with_trials("honest", 2)));
    for (const char* key : {"\"aggregate\"", "\"config\"", "\"trials\"", "\"acceptance_rate\"",
                            "\"abort_histogram\"", "\"keys_agree\""}) {
        EXPECT_NE(json.find(key), std::string::npos) << key;
    }
}

}  // namespace
}  // namespace qauth
