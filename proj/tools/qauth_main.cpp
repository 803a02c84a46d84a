// qauth: command-line front end for the authentication simulator.
//
//   qauth run --config <path> [--trials N] [--seed S] [--format json|csv] [--out PATH]
//   qauth run --preset <name> ...
//   qauth presets
//   qauth explain <preset> [--seed S] [--messages]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qauth/error.hpp"
#include "qauth/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

struct RunOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    std::optional<std::string> out;
    int threads = 0;
};

void apply_overrides(qauth::ExperimentConfig& cfg, const RunOptions& o) {
    if (o.trials) {
        cfg.trials = *o.trials;
    }
    if (o.seed) {
        cfg.session.seed = *o.seed;
    }
    if (o.format) {
        cfg.format = *o.format == "csv" ? qauth::ReportFormat::csv : qauth::ReportFormat::json;
    }
    if (o.out) {
        cfg.output_path = *o.out;
    }
}

int run_command(const RunOptions& o) {
    std::vector<qauth::ExperimentConfig> points;
    if (!o.config_path.empty()) {
        points.push_back(qauth::parse_config(read_file(o.config_path)));
    } else {
        points = qauth::find_preset(o.preset).points;
    }
    for (auto& p : points) {
        apply_overrides(p, o);
    }
    std::vector<qauth::TrialReport> reports;
    for (const auto& p : points) {
        reports.push_back(qauth::run_experiment(p, o.threads));
    }
    std::string text;
    if (reports.size() == 1) {
        text = qauth::render(reports.front());
    } else if (points.front().format == qauth::ReportFormat::json) {
        nlohmann::json doc{{"preset", o.preset}, {"points", nlohmann::json::array()}};
        for (const auto& r : reports) {
            doc["points"].push_back(nlohmann::json::parse(qauth::to_json(r)));
        }
        text = doc.dump(2) + "\n";
    } else {
        for (const auto& r : reports) {
            text += "# point=" + r.config.name + "\n" + qauth::to_csv(r);
        }
    }
    write_output(points.front().output_path, text);
    return 0;
}

int presets_command() {
    for (const auto& p : qauth::presets()) {
        std::cout << p.name << "\t" << p.description;
        if (!p.sweep_field.empty()) {
            std::cout << " [" << p.points.size() << " points over " << p.sweep_field << "]";
        }
        std::cout << "\n";
    }
    return 0;
}

int explain_command(const std::string& name, std::optional<std::uint64_t> seed, bool messages) {
    const auto& preset = qauth::find_preset(name);
    qauth::SessionConfig cfg = preset.main().session;
    if (seed) {
        cfg.seed = *seed;
    }
    qauth::SessionTrace trace;
    const auto outcome = qauth::run_session(cfg, preset.main().strategy, &trace);
    std::cout << "preset " << preset.name << " (" << preset.main().name << "), seed " << cfg.seed
              << "\n";
    for (const auto& s : trace.steps) {
        std::cout << "  " << s << "\n";
    }
    std::cout << "outcome: " << qauth::to_json_string(outcome) << "\n";
    if (messages) {
        std::cout << "messages:\n";
        for (const auto& m : trace.messages) {
            std::cout << m << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qauth: EPR-pair quantum authentication simulator"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "run a Monte-Carlo experiment");
    auto* cfg_opt = run_cmd->add_option("--config", run.config_path, "experiment config file");
    auto* preset_opt = run_cmd->add_option("--preset", run.preset, "run a built-in preset");
    cfg_opt->excludes(preset_opt);
    run_cmd->add_option("--trials", run.trials, "number of trials")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "base seed (trial i uses seed + i)");
    run_cmd->add_option("--format", run.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--out", run.out, "output path (default stdout)");
    run_cmd->add_option("--threads", run.threads, "OpenMP threads (0 = default)");

    app.add_subcommand("presets", "list built-in scenarios");

    std::string explain_name;
    std::optional<std::uint64_t> explain_seed;
    bool explain_messages = false;
    auto* explain_cmd = app.add_subcommand("explain", "trace one seeded session of a preset");
    explain_cmd->add_option("preset", explain_name, "preset name")->required();
    explain_cmd->add_option("--seed", explain_seed, "session seed");
    explain_cmd->add_flag("--messages", explain_messages, "also print classical messages (JSON lines)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (run.config_path.empty() && run.preset.empty()) {
                std::cerr << "run: one of --config or --preset is required\n";
                return 2;
            }
            return run_command(run);
        }
        if (app.got_subcommand("presets")) {
            return presets_command();
        }
        return explain_command(explain_name, explain_seed, explain_messages);
    } catch (const qauth::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
