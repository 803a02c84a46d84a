#include <functional>
#include <map>

#include <yaml-cpp/yaml.h>

#include "qauth/error.hpp"
#include "qauth/harness.hpp"

namespace qauth {

namespace {

struct FieldContext {
    std::string path;
    int line = 0;
    std::vector<std::string>* issues = nullptr;

    void fail(const std::string& what) const {
        issues->push_back(path + " (line " + std::to_string(line) + "): " + what);
    }
};

template <class T>
bool read(const YAML::Node& v, const FieldContext& ctx, T& out, const char* expected) {
    try {
        out = v.as<T>();
        return true;
    } catch (const YAML::Exception&) {
        ctx.fail(std::string("expected ") + expected);
        return false;
    }
}

void read_count(const YAML::Node& v, const FieldContext& ctx, std::size_t& out) {
    long long raw = 0;
    if (!read(v, ctx, raw, "a non-negative integer")) {
        return;
    }
    if (raw < 0) {
        ctx.fail("expected a non-negative integer");
        return;
    }
    out = static_cast<std::size_t>(raw);
}

void read_bits(const YAML::Node& v, const FieldContext& ctx, Bits& out) {
    std::string text;
    if (!read(v, ctx, text, "a '0'/'1' string")) {
        return;
    }
    try {
        out = parse_bits(text);
    } catch (const Error& e) {
        ctx.fail(e.what());
    }
}

using Handler = std::function<void(const YAML::Node&, const FieldContext&, ExperimentConfig&)>;

const std::map<std::string, std::pair<std::string, Handler>>& handlers() {
    static const std::map<std::string, std::pair<std::string, Handler>> table{
        {"n_pairs", {"session.n_pairs", [](auto& v, auto& c, auto& cfg) { read_count(v, c, cfg.session.n_pairs); }}},
        {"key", {"session.key", [](auto& v, auto& c, auto& cfg) { read_bits(v, c, cfg.session.key); }}},
        {"auth_len", {"session.auth_len", [](auto& v, auto& c, auto& cfg) { read_count(v, c, cfg.session.auth_len); }}},
        {"f_auth", {"session.f_auth", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.f_auth, "a number"); }}},
        {"f_disclose", {"session.f_disclose", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.f_disclose, "a number"); }}},
        {"e_t", {"session.e_t", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.e_t, "a number"); }}},
        {"s_min", {"session.s_min", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.s_min, "a number"); }}},
        {"n_min_auth", {"session.n_min_auth", [](auto& v, auto& c, auto& cfg) { read_count(v, c, cfg.session.n_min_auth); }}},
        {"p_flip", {"session.p_flip", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.noise.p_flip, "a number"); }}},
        {"seed", {"session.seed", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.seed, "an unsigned integer"); }}},
        {"check_qber", {"session.check_qber", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.checks.use_qber, "true or false"); }}},
        {"check_chsh", {"session.check_chsh", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.session.checks.use_chsh, "true or false"); }}},
        {"strategy", {"strategy.kind", [](auto& v, auto& c, auto& cfg) {
             std::string name;
             if (!read(v, c, name, "a strategy name")) {
                 return;
             }
             try {
                 cfg.strategy.kind = eve_kind_from_string(name);
             } catch (const Error&) {
                 c.fail("unknown strategy '" + name +
                        "' (none, intercept_resend, mitm_impersonate, classical_record, replay)");
             }
         }}},
        {"intercept_fraction", {"strategy.intercept_fraction", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.strategy.intercept_fraction, "a number"); }}},
        {"eve_bases", {"strategy.eve_bases", [](auto& v, auto& c, auto& cfg) {
             std::vector<double> degs;
             if (!read(v, c, degs, "a list of angles in degrees")) {
                 return;
             }
             cfg.strategy.eve_basis_set.clear();
             for (const double d : degs) {
                 cfg.strategy.eve_basis_set.emplace_back(d);
             }
         }}},
        {"guess_key", {"strategy.guess_key", [](auto& v, auto& c, auto& cfg) {
             std::string text;
             if (!read(v, c, text, "'random' or a '0'/'1' string")) {
                 return;
             }
             if (text == "random") {
                 cfg.strategy.guess_key.reset();
                 return;
             }
             Bits bits;
             read_bits(v, c, bits);
             cfg.strategy.guess_key = bits;
         }}},
        {"trials", {"trials", [](auto& v, auto& c, auto& cfg) { read_count(v, c, cfg.trials); }}},
        {"format", {"format", [](auto& v, auto& c, auto& cfg) {
             std::string f;
             if (!read(v, c, f, "json or csv")) {
                 return;
             }
             if (f == "json") {
                 cfg.format = ReportFormat::json;
             } else if (f == "csv") {
                 cfg.format = ReportFormat::csv;
             } else {
                 c.fail("expected json or csv, got '" + f + "'");
             }
         }}},
        {"output", {"output", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.output_path, "a path"); }}},
        {"name", {"name", [](auto& v, auto& c, auto& cfg) { read(v, c, cfg.name, "a string"); }}},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError({"line " + std::to_string(e.mark.line + 1) + ": syntax error: " + e.msg});
    }
    ExperimentConfig cfg;
    if (root.IsNull()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!root.IsMap()) {
        throw ConfigError({"line " + std::to_string(root.Mark().line + 1) +
                           ": top level must be a key-value mapping"});
    }

    std::vector<std::string> issues;
    if (const YAML::Node base = root["preset"]) {
        try {
            cfg = find_preset(base.as<std::string>()).main();
        } catch (const ConfigError& e) {
            issues.push_back("preset (line " + std::to_string(base.Mark().line + 1) +
                             "): " + e.issues().front());
        } catch (const YAML::Exception&) {
            issues.push_back("preset (line " + std::to_string(base.Mark().line + 1) +
                             "): expected a preset name");
        }
    }

    for (const auto& kv : root) {
        const int line = kv.first.Mark().line + 1;
        std::string key;
        try {
            key = kv.first.as<std::string>();
        } catch (const YAML::Exception&) {
            issues.push_back("line " + std::to_string(line) + ": keys must be plain strings");
            continue;
        }
        if (key == "preset") {
            continue;
        }
        const auto& table = handlers();
        const auto it = table.find(key);
        if (it == table.end()) {
            issues.push_back("line " + std::to_string(line) + ": unknown field '" + key + "'");
            continue;
        }
        const FieldContext ctx{it->second.first, kv.second.Mark().line + 1, &issues};
        it->second.second(kv.second, ctx, cfg);
    }
    if (issues.empty()) {
        issues = cfg.validate();
    }
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

}  // namespace qauth
