#include "qauth/error.hpp"
#include "qauth/harness.hpp"

namespace qauth {

namespace {

constexpr std::string_view kKey128 =
    "00010111100000101101110000101000111011010111111100011000100010110001010011010100110111010000100010011100001100111011111100110101";
constexpr std::string_view kKey64 =
    "0000011101110111001100010010001110101001001010010100001001111110";
constexpr std::string_view kKey30 = "110100111100010111001101000000";

// Honest noiseless sessions at n_pairs = 2000. The CHSH standard error at
// this size is about 0.14, so s_min sits at 2.2 rather than the 2.5 default.
ExperimentConfig honest_base() {
    ExperimentConfig cfg;
    cfg.name = "honest";
    cfg.session.n_pairs = 2000;
    cfg.session.key = parse_bits(kKey128);
    cfg.session.s_min = 2.2;
    cfg.session.seed = 1;
    cfg.trials = 100;
    return cfg;
}

std::string label(std::string_view prefix, double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') {
        s.push_back('0');
    }
    return std::string(prefix) + s;
}

std::vector<Preset> build() {
    std::vector<Preset> out;

    {
        Preset p{"honest", "noiseless channel, no adversary; completeness and K2 agreement", {}, 0, {}};
        p.points.push_back(honest_base());
        out.push_back(std::move(p));
    }

    {
        // Large sessions so both e_t checks see >= 2000 matched positions.
        Preset p{"noisy",
                 "Bob-side bit-flip noise sweep around e_t = 0.10 (p_flip 0, 0.05, 0.10, 0.15, 0.20)",
                 {}, 1, "p_flip"};
        for (const double pf : {0.0, 0.05, 0.10, 0.15, 0.20}) {
            ExperimentConfig cfg;
            cfg.name = label("noisy/p_flip=", pf);
            cfg.session.n_pairs = 40000;
            cfg.session.key = parse_bits(kKey64);
            cfg.session.auth_len = 7200;
            cfg.session.s_min = 2.2;
            cfg.session.noise.p_flip = pf;
            cfg.session.seed = 1000;
            cfg.trials = 200;
            p.points.push_back(cfg);
        }
        out.push_back(std::move(p));
    }

    {
        Preset p{"intercept",
                 "intercept-resend in {rectilinear, diagonal} at default thresholds, fraction sweep",
                 {}, 0, "intercept_fraction"};
        for (const double f : {1.0, 0.75, 0.5, 0.25, 0.0}) {
            ExperimentConfig cfg;
            cfg.name = label("intercept/fraction=", f);
            cfg.session.n_pairs = 2000;
            cfg.session.key = parse_bits(kKey128);
            cfg.session.seed = 2000;
            cfg.strategy = EveStrategy::intercept(f);
            cfg.trials = 100;
            p.points.push_back(cfg);
        }
        out.push_back(std::move(p));
    }

    {
        Preset p{"mitm",
                 "man-in-the-middle with a random guess key, |K1| = 30, auth_len = 180, n_min_auth = 20",
                 {}, 0, {}};
        ExperimentConfig cfg;
        cfg.name = "mitm";
        cfg.session.n_pairs = 4000;
        cfg.session.key = parse_bits(kKey30);
        cfg.session.auth_len = 180;
        cfg.session.n_min_auth = 20;
        cfg.session.s_min = 2.2;
        cfg.session.seed = 3000;
        cfg.strategy = EveStrategy::mitm();
        cfg.trials = 1000;
        p.points.push_back(cfg);
        out.push_back(std::move(p));
    }

    {
        Preset p{"replay",
                 "recorded auth_challenge replayed into a fresh session keyed with the new K2",
                 {}, 0, {}};
        ExperimentConfig cfg = honest_base();
        cfg.name = "replay";
        cfg.session.seed = 4000;
        cfg.strategy = EveStrategy::replay();
        cfg.trials = 1000;
        p.points.push_back(cfg);
        out.push_back(std::move(p));
    }

    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw ConfigError({"unknown preset '" + std::string(name) + "'"});
}

}  // namespace qauth
