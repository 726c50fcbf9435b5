#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "staged/common.hpp"

namespace staged {

// Time lags in grid steps (Algorithm step numbering: gene->gene, gene->output
// ligand, neighbor ligand->receptor, receptor->gene).
struct LagConfig {
    int gg = 0;
    int gl = 1;
    int lr = 1;
    int rg = 0;

    int warmup() const { return std::max(std::max(gg, gl), std::max(lr, rg)); }

    void validate() const {
        if (gg < 0 || gl < 0 || lr < 0 || rg < 0) throw DomainError("lags must be >= 0");
    }
};

inline int warmup_length(const LagConfig& lags) { return lags.warmup(); }

enum class Integrator { Euler, Rk4 };

inline const char* integrator_name(Integrator i) {
    return i == Integrator::Euler ? "euler" : "rk4";
}

inline Integrator parse_integrator(const std::string& s) {
    if (s == "euler") return Integrator::Euler;
    if (s == "rk4") return Integrator::Rk4;
    throw ParseError("unknown integrator '" + s + "' (euler|rk4)");
}

struct Neighborhood {
    enum class Mode { Radius, Knn };
    Mode mode = Mode::Radius;
    double radius = 1.0;
    int k = 1;
};

// "radius:<r>" or "knn:<k>"
inline Neighborhood parse_neighborhood(const std::string& s) {
    Neighborhood n;
    auto pos = s.find(':');
    if (pos == std::string::npos)
        throw ParseError("neighborhood must be radius:<r> or knn:<k>, got '" + s + "'");
    std::string mode = s.substr(0, pos), arg = s.substr(pos + 1);
    if (mode == "radius") {
        n.mode = Neighborhood::Mode::Radius;
        n.radius = parse_double(arg, "neighborhood radius");
        if (!(n.radius > 0.0)) throw DomainError("neighborhood radius must be > 0");
    } else if (mode == "knn") {
        n.mode = Neighborhood::Mode::Knn;
        n.k = static_cast<int>(parse_long(arg, "neighborhood k"));
        if (n.k < 1) throw DomainError("neighborhood k must be >= 1");
    } else {
        throw ParseError("neighborhood must be radius:<r> or knn:<k>, got '" + s + "'");
    }
    return n;
}

inline std::string neighborhood_to_string(const Neighborhood& n) {
    if (n.mode == Neighborhood::Mode::Radius) return "radius:" + fmt_double(n.radius);
    return "knn:" + std::to_string(n.k);
}

struct RunConfig {
    Neighborhood neighborhood;
    LagConfig lags;
    Integrator integrator = Integrator::Euler;  // learned-field integrator
    double dt = 0.0;                            // 0: one step per data frame
    double learning_rate = 0.02;
    int epochs = 200;
    uint64_t seed = 1;
    int window = 0;        // truncated-rollout length in frames; 0 = full horizon
    int tf_epochs = 0;     // teacher-forced epochs before closed-loop training
    double noise_sigma = 0.0;  // simulation only
    int attn_hidden = 8;
    int mlp_hidden1 = 32;
    int mlp_hidden2 = 32;
    double val_fraction = 0.2;
    bool normalize = true;
    bool scalar_messages = false;      // collapse messages to the printed scalar
    bool eq2_sign_as_printed = false;  // simulator decay-term sign flag
    int workers = 1;
    int checkpoint_every = 0;  // epochs between periodic checkpoints; 0 = off

    void validate() const {
        lags.validate();
        if (dt < 0.0) throw DomainError("dt must be >= 0");
        if (epochs < 0) throw DomainError("epochs must be >= 0");
        if (!(learning_rate >= 0.0)) throw DomainError("learning_rate must be >= 0");
        if (noise_sigma < 0.0) throw DomainError("noise_sigma must be >= 0");
        if (attn_hidden < 1 || mlp_hidden1 < 1 || mlp_hidden2 < 1)
            throw DomainError("network widths must be >= 1");
        if (val_fraction < 0.0 || val_fraction >= 1.0)
            throw DomainError("val_fraction must lie in [0, 1)");
        if (workers < 1) throw DomainError("workers must be >= 1");
        if (window < 0) throw DomainError("window must be >= 0");
        if (tf_epochs < 0) throw DomainError("tf_epochs must be >= 0");
    }
};

inline bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError("bad boolean for " + what + ": '" + s + "'");
}

// Applies one key/value pair; shared by the config file parser and CLI
// overrides so every key is overridable by a flag of the same name.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
    if (key == "neighborhood") cfg.neighborhood = parse_neighborhood(value);
    else if (key == "lag_gg") cfg.lags.gg = static_cast<int>(parse_long(value, key));
    else if (key == "lag_gl") cfg.lags.gl = static_cast<int>(parse_long(value, key));
    else if (key == "lag_lr") cfg.lags.lr = static_cast<int>(parse_long(value, key));
    else if (key == "lag_rg") cfg.lags.rg = static_cast<int>(parse_long(value, key));
    else if (key == "integrator") cfg.integrator = parse_integrator(value);
    else if (key == "dt") cfg.dt = parse_double(value, key);
    else if (key == "learning_rate") cfg.learning_rate = parse_double(value, key);
    else if (key == "epochs") cfg.epochs = static_cast<int>(parse_long(value, key));
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_long(value, key));
    else if (key == "window") cfg.window = static_cast<int>(parse_long(value, key));
    else if (key == "tf_epochs") cfg.tf_epochs = static_cast<int>(parse_long(value, key));
    else if (key == "noise_sigma") cfg.noise_sigma = parse_double(value, key);
    else if (key == "attn_hidden") cfg.attn_hidden = static_cast<int>(parse_long(value, key));
    else if (key == "mlp_hidden") {
        auto parts = split(value, ',');
        if (parts.size() != 2) throw ParseError("mlp_hidden expects two widths 'w1,w2'");
        cfg.mlp_hidden1 = static_cast<int>(parse_long(trim(parts[0]), key));
        cfg.mlp_hidden2 = static_cast<int>(parse_long(trim(parts[1]), key));
    } else if (key == "val_fraction") cfg.val_fraction = parse_double(value, key);
    else if (key == "normalize") cfg.normalize = parse_bool(value, key);
    else if (key == "scalar_messages") cfg.scalar_messages = parse_bool(value, key);
    else if (key == "eq2_sign_as_printed") cfg.eq2_sign_as_printed = parse_bool(value, key);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_long(value, key));
    else if (key == "checkpoint_every")
        cfg.checkpoint_every = static_cast<int>(parse_long(value, key));
    else throw ParseError("unknown config key '" + key + "'");
}

inline RunConfig parse_run_config(const std::string& text, RunConfig base = {}) {
    size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line = trim(std::string_view(text).substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        apply_config_entry(base, key, value);
        if (end == text.size()) break;
    }
    base.validate();
    return base;
}

inline RunConfig load_run_config(const std::string& path, RunConfig base = {}) {
    return parse_run_config(read_file(path), base);
}

inline std::string run_config_to_text(const RunConfig& c) {
    std::string out;
    auto put = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    put("neighborhood", neighborhood_to_string(c.neighborhood));
    put("lag_gg", std::to_string(c.lags.gg));
    put("lag_gl", std::to_string(c.lags.gl));
    put("lag_lr", std::to_string(c.lags.lr));
    put("lag_rg", std::to_string(c.lags.rg));
    put("integrator", integrator_name(c.integrator));
    put("dt", fmt_double(c.dt));
    put("learning_rate", fmt_double(c.learning_rate));
    put("epochs", std::to_string(c.epochs));
    put("seed", std::to_string(c.seed));
    put("window", std::to_string(c.window));
    put("tf_epochs", std::to_string(c.tf_epochs));
    put("noise_sigma", fmt_double(c.noise_sigma));
    put("attn_hidden", std::to_string(c.attn_hidden));
    put("mlp_hidden", std::to_string(c.mlp_hidden1) + "," + std::to_string(c.mlp_hidden2));
    put("val_fraction", fmt_double(c.val_fraction));
    put("normalize", c.normalize ? "true" : "false");
    put("scalar_messages", c.scalar_messages ? "true" : "false");
    put("eq2_sign_as_printed", c.eq2_sign_as_printed ? "true" : "false");
    put("workers", std::to_string(c.workers));
    put("checkpoint_every", std::to_string(c.checkpoint_every));
    return out;
}

}  // namespace staged
