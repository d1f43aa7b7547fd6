#pragma once

// Strict run-config parsing for the CLI.  Configs are JSON with an explicit
// format_version; unknown keys are errors, so every persisted config replays
// exactly or not at all.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mellin/errors.hpp"
#include "mellin/sampling.hpp"
#include "mellin/serialize.hpp"
#include "mellin/synthesis.hpp"

namespace mellin {
namespace cli {

inline constexpr int kFormatVersion = 1;

inline void require_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
}

inline void reject_unknown_keys(const json& j, const std::string& ctx,
                                std::initializer_list<const char*> allowed) {
    for (const auto& [key, val] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(ctx + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_required(const json& j, const std::string& ctx, const char* key) {
    if (!j.contains(key)) throw ConfigError(ctx + ": missing required key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(ctx + "." + key + ": " + e.what());
    }
}

template <class T>
T get_optional(const json& j, const std::string& ctx, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(ctx + "." + key + ": " + e.what());
    }
}

inline SpaceParams parse_space(const json& j) {
    require_object(j, "space");
    reject_unknown_keys(j, "space", {"n", "c", "T"});
    SpaceParams p;
    p.n = get_required<int>(j, "space", "n");
    p.c = get_required<std::vector<double>>(j, "space", "c");
    p.T = get_required<double>(j, "space", "T");
    p.validate();
    return p;
}

inline ConcentrationCube parse_cube(const json& j, int n) {
    require_object(j, "cube");
    reject_unknown_keys(j, "cube", {"R"});
    ConcentrationCube cube;
    cube.R = get_required<double>(j, "cube", "R");
    cube.n = n;
    cube.validate();
    return cube;
}

inline SynthesisProfile parse_profile(const json& j) {
    require_object(j, "profile");
    reject_unknown_keys(j, "profile",
                        {"seed", "K", "decay", "q", "target_delta", "max_rejections"});
    SynthesisProfile p;
    p.seed = get_required<std::uint64_t>(j, "profile", "seed");
    p.K = get_required<int>(j, "profile", "K");
    const std::string decay = get_optional<std::string>(j, "profile", "decay", "flat");
    if (decay == "flat") {
        p.decay = Decay::flat;
        if (j.contains("q")) throw ConfigError("profile.q: only valid with geometric decay");
    } else if (decay == "geometric") {
        p.decay = Decay::geometric;
        p.q = get_required<double>(j, "profile", "q");
    } else {
        throw ConfigError("profile.decay: expected 'flat' or 'geometric'");
    }
    if (j.contains("target_delta"))
        p.target_delta = get_required<double>(j, "profile", "target_delta");
    p.max_rejections = get_optional<int>(j, "profile", "max_rejections", 64);
    p.validate();
    return p;
}

inline QuadratureSpec parse_quad(const json& j) {
    require_object(j, "quad");
    reject_unknown_keys(j, "quad",
                        {"panel_count", "log_radius", "refinement_tol", "max_refinements"});
    QuadratureSpec q;
    q.panel_count = get_optional<int>(j, "quad", "panel_count", q.panel_count);
    q.log_radius = get_optional<double>(j, "quad", "log_radius", q.log_radius);
    q.refinement_tol = get_optional<double>(j, "quad", "refinement_tol", q.refinement_tol);
    q.max_refinements = get_optional<int>(j, "quad", "max_refinements", q.max_refinements);
    q.validate();
    return q;
}

inline json load_config_file(const std::string& path) {
    const json j = parse_json_file(path);
    require_object(j, "config");
    if (!j.contains("format_version"))
        throw ConfigError("config: missing required key 'format_version'");
    if (j.at("format_version") != kFormatVersion)
        throw ConfigError("config: unsupported format_version (expected 1)");
    return j;
}

struct SynthConfig {
    SpaceParams space;
    std::optional<ConcentrationCube> cube;
    SynthesisProfile profile;
    QuadratureSpec quad;
    std::string out_function = "function.json";
    std::string out_report = "concentration.json";
};

inline SynthConfig parse_synth_config(const json& j) {
    reject_unknown_keys(j, "config",
                        {"format_version", "space", "cube", "profile", "quad", "outputs"});
    SynthConfig c;
    if (!j.contains("space")) throw ConfigError("config: missing required key 'space'");
    c.space = parse_space(j.at("space"));
    if (j.contains("cube")) c.cube = parse_cube(j.at("cube"), c.space.n);
    if (!j.contains("profile")) throw ConfigError("config: missing required key 'profile'");
    c.profile = parse_profile(j.at("profile"));
    if (j.contains("quad")) c.quad = parse_quad(j.at("quad"));
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        require_object(o, "outputs");
        reject_unknown_keys(o, "outputs", {"function", "report"});
        c.out_function = get_optional<std::string>(o, "outputs", "function", c.out_function);
        c.out_report = get_optional<std::string>(o, "outputs", "report", c.out_report);
    }
    if (c.profile.target_delta && !c.cube)
        throw ConfigError("config: profile.target_delta requires a cube");
    return c;
}

struct VerifyConfig {
    std::string function_path;
    ConcentrationCube cube;
    QuadratureSpec quad;
    std::string out_report = "verify.json";
};

inline VerifyConfig parse_verify_config(const json& j) {
    reject_unknown_keys(j, "config",
                        {"format_version", "function", "cube", "quad", "outputs"});
    VerifyConfig c;
    c.function_path = get_required<std::string>(j, "config", "function");
    if (!j.contains("cube")) throw ConfigError("config: missing required key 'cube'");
    require_object(j.at("cube"), "cube");
    reject_unknown_keys(j.at("cube"), "cube", {"R"});
    c.cube.R = get_required<double>(j.at("cube"), "cube", "R");
    if (j.contains("quad")) c.quad = parse_quad(j.at("quad"));
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        require_object(o, "outputs");
        reject_unknown_keys(o, "outputs", {"report"});
        c.out_report = get_optional<std::string>(o, "outputs", "report", c.out_report);
    }
    return c;
}

struct ExperimentConfig {
    ExperimentParams params;
    std::string out_json = "experiment.json";
    std::string out_csv = "experiment.csv";
};

inline ExperimentConfig parse_experiment_config(const json& j) {
    reject_unknown_keys(j, "config",
                        {"format_version", "space", "cube", "profile", "quad", "mu", "r",
                         "trials", "seed", "reuse_function", "variant", "outputs"});
    ExperimentConfig c;
    if (!j.contains("space")) throw ConfigError("config: missing required key 'space'");
    c.params.space = parse_space(j.at("space"));
    if (!j.contains("cube")) throw ConfigError("config: missing required key 'cube'");
    c.params.cube = parse_cube(j.at("cube"), c.params.space.n);
    if (!j.contains("profile")) throw ConfigError("config: missing required key 'profile'");
    c.params.profile = parse_profile(j.at("profile"));
    if (j.contains("quad")) c.params.quad = parse_quad(j.at("quad"));
    c.params.mu = get_required<double>(j, "config", "mu");
    c.params.r = get_required<std::int64_t>(j, "config", "r");
    c.params.trials = get_required<int>(j, "config", "trials");
    c.params.seed = get_optional<std::uint64_t>(j, "config", "seed", c.params.profile.seed);
    c.params.reuse_function = get_optional<bool>(j, "config", "reuse_function", false);
    c.params.variant =
        variant_from_name(get_optional<std::string>(j, "config", "variant", "paper"));
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        require_object(o, "outputs");
        reject_unknown_keys(o, "outputs", {"json", "csv"});
        c.out_json = get_optional<std::string>(o, "outputs", "json", c.out_json);
        c.out_csv = get_optional<std::string>(o, "outputs", "csv", c.out_csv);
    }
    if (!(c.params.mu > 0.0 && c.params.mu < 1.0))
        throw ConfigError("config.mu: must lie in (0,1)");
    if (c.params.r < 1) throw ConfigError("config.r: must be >= 1");
    if (c.params.trials < 1) throw ConfigError("config.trials: must be >= 1");
    return c;
}

struct BoundsConfig {
    std::vector<int> n_grid;
    std::vector<double> T_grid;
    std::vector<double> R_grid;
    std::vector<double> mu_grid;
    std::vector<double> epsilon_grid;  // empty: derived as mu R^n/(R^2-1)^n
    std::vector<std::int64_t> r_grid;
    std::vector<double> target_grid;
    std::string variant_mode = "both";  // paper | corrected | both
    std::string out_csv = "bounds.csv";
};

inline BoundsConfig parse_bounds_config(const json& j) {
    reject_unknown_keys(j, "config", {"format_version", "grid", "variant", "outputs"});
    if (!j.contains("grid")) throw ConfigError("config: missing required key 'grid'");
    const json& g = j.at("grid");
    require_object(g, "grid");
    reject_unknown_keys(g, "grid", {"n", "T", "R", "mu", "epsilon", "r", "target_failure"});
    BoundsConfig c;
    c.n_grid = get_required<std::vector<int>>(g, "grid", "n");
    c.T_grid = get_required<std::vector<double>>(g, "grid", "T");
    c.R_grid = get_required<std::vector<double>>(g, "grid", "R");
    c.mu_grid = get_required<std::vector<double>>(g, "grid", "mu");
    c.epsilon_grid = get_optional<std::vector<double>>(g, "grid", "epsilon", {});
    c.r_grid = get_optional<std::vector<std::int64_t>>(g, "grid", "r", {1000});
    c.target_grid = get_optional<std::vector<double>>(g, "grid", "target_failure", {0.05});
    c.variant_mode = get_optional<std::string>(j, "config", "variant", "both");
    if (c.variant_mode != "paper" && c.variant_mode != "corrected" && c.variant_mode != "both")
        throw ConfigError("config.variant: expected paper, corrected, or both");
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        require_object(o, "outputs");
        reject_unknown_keys(o, "outputs", {"csv"});
        c.out_csv = get_optional<std::string>(o, "outputs", "csv", c.out_csv);
    }
    return c;
}

}  // namespace cli
}  // namespace mellin
