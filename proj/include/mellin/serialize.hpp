#pragma once

// JSON / CSV serialization.  Doubles round-trip bit-exactly through JSON
// (shortest-round-trip emission); CSV carries 17 significant digits.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mellin/bounds.hpp"
#include "mellin/core.hpp"
#include "mellin/errors.hpp"
#include "mellin/quadrature.hpp"
#include "mellin/sampling.hpp"
#include "mellin/spectral.hpp"
#include "mellin/synthesis.hpp"

namespace mellin {

using json = nlohmann::json;

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string variant_name(Variant v) {
    return v == Variant::paper ? "paper" : "corrected";
}

inline Variant variant_from_name(const std::string& s) {
    if (s == "paper") return Variant::paper;
    if (s == "corrected") return Variant::corrected;
    throw ConfigError("unknown variant '" + s + "' (expected paper or corrected)");
}

// --- LatticeFunction ---------------------------------------------------

inline json to_json(const LatticeFunction& f) {
    json coeffs = json::array();
    for (const auto& [k, v] : f.coeffs) {  // map iterates keys lexicographically
        json entry;
        entry["k"] = k;
        entry["re"] = v.real();
        entry["im"] = v.imag();
        coeffs.push_back(std::move(entry));
    }
    return json{{"n", f.params.n}, {"c", f.params.c}, {"T", f.params.T},
                {"coeffs", std::move(coeffs)}};
}

inline LatticeFunction lattice_function_from_json(const json& j) {
    if (!j.is_object()) throw SerializationError("LatticeFunction: expected an object");
    for (const auto& [key, val] : j.items())
        if (key != "n" && key != "c" && key != "T" && key != "coeffs")
            throw SerializationError("LatticeFunction: unknown key '" + key + "'");
    if (!j.contains("n") || !j.contains("c") || !j.contains("T") || !j.contains("coeffs"))
        throw SerializationError("LatticeFunction: missing required key");
    LatticeFunction f;
    try {
        f.params.n = j.at("n").get<int>();
        f.params.c = j.at("c").get<std::vector<double>>();
        f.params.T = j.at("T").get<double>();
        for (const auto& entry : j.at("coeffs")) {
            for (const auto& [key, val] : entry.items())
                if (key != "k" && key != "re" && key != "im")
                    throw SerializationError("LatticeFunction: unknown coeff key '" + key + "'");
            MultiIndex k = entry.at("k").get<MultiIndex>();
            const std::complex<double> v(entry.at("re").get<double>(),
                                         entry.at("im").get<double>());
            if (!f.coeffs.emplace(std::move(k), v).second)
                throw SerializationError("LatticeFunction: duplicate coefficient key");
        }
    } catch (const json::exception& e) {
        throw SerializationError(std::string("LatticeFunction: ") + e.what());
    }
    f.validate();
    return f;
}

// --- SpectralFunction ----------------------------------------------------

inline json to_json(const SpectralFunction& s) {
    json values = json::array();
    for (const auto& v : s.values) values.push_back(json::array({v.real(), v.imag()}));
    return json{{"t_max", s.t_max},
                {"points_per_axis", s.points_per_axis},
                {"values", std::move(values)}};
}

// --- QuadratureSpec / ConcentrationReport ---------------------------------

inline json to_json(const QuadratureSpec& q) {
    return json{{"panel_count", q.panel_count},
                {"log_radius", q.log_radius},
                {"refinement_tol", q.refinement_tol},
                {"max_refinements", q.max_refinements}};
}

inline json to_json(const ConcentrationReport& rep, const ConcentrationCube& cube,
                    const QuadratureSpec& quad) {
    return json{{"cube_energy", rep.cube_energy},
                {"total_norm_sq", rep.total_norm_sq},
                {"delta", rep.delta},
                {"R", cube.R},
                {"quad", to_json(quad)}};
}

// --- bounds -----------------------------------------------------------------

inline json to_json(const FailureBound& b) {
    return json{{"log_value", b.log_value},
                {"raw", b.raw},
                {"capped", b.capped},
                {"clamped", b.clamped},
                {"vacuous", b.vacuous}};
}

// --- Monte Carlo report ------------------------------------------------------

inline json to_json(const SynthesisProfile& p) {
    json j{{"seed", p.seed},
           {"K", p.K},
           {"decay", p.decay == Decay::flat ? "flat" : "geometric"},
           {"max_rejections", p.max_rejections}};
    if (p.decay == Decay::geometric) j["q"] = p.q;
    if (p.target_delta) j["target_delta"] = *p.target_delta;
    return j;
}

inline json to_json(const FrameCheckResult& f) {
    return json{{"empirical_weighted", f.empirical_weighted},
                {"empirical_density", f.empirical_density},
                {"lower_paper", f.lower_paper},
                {"upper_paper", f.upper_paper},
                {"lower_sharp", f.lower_sharp},
                {"upper_sharp", f.upper_sharp},
                {"pass_paper", f.pass_paper},
                {"pass_sharp", f.pass_sharp},
                {"event_deviation", f.event_deviation},
                {"event_threshold", f.event_threshold},
                {"pass_event", f.pass_event},
                {"norm_sq", f.norm_sq},
                {"delta", f.delta},
                {"mu", f.mu}};
}

inline json to_json(const MonteCarloReport& r) {
    json trials = json::array();
    for (const auto& rec : r.records) {
        json row = to_json(rec.frame);
        row["trial"] = rec.trial;
        row["seed"] = rec.seed;
        trials.push_back(std::move(row));
    }
    return json{
        {"space", json{{"n", r.params.space.n}, {"c", r.params.space.c}, {"T", r.params.space.T}}},
        {"cube", json{{"R", r.params.cube.R}}},
        {"profile", to_json(r.params.profile)},
        {"quad", to_json(r.params.quad)},
        {"mu", r.params.mu},
        {"r", r.params.r},
        {"trials", r.params.trials},
        {"seed", r.params.seed},
        {"reuse_function", r.params.reuse_function},
        {"variant", variant_name(r.params.variant)},
        {"failures_paper", r.failures_paper},
        {"failures_sharp", r.failures_sharp},
        {"failures_event", r.failures_event},
        {"wilson_paper", json{{"lo", r.wilson_paper.lo}, {"hi", r.wilson_paper.hi}}},
        {"wilson_sharp", json{{"lo", r.wilson_sharp.lo}, {"hi", r.wilson_sharp.hi}}},
        {"theoretical_bound", to_json(r.theoretical)},
        {"per_trial", std::move(trials)}};
}

/// One row per trial, fixed column set, 17 significant digits.
inline std::string to_csv(const MonteCarloReport& r) {
    std::ostringstream out;
    out << "trial,seed,delta,empirical_weighted,lower_paper,upper_paper,"
           "lower_sharp,upper_sharp,pass_paper,pass_sharp\n";
    for (const auto& rec : r.records) {
        const auto& f = rec.frame;
        out << rec.trial << ',' << rec.seed << ',' << fmt17(rec.delta) << ','
            << fmt17(f.empirical_weighted) << ',' << fmt17(f.lower_paper) << ','
            << fmt17(f.upper_paper) << ',' << fmt17(f.lower_sharp) << ','
            << fmt17(f.upper_sharp) << ',' << (f.pass_paper ? 1 : 0) << ','
            << (f.pass_sharp ? 1 : 0) << '\n';
    }
    return out.str();
}

// --- files -------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("io", "write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw SerializationError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace mellin
