#pragma once

// Random unit-norm band-limited functions, lattice Parseval norms, truncation
// to the finite-dimensional subspace with its approximation bound, and
// delta-concentration measurement on the cube C_R = [1/R, R]^n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "mellin/core.hpp"
#include "mellin/errors.hpp"
#include "mellin/quadrature.hpp"
#include "mellin/rng.hpp"

namespace mellin {

/// The concentration cube C_R = [1/R, R]^n, R > 1.
struct ConcentrationCube {
    double R = 2.0;
    int n = 1;

    void validate() const {
        if (!(R > 1.0)) throw ParameterError("ConcentrationCube: R must be > 1");
        if (n < 1) throw ParameterError("ConcentrationCube: n must be >= 1");
    }

    double log_radius() const { return std::log(R); }
    double volume() const { return std::pow((R * R - 1.0) / R, n); }
};

enum class Decay { flat, geometric };

/// How random coefficients are drawn: support half-width K, decay profile over
/// |k|, and an optional concentration target enforced by rejection.
struct SynthesisProfile {
    std::uint64_t seed = 0;
    int K = 1;
    Decay decay = Decay::flat;
    double q = 0.5;  // geometric ratio, only for Decay::geometric
    std::optional<double> target_delta;
    int max_rejections = 64;

    void validate() const {
        if (K < 1) throw ParameterError("SynthesisProfile: K must be >= 1");
        if (decay == Decay::geometric && !(q > 0.0 && q < 1.0))
            throw ParameterError("SynthesisProfile: geometric decay needs 0 < q < 1");
        if (target_delta && !(*target_delta > 0.0 && *target_delta < 1.0))
            throw ParameterError("SynthesisProfile: target_delta must lie in (0,1)");
        if (max_rejections < 1)
            throw ParameterError("SynthesisProfile: max_rejections must be >= 1");
    }
};

/// Result of measuring the X_c^2 energy captured by the cube.
struct ConcentrationReport {
    double cube_energy = 0.0;
    double total_norm_sq = 0.0;
    double delta = 0.0;  // 1 - cube_energy / total_norm_sq
};

/// Lattice Parseval norm  sqrt( T^{-n} sum_k |c_k|^2 e^{2<c,k>/T} ),
/// accumulated in increasing-|k| order with compensated summation.
inline double norm_parseval(const LatticeFunction& f) {
    f.validate();
    std::vector<const std::pair<const MultiIndex, std::complex<double>>*> entries;
    entries.reserve(f.coeffs.size());
    for (const auto& e : f.coeffs) entries.push_back(&e);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto* a, const auto* b) {
                         return sup_norm(a->first) < sup_norm(b->first);
                     });
    double sum = 0.0, comp = 0.0;  // Kahan
    for (const auto* e : entries) {
        const double term =
            std::norm(e->second) * std::exp(2.0 * detail::dot(f.params.c, e->first) / f.params.T);
        if (!std::isfinite(term))
            throw OverflowError("norm_parseval: weighted term overflows");
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::sqrt(sum / std::pow(f.params.T, f.params.n));
}

/// Cube energy  int_{C_R} |f(x)|^2 x^{2c-1} dx  by panel-refined quadrature in
/// log coordinates, the total Parseval norm, and delta = 1 - ratio.
inline ConcentrationReport concentration(const LatticeFunction& f, const ConcentrationCube& cube,
                                         const QuadratureSpec& spec) {
    f.validate();
    cube.validate();
    if (cube.n != f.params.n) throw ParameterError("concentration: cube dimension mismatch");
    const double nrm = norm_parseval(f);
    ConcentrationReport rep;
    rep.total_norm_sq = nrm * nrm;
    if (rep.total_norm_sq == 0.0) {
        rep.cube_energy = 0.0;
        rep.delta = 0.0;
        return rep;
    }

    const double L = cube.log_radius();
    std::vector<double> lo(static_cast<std::size_t>(f.params.n), -L);
    std::vector<double> hi(static_cast<std::size_t>(f.params.n), L);
    auto integrand = [&f](std::span<const double> u) {
        // |f(e^u)|^2 e^{2<c,u>} = |e^{<c,u>} f(e^u)|^2
        const double m = std::abs(eval_series_log_xc(f, u));
        return m * m;
    };
    QuadratureSpec box = spec;
    box.panel_count =
        std::max(spec.panel_count, detail::panels_for(2.0 * L, 2.0 * kPi * f.params.T, 1));
    auto r = quad::integrate_box_refined(integrand, lo, hi, box);
    if (!r.converged) throw QuadratureError("concentration: refinement budget exhausted");
    rep.cube_energy = r.value;

    double delta = 1.0 - rep.cube_energy / rep.total_norm_sq;
    // quadrature noise may push the ratio a hair outside [0,1]
    if (delta < 0.0 && delta >= -1e-9) delta = 0.0;
    if (delta > 1.0 && delta <= 1.0 + 1e-9) delta = 1.0;
    if (delta < 0.0 || delta > 1.0)
        throw Error("concentration-range",
                    "concentration: delta outside [0,1] beyond quadrature tolerance");
    rep.delta = delta;
    return rep;
}

struct SynthesisOutcome {
    LatticeFunction function;
    std::optional<ConcentrationReport> report;  // present when a cube was given
    int attempts = 1;
};

namespace detail {

inline LatticeFunction draw_candidate(const SpaceParams& params, const SynthesisProfile& profile,
                                      std::uint64_t attempt) {
    LatticeFunction f;
    f.params = params;
    const auto box = index_box(params.n, profile.K);
    std::uint64_t linear = 0;
    for (const auto& k : box) {
        const auto g =
            rng::gaussian_pair(profile.seed, rng::kStreamCoefficients, attempt, linear++, 0);
        double amp = 1.0;
        if (profile.decay == Decay::geometric)
            amp = std::pow(profile.q, static_cast<double>(sup_norm(k)));
        f.coeffs[k] = std::complex<double>(g.z0 * amp, g.z1 * amp);
    }
    const double nrm = norm_parseval(f);
    for (auto& [k, v] : f.coeffs) v /= nrm;
    return f;
}

}  // namespace detail

/// Draws i.i.d. complex Gaussian coefficients on [-K, K]^n, applies the decay
/// profile, and rescales to unit Parseval norm.  With a target_delta the draw
/// is rejected and redrawn until the measured concentration reaches the
/// target.  Deterministic given the profile seed.
inline SynthesisOutcome synthesize(const SpaceParams& params, const SynthesisProfile& profile,
                                   const std::optional<ConcentrationCube>& cube = std::nullopt,
                                   const QuadratureSpec& spec = {}) {
    params.validate();
    profile.validate();
    if (profile.target_delta && !cube)
        throw ParameterError("synthesize: target_delta requires a cube");

    SynthesisOutcome out;
    double best_delta = std::numeric_limits<double>::infinity();
    const int attempts = profile.target_delta ? profile.max_rejections : 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        out.function = detail::draw_candidate(params, profile, static_cast<std::uint64_t>(attempt));
        out.attempts = attempt + 1;
        if (!cube) return out;
        out.report = concentration(out.function, *cube, spec);
        if (!profile.target_delta) return out;
        best_delta = std::min(best_delta, out.report->delta);
        if (out.report->delta <= *profile.target_delta) return out;
    }
    throw RejectionExhaustedError("synthesize: target_delta unreachable within max_rejections",
                                  best_delta);
}

/// Spec surface: just the function (see synthesize for the full outcome).
inline LatticeFunction random_band_function(const SpaceParams& params,
                                            const SynthesisProfile& profile,
                                            const std::optional<ConcentrationCube>& cube = std::nullopt,
                                            const QuadratureSpec& spec = {}) {
    return synthesize(params, profile, cube, spec).function;
}

/// Keep only coefficients with k in Z^n and every |k_i| <= N/2.
inline LatticeFunction truncate_to_BN(const LatticeFunction& f, std::int64_t N) {
    if (N < 0) throw ParameterError("truncate_to_BN: N must be nonnegative");
    const std::int64_t h = N / 2;
    LatticeFunction out;
    out.params = f.params;
    for (const auto& [k, v] : f.coeffs)
        if (sup_norm(k) <= h) out.coeffs.emplace(k, v);
    return out;
}

/// Sup-norm approximation bound on C_R for truncation to [-N/2, N/2]^n:
///   T^{n/2} ||f|| (4 / (pi^2 (N - 2 T log R)))^{n/2},
/// +infinity when N <= 2 T log R.
inline double truncation_error_bound(std::int64_t N, const SpaceParams& params,
                                     const ConcentrationCube& cube, double norm) {
    params.validate();
    cube.validate();
    if (norm < 0.0) throw ParameterError("truncation_error_bound: norm must be >= 0");
    const double slack = static_cast<double>(N) - 2.0 * params.T * cube.log_radius();
    if (slack <= 0.0) return std::numeric_limits<double>::infinity();
    if (norm == 0.0) return 0.0;
    return std::pow(params.T, params.n / 2.0) * norm *
           std::pow(4.0 / (kPi * kPi * slack), params.n / 2.0);
}

/// Least integer N with N > 4 T pi^{-2} eps^{-2/n} + 2 T log R, the window
/// size guaranteeing sup error < eps ||f|| on C_R.
inline std::int64_t min_N_for_error(double epsilon, const SpaceParams& params,
                                    const ConcentrationCube& cube,
                                    std::int64_t cap = 100000000) {
    params.validate();
    cube.validate();
    if (!(epsilon > 0.0)) throw ParameterError("min_N_for_error: epsilon must be > 0");
    const double threshold = 4.0 * params.T / (kPi * kPi) *
                                 std::pow(epsilon, -2.0 / params.n) +
                             2.0 * params.T * cube.log_radius();
    if (!std::isfinite(threshold) || threshold >= static_cast<double>(cap))
        throw OverflowError("min_N_for_error: required N exceeds the lattice cap");
    return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

}  // namespace mellin
