#pragma once

// Uniform random draws on C_R, the centered Z_j variables, empirical frame
// functionals, the two-sided sampling-inequality check, and the Monte Carlo
// failure-rate experiment.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mellin/bounds.hpp"
#include "mellin/core.hpp"
#include "mellin/errors.hpp"
#include "mellin/rng.hpp"
#include "mellin/synthesis.hpp"

namespace mellin {

/// r points drawn coordinatewise Lebesgue-uniform from [1/R, R]^n.  Point j
/// depends only on (seed, j, coordinate), so prefixes of a larger draw equal
/// a smaller draw with the same seed.
struct SamplePointSet {
    std::vector<std::vector<double>> points;
    std::uint64_t seed = 0;
    double R = 0.0;

    std::int64_t r() const { return static_cast<std::int64_t>(points.size()); }
};

inline SamplePointSet draw_uniform(std::int64_t r, const ConcentrationCube& cube,
                                   std::uint64_t seed) {
    cube.validate();
    if (r < 1) throw ParameterError("draw_uniform: r must be >= 1");
    SamplePointSet out;
    out.seed = seed;
    out.R = cube.R;
    out.points.resize(static_cast<std::size_t>(r));
    const double lo = 1.0 / cube.R;
    for (std::int64_t j = 0; j < r; ++j) {
        auto& x = out.points[static_cast<std::size_t>(j)];
        x.resize(static_cast<std::size_t>(cube.n));
        for (int i = 0; i < cube.n; ++i)
            x[static_cast<std::size_t>(i)] =
                rng::uniform_range(lo, cube.R, seed, rng::kStreamSamplePoints,
                                   static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i), 0);
    }
    return out;
}

namespace detail {

inline double weight_power(std::span<const double> x, std::span<const double> c,
                           double shift) {
    // prod_i x_i^{2 c_i + shift}
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= std::pow(x[i], 2.0 * c[i] + shift);
    return p;
}

}  // namespace detail

/// Z_j(f) = |f(x_j)|^2 x_j^{2c-1} - cube_energy / vol(C_R);  the subtracted
/// term is R^n/(R^2-1)^n times the cube energy, which makes E[Z_j] = 0 under
/// the uniform law.
template <class F>
double z_variable(F&& f, std::span<const double> x, std::span<const double> c,
                  const ConcentrationCube& cube, double cube_energy) {
    cube.validate();
    const double lo = 1.0 / cube.R;
    for (double xi : x)
        if (!(xi >= lo && xi <= cube.R)) throw DomainError("z_variable: point outside C_R");
    const double fx = std::abs(std::complex<double>(f(x)));
    return fx * fx * detail::weight_power(x, c, -1.0) +
           -std::pow(cube.R / (cube.R * cube.R - 1.0), cube.n) * cube_energy;
}

struct EmpiricalFrame {
    double weighted = 0.0;  // (1/r) sum |f(x_j)|^2 x_j^{2c}
    double density = 0.0;   // (1/r) sum |f(x_j)|^2 x_j^{2c-1}
};

/// Both empirical functionals in one pass, compensated summation, fixed order.
template <class F>
EmpiricalFrame empirical_frame(F&& f, const SamplePointSet& pts, std::span<const double> c) {
    if (pts.points.empty()) throw ParameterError("empirical_frame: empty point set");
    double sw = 0.0, cw = 0.0, sd = 0.0, cd = 0.0;
    for (const auto& x : pts.points) {
        const double fx = std::abs(std::complex<double>(f(std::span<const double>(x))));
        const double f2 = fx * fx;
        const double tw = f2 * detail::weight_power(x, c, 0.0);
        const double td = f2 * detail::weight_power(x, c, -1.0);
        double y = tw - cw;
        double t = sw + y;
        cw = (t - sw) - y;
        sw = t;
        y = td - cd;
        t = sd + y;
        cd = (t - sd) - y;
        sd = t;
    }
    const double r = static_cast<double>(pts.points.size());
    return {sw / r, sd / r};
}

/// Outcome of one two-sided sampling-inequality check.  The paper constants
/// R^{n-1} and R^{n+1} are evaluated exactly as printed; the sharp variants
/// use R^0 and R^{2n}, which is what bounding prod x_i by R^{+-n} gives.
/// The proof's event (density form, threshold mu R^n/(R^2-1)^n) is reported
/// alongside.
struct FrameCheckResult {
    double empirical_weighted = 0.0;
    double empirical_density = 0.0;
    double lower_paper = 0.0, upper_paper = 0.0;
    double lower_sharp = 0.0, upper_sharp = 0.0;
    bool pass_paper = false, pass_sharp = false;
    double event_deviation = 0.0;
    double event_threshold = 0.0;
    bool pass_event = false;
    double norm_sq = 0.0;
    double delta = 0.0;
    double mu = 0.0;
};

inline FrameCheckResult check_inequality(const LatticeFunction& f, const SamplePointSet& pts,
                                         double mu, double delta_measured,
                                         const ConcentrationCube& cube) {
    cube.validate();
    if (!(mu > 0.0 && mu < 1.0 - delta_measured))
        throw ParameterError("check_inequality: mu must lie in (0, 1 - delta)");
    const double nrm = norm_parseval(f);
    const double norm_sq = nrm * nrm;
    const double vol = std::pow(cube.R * cube.R - 1.0, cube.n);
    const int n = cube.n;

    FrameCheckResult res;
    res.mu = mu;
    res.delta = delta_measured;
    res.norm_sq = norm_sq;
    const EmpiricalFrame ef = empirical_frame(
        [&f](std::span<const double> x) { return eval_series(f, x); }, pts, f.params.c);
    res.empirical_weighted = ef.weighted;
    res.empirical_density = ef.density;

    res.lower_paper = std::pow(cube.R, n - 1) * (1.0 - delta_measured - mu) / vol * norm_sq;
    res.upper_paper = std::pow(cube.R, n + 1) * (1.0 + mu) / vol * norm_sq;
    res.lower_sharp = (1.0 - delta_measured - mu) / vol * norm_sq;
    res.upper_sharp = std::pow(cube.R, 2 * n) * (1.0 + mu) / vol * norm_sq;
    res.pass_paper = res.lower_paper <= ef.weighted && ef.weighted <= res.upper_paper;
    res.pass_sharp = res.lower_sharp <= ef.weighted && ef.weighted <= res.upper_sharp;

    const double cube_energy = (1.0 - delta_measured) * norm_sq;
    const double inv_vol = std::pow(cube.R, n) / vol;
    res.event_deviation = std::fabs(ef.density - inv_vol * cube_energy);
    res.event_threshold = mu * inv_vol;
    res.pass_event = res.event_deviation <= res.event_threshold;
    return res;
}

struct WilsonInterval {
    double lo = 0.0, hi = 0.0;
};

/// Wilson 95% score interval for a binomial proportion.
inline WilsonInterval wilson95(std::int64_t successes, std::int64_t trials) {
    if (trials < 1) throw ParameterError("wilson95: trials must be >= 1");
    if (successes < 0 || successes > trials)
        throw ParameterError("wilson95: successes out of range");
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double ph = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double den = 1.0 + z2 / nn;
    const double ctr = (ph + z2 / (2.0 * nn)) / den;
    const double hw = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / den;
    WilsonInterval w{std::max(0.0, ctr - hw), std::min(1.0, ctr + hw)};
    if (successes == 0) w.lo = 0.0;  // the exact endpoint, not a rounding residue
    if (successes == trials) w.hi = 1.0;
    return w;
}

/// Empirical behavior of the Z_j sequence against the variance / sup bounds,
/// with an optional paired function for the Lipschitz estimate.
struct ZStatistics {
    double mean = 0.0;
    double mean_standard_error = 0.0;
    double empirical_var = 0.0;
    double var_standard_error = 0.0;
    double sup_abs = 0.0;
    std::optional<double> lipschitz_lhs;  // max_j |Z_j(f) - Z_j(g)|
    std::optional<double> lipschitz_rhs;  // 2 R^n sup-probe x^c |f - g|
};

/// Probe-grid sup of x^c |f(x) - g(x)| over C_R, log-equispaced points.
inline double probe_sup_xc_diff(const LatticeFunction& f, const LatticeFunction& g,
                                const ConcentrationCube& cube, int per_axis = 257) {
    const double L = cube.log_radius();
    const int n = f.params.n;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> u(static_cast<std::size_t>(n));
    double sup = 0.0;
    while (true) {
        for (int i = 0; i < n; ++i)
            u[static_cast<std::size_t>(i)] =
                -L + idx[static_cast<std::size_t>(i)] * (2.0 * L / (per_axis - 1));
        sup = std::max(sup, std::abs(eval_series_log_xc(f, u) - eval_series_log_xc(g, u)));
        int axis = n - 1;
        while (axis >= 0 && idx[static_cast<std::size_t>(axis)] + 1 == per_axis) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++idx[static_cast<std::size_t>(axis)];
    }
    return sup;
}

inline ZStatistics z_statistics(const LatticeFunction& f, const SamplePointSet& pts,
                                const ConcentrationCube& cube, const QuadratureSpec& spec,
                                const LatticeFunction* paired = nullptr) {
    const double ce_f = concentration(f, cube, spec).cube_energy;
    const auto zf = [&](std::span<const double> x) {
        return z_variable([&f](std::span<const double> xx) { return eval_series(f, xx); }, x,
                          f.params.c, cube, ce_f);
    };
    const std::size_t r = pts.points.size();
    std::vector<double> z(r);
    for (std::size_t j = 0; j < r; ++j) z[j] = zf(pts.points[j]);

    ZStatistics st;
    double sum = 0.0, comp = 0.0;
    for (double v : z) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    st.mean = sum / static_cast<double>(r);
    double m2 = 0.0, m4 = 0.0;
    for (double v : z) {
        const double d = v - st.mean;
        m2 += d * d;
        m4 += d * d * d * d;
        st.sup_abs = std::max(st.sup_abs, std::fabs(v));
    }
    m2 /= static_cast<double>(r);
    m4 /= static_cast<double>(r);
    st.empirical_var = m2;
    st.var_standard_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(r));
    st.mean_standard_error = std::sqrt(m2 / static_cast<double>(r));

    if (paired != nullptr) {
        const double ce_g = concentration(*paired, cube, spec).cube_energy;
        double lhs = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            const double zg = z_variable(
                [paired](std::span<const double> xx) { return eval_series(*paired, xx); },
                pts.points[j], paired->params.c, cube, ce_g);
            lhs = std::max(lhs, std::fabs(z[j] - zg));
        }
        st.lipschitz_lhs = lhs;
        st.lipschitz_rhs =
            2.0 * std::pow(cube.R, cube.n) * probe_sup_xc_diff(f, *paired, cube);
    }
    return st;
}

// ---------------------------------------------------------------------------
// Monte Carlo experiment
// ---------------------------------------------------------------------------

struct ExperimentParams {
    SpaceParams space;
    ConcentrationCube cube;
    SynthesisProfile profile;
    QuadratureSpec quad;
    double mu = 0.5;
    std::int64_t r = 1000;
    int trials = 1;
    std::uint64_t seed = 0;
    bool reuse_function = false;
    Variant variant = Variant::paper;
    int threads = 1;  // affects speed only, never results
};

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    double delta = 0.0;
    FrameCheckResult frame;
};

struct MonteCarloReport {
    ExperimentParams params;
    std::vector<TrialRecord> records;
    std::int64_t failures_paper = 0;
    std::int64_t failures_sharp = 0;
    std::int64_t failures_event = 0;
    WilsonInterval wilson_paper;
    WilsonInterval wilson_sharp;
    FailureBound theoretical;  // 2 beta exp(-r alpha), usually vacuous at desk scale
};

/// Per trial: synthesize (or reuse) a unit-norm function with measured delta,
/// draw r points, check the inequality under both constant sets.  Trials are
/// aggregated by index, so the report is identical for any thread count.
inline MonteCarloReport monte_carlo_experiment(const ExperimentParams& params) {
    params.space.validate();
    params.cube.validate();
    params.profile.validate();
    if (params.trials < 1) throw ParameterError("monte_carlo_experiment: trials must be >= 1");
    if (params.cube.n != params.space.n)
        throw ParameterError("monte_carlo_experiment: cube dimension mismatch");

    MonteCarloReport report;
    report.params = params;
    report.records.resize(static_cast<std::size_t>(params.trials));
    std::vector<std::string> errors(static_cast<std::size_t>(params.trials));

    const std::uint64_t reuse_seed = rng::derive_seed(params.seed, rng::kStreamTrial, 0);
    auto run_trial = [&](int trial) {
        const std::uint64_t trial_seed =
            rng::derive_seed(params.seed, rng::kStreamTrial, static_cast<std::uint64_t>(trial));
        SynthesisProfile prof = params.profile;
        prof.seed = params.reuse_function ? reuse_seed : trial_seed;
        const SynthesisOutcome synth =
            synthesize(params.space, prof, params.cube, params.quad);
        const double delta = synth.report->delta;
        const SamplePointSet pts = draw_uniform(params.r, params.cube, trial_seed);
        TrialRecord rec;
        rec.trial = trial;
        rec.seed = trial_seed;
        rec.delta = delta;
        rec.frame = check_inequality(synth.function, pts, params.mu, delta, params.cube);
        report.records[static_cast<std::size_t>(trial)] = std::move(rec);
    };

    const int workers = std::max(1, std::min(params.threads, params.trials));
    if (workers == 1) {
        for (int t = 0; t < params.trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const int t = next.fetch_add(1);
                    if (t >= params.trials) return;
                    try {
                        run_trial(t);
                    } catch (const std::exception& e) {
                        errors[static_cast<std::size_t>(t)] = e.what();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        for (int t = 0; t < params.trials; ++t)
            if (!errors[static_cast<std::size_t>(t)].empty())
                throw Error("experiment-trial",
                            "trial " + std::to_string(t) + ": " + errors[static_cast<std::size_t>(t)]);
    }

    for (const auto& rec : report.records) {
        report.failures_paper += rec.frame.pass_paper ? 0 : 1;
        report.failures_sharp += rec.frame.pass_sharp ? 0 : 1;
        report.failures_event += rec.frame.pass_event ? 0 : 1;
    }
    report.wilson_paper = wilson95(report.failures_paper, params.trials);
    report.wilson_sharp = wilson95(report.failures_sharp, params.trials);
    report.theoretical = sampling_failure_bound(params.mu, params.space.T, params.cube.R,
                                                params.space.n, params.r, params.variant);
    return report;
}

}  // namespace mellin
