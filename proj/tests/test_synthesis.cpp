#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "mellin/quadrature.hpp"
#include "mellin/synthesis.hpp"

using namespace mellin;

namespace {

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

constexpr double kE = 2.718281828459045235360287471352662498;

LatticeFunction single_coeff(const SpaceParams& p, MultiIndex k, std::complex<double> v) {
    LatticeFunction f;
    f.params = p;
    f.coeffs[std::move(k)] = v;
    return f;
}

// log-axis quadrature of the squared weighted modulus over support + margin
double norm_sq_by_quadrature(const LatticeFunction& f, double margin_steps) {
    const double W = (static_cast<double>(f.support_radius()) + margin_steps) / f.params.T;
    QuadratureSpec spec;
    spec.panel_count = std::max(64, static_cast<int>(2.0 * W * f.params.T));
    spec.refinement_tol = 1e-8;
    auto integrand = [&f](double u) {
        const double uu[1] = {u};
        const double m = std::abs(eval_series_log_xc(f, std::span<const double>(uu, 1)));
        return m * m;
    };
    return quad::integrate_refined_or_throw(integrand, -W, W, spec, "norm oracle");
}

}  // namespace

TEST_CASE("norm_parseval basic values", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    LatticeFunction zero;
    zero.params = p;
    CHECK(norm_parseval(zero) == 0.0);

    const auto f = single_coeff(p, {0}, 1.0);
    CHECK(norm_parseval(f) == 1.0);

    // single coefficient at k: T^{-n/2} e^{<c,k>/T}
    SpaceParams pc{1, {0.7}, 4.0};
    const auto g = single_coeff(pc, {3}, 1.0);
    CHECK(rel_close(norm_parseval(g), std::pow(4.0, -0.5) * std::exp(0.7 * 3.0 / 4.0), 1e-14));
}

TEST_CASE("norm_parseval agrees with the quadrature oracle", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = single_coeff(p, {0}, 1.0);
    // int sinc^2(log x)/x dx = 1
    CHECK(rel_close(norm_sq_by_quadrature(f, 200.0), 1.0, 1e-3));

    SpaceParams pc{1, {0.3}, 2.0};
    const auto g = single_coeff(pc, {2}, std::complex<double>(0.6, -0.8));
    const double expect = std::norm(g.coeffs.at({2})) * std::exp(2.0 * 0.3 * 2.0 / 2.0) / 2.0;
    CHECK(rel_close(norm_sq_by_quadrature(g, 200.0), expect, 1e-3));
    CHECK(rel_close(norm_parseval(g) * norm_parseval(g), expect, 1e-14));
}

TEST_CASE("Parseval vs quadrature for random functions", "[synthesis]") {
    // window = support + 30 steps; profiles keep the spectral mass well inside
    SpaceParams p{1, {0.1}, 1.0};
    SynthesisProfile prof;
    prof.K = 170;
    prof.decay = Decay::geometric;
    prof.q = 0.85;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        prof.seed = seed;
        const auto f = random_band_function(p, prof);
        const double nsq = norm_parseval(f) * norm_parseval(f);
        CHECK(rel_close(norm_sq_by_quadrature(f, 30.0), nsq, 2e-3));
    }
}

TEST_CASE("random_band_function is unit norm and deterministic", "[synthesis]") {
    SpaceParams p{1, {0.2}, 2.0};
    SynthesisProfile prof;
    prof.seed = 42;
    prof.K = 6;
    const auto f1 = random_band_function(p, prof);
    const auto f2 = random_band_function(p, prof);
    CHECK(std::fabs(norm_parseval(f1) - 1.0) < 1e-12);
    REQUIRE(f1.coeffs.size() == 13);
    CHECK(f1.coeffs == f2.coeffs);

    prof.seed = 43;
    const auto f3 = random_band_function(p, prof);
    CHECK(f1.coeffs != f3.coeffs);
}

TEST_CASE("geometric decay damps outer coefficients", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    SynthesisProfile prof;
    prof.seed = 7;
    prof.K = 12;
    prof.decay = Decay::geometric;
    prof.q = 0.5;
    const auto f = random_band_function(p, prof);
    // expected coefficient scale falls by q per |k| step; check the envelope
    CHECK(std::abs(f.coeffs.at({12})) < std::abs(f.coeffs.at({0})));
    CHECK(std::abs(f.coeffs.at({-12})) < 0.01 * std::abs(f.coeffs.at({0})) + 1e-6);
}

TEST_CASE("synthesize honors target_delta on a concentrated profile", "[synthesis]") {
    // lattice points with |k| <= T log R sit inside the cube
    SpaceParams p{1, {0.0}, 4.0};
    ConcentrationCube cube{std::exp(5.0), 1};
    SynthesisProfile prof;
    prof.seed = 5;
    prof.K = 20;
    prof.target_delta = 0.2;
    prof.max_rejections = 8;
    QuadratureSpec spec;
    spec.refinement_tol = 1e-7;
    const auto out = synthesize(p, prof, cube, spec);
    REQUIRE(out.report.has_value());
    CHECK(out.report->delta <= 0.2);
    CHECK(std::fabs(norm_parseval(out.function) - 1.0) < 1e-12);
}

TEST_CASE("synthesize reports rejection exhaustion", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    ConcentrationCube cube{1.2, 1};  // tiny cube: most energy falls outside
    SynthesisProfile prof;
    prof.seed = 1;
    prof.K = 10;
    prof.target_delta = 1e-6;
    prof.max_rejections = 3;
    QuadratureSpec spec;
    spec.refinement_tol = 1e-7;
    try {
        synthesize(p, prof, cube, spec);
        FAIL("expected RejectionExhaustedError");
    } catch (const RejectionExhaustedError& e) {
        CHECK(e.best_delta() > 0.0);
        CHECK(e.best_delta() <= 1.0);
        CHECK(e.code() == "rejection-exhausted");
    }
}

TEST_CASE("truncate_to_BN windows", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    SynthesisProfile prof;
    prof.seed = 11;
    prof.K = 9;
    const auto f = random_band_function(p, prof);

    const auto full = truncate_to_BN(f, 2 * 9 + 1);
    CHECK(full.coeffs == f.coeffs);

    const auto only0 = truncate_to_BN(f, 0);
    REQUIRE(only0.coeffs.size() == 1);
    CHECK(only0.coeffs.count({0}) == 1);

    double prev = norm_parseval(f);
    for (std::int64_t N : {18, 12, 8, 4, 0}) {
        const double nn = norm_parseval(truncate_to_BN(f, N));
        CHECK(nn <= prev * (1.0 + 1e-15));
        prev = nn;
    }
}

TEST_CASE("truncation_error_bound reference value and edge cases", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    ConcentrationCube cube{kE, 1};
    CHECK(rel_close(truncation_error_bound(43, p, cube, 1.0), 0.09942330474331324398, 1e-12));
    CHECK(std::isinf(truncation_error_bound(2, p, cube, 1.0)));
    CHECK(std::isinf(truncation_error_bound(1, p, cube, 1.0)));
    CHECK(truncation_error_bound(43, p, cube, 0.0) == 0.0);
}

TEST_CASE("min_N_for_error reference value and monotonicity", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    ConcentrationCube cube{kE, 1};
    CHECK(min_N_for_error(0.1, p, cube) == 43);
    std::int64_t prev = 1LL << 40;
    for (double eps : {0.01, 0.1, 0.5, 2.0, 100.0}) {
        const std::int64_t N = min_N_for_error(eps, p, cube);
        CHECK(N <= prev);
        prev = N;
    }
    // consistency with the bound it inverts
    for (double eps : {0.5, 0.1, 0.01}) {
        const std::int64_t N = min_N_for_error(eps, p, cube);
        CHECK(truncation_error_bound(N, p, cube, 1.0) < eps);
    }
    CHECK_THROWS_AS(min_N_for_error(1e-9, p, cube, 1000), OverflowError);
}

TEST_CASE("concentration of the central lin profile", "[synthesis]") {
    // delta = 1 - int_{-3}^{3} sinc^2 = 0.033589565004505735 (precomputed)
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = single_coeff(p, {0}, 1.0);
    ConcentrationCube cube{std::exp(3.0), 1};
    QuadratureSpec spec;
    spec.refinement_tol = 1e-9;
    const auto rep = concentration(f, cube, spec);
    CHECK(rel_close(rep.total_norm_sq, 1.0, 1e-14));
    CHECK(rel_close(rep.delta, 0.033589565004505735067, 1e-6));
    CHECK(rep.delta > 0.0);
    CHECK(rep.delta < 0.08);
}

TEST_CASE("concentration of a far-off coefficient is near one", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = single_coeff(p, {60}, 1.0);
    ConcentrationCube cube{std::exp(3.0), 1};
    QuadratureSpec spec;
    spec.refinement_tol = 1e-9;
    CHECK(concentration(f, cube, spec).delta > 0.99);
}

TEST_CASE("concentration is scale invariant and monotone in R", "[synthesis]") {
    SpaceParams p{1, {0.1}, 1.0};
    SynthesisProfile prof;
    prof.seed = 3;
    prof.K = 5;
    auto f = random_band_function(p, prof);
    QuadratureSpec spec;
    spec.refinement_tol = 1e-8;
    ConcentrationCube cube{std::exp(2.0), 1};
    const double d1 = concentration(f, cube, spec).delta;
    for (auto& [k, v] : f.coeffs) v *= std::complex<double>(-3.7, 1.2);
    const double d2 = concentration(f, cube, spec).delta;
    CHECK(rel_close(d1, d2, 1e-9));

    LatticeFunction g;
    g.params = p;
    g.coeffs[{1}] = 1.0;
    g.coeffs[{-2}] = std::complex<double>(0.0, 2.0);
    double prev = 1.0;
    for (double logR : {1.0, 2.0, 3.0}) {
        const double d = concentration(g, ConcentrationCube{std::exp(logR), 1}, spec).delta;
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("delta of truncations approaches delta of the function", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    SynthesisProfile prof;
    prof.seed = 9;
    prof.K = 8;
    const auto f = random_band_function(p, prof);
    ConcentrationCube cube{std::exp(2.0), 1};
    QuadratureSpec spec;
    spec.refinement_tol = 1e-8;
    const double target = concentration(f, cube, spec).delta;
    const double d16 = concentration(truncate_to_BN(f, 16), cube, spec).delta;
    CHECK(rel_close(d16, target, 1e-9));  // window covers the whole support
    const double d4 = concentration(truncate_to_BN(f, 4), cube, spec).delta;
    CHECK(std::fabs(d4 - target) >= 0.0);  // well-defined on the way there
}

TEST_CASE("zero function concentration", "[synthesis]") {
    SpaceParams p{1, {0.0}, 1.0};
    LatticeFunction zero;
    zero.params = p;
    ConcentrationCube cube{2.0, 1};
    QuadratureSpec spec;
    const auto rep = concentration(zero, cube, spec);
    CHECK(rep.delta == 0.0);
    CHECK(rep.cube_energy == 0.0);
}

TEST_CASE("profile validation", "[synthesis]") {
    SynthesisProfile bad;
    bad.K = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = {};
    bad.decay = Decay::geometric;
    bad.q = 1.5;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = {};
    bad.target_delta = 2.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}
