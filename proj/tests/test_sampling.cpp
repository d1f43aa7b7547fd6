#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "mellin/sampling.hpp"
#include "mellin/serialize.hpp"

using namespace mellin;

namespace {

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

LatticeFunction unit_coeff(const SpaceParams& p) {
    LatticeFunction f;
    f.params = p;
    f.coeffs[{0}] = 1.0;
    return f;
}

}  // namespace

TEST_CASE("draw_uniform range, mean, determinism", "[sampling]") {
    ConcentrationCube cube{2.0, 1};
    const auto pts = draw_uniform(100000, cube, 17);
    double sum = 0.0;
    for (const auto& x : pts.points) {
        REQUIRE(x[0] >= 0.5);
        REQUIRE(x[0] <= 2.0);
        sum += x[0];
    }
    const double mean = sum / 100000.0;
    const double want = (2.0 + 0.5) / 2.0;
    const double se = (2.0 - 0.5) / std::sqrt(12.0 * 100000.0);
    CHECK(std::fabs(mean - want) <= 4.0 * se);

    const auto again = draw_uniform(100000, cube, 17);
    CHECK(pts.points == again.points);
    const auto other = draw_uniform(10, cube, 18);
    CHECK(other.points[0] != pts.points[0]);
}

TEST_CASE("draw_uniform prefixes are stable in r", "[sampling]") {
    ConcentrationCube cube{3.0, 2};
    const auto small = draw_uniform(50, cube, 9);
    const auto big = draw_uniform(500, cube, 9);
    for (std::size_t j = 0; j < 50; ++j) CHECK(small.points[j] == big.points[j]);
}

TEST_CASE("z_variable vanishes for a flat weighted density", "[sampling]") {
    // |f(x)|^2 x^{2c-1} = 9 identically when f = 3 sqrt(x), c = 0
    ConcentrationCube cube{2.0, 1};
    const std::vector<double> c0 = {0.0};
    auto f = [](std::span<const double> x) { return 3.0 * std::sqrt(x[0]); };
    const double cube_energy = 9.0 * (2.0 * 2.0 - 1.0) / 2.0;  // 9 vol(C_R)
    for (double x : {0.5, 0.9, 1.3, 2.0}) {
        const std::vector<double> xv = {x};
        CHECK(std::fabs(z_variable(f, xv, c0, cube, cube_energy)) < 1e-12);
    }
}

TEST_CASE("z_variable rejects points outside the cube", "[sampling]") {
    ConcentrationCube cube{2.0, 1};
    const std::vector<double> c0 = {0.0};
    const std::vector<double> xv = {2.5};
    auto f = [](std::span<const double>) { return 1.0; };
    CHECK_THROWS_AS(z_variable(f, xv, c0, cube, 1.0), DomainError);
}

TEST_CASE("z_variable is centered and bounded for a unit-norm function", "[sampling]") {
    SpaceParams p{1, {0.0}, 1.0};
    SynthesisProfile prof;
    prof.seed = 51;
    prof.K = 8;
    const auto f = random_band_function(p, prof);
    ConcentrationCube cube{2.0, 1};
    QuadratureSpec spec;
    spec.refinement_tol = 1e-9;
    const double ce = concentration(f, cube, spec).cube_energy;

    const auto pts = draw_uniform(100000, cube, 99);
    auto feval = [&f](std::span<const double> x) { return eval_series(f, x); };
    double sum = 0.0, sumsq = 0.0, supz = 0.0;
    for (const auto& x : pts.points) {
        const double z = z_variable(feval, x, p.c, cube, ce);
        sum += z;
        sumsq += z * z;
        supz = std::max(supz, std::fabs(z));
    }
    const double r = 1e5;
    const double mean = sum / r;
    const double var = sumsq / r - mean * mean;
    CHECK(std::fabs(mean) <= 4.0 * std::sqrt(var / r));  // E[Z] = 0
    CHECK(supz <= 2.0);                                  // |Z| <= R^n
    CHECK(var <= 4.0 / 3.0 + 3.0 * std::sqrt(var / r));  // Var <= R^2/(R^2-1)
}

TEST_CASE("empirical_frame on elementary inputs", "[sampling]") {
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = unit_coeff(p);
    SamplePointSet pts;
    pts.R = 2.0;
    pts.points = {{1.0}};
    auto feval = [&f](std::span<const double> x) { return eval_series(f, x); };
    const auto ef = empirical_frame(feval, pts, p.c);
    CHECK(ef.weighted == 1.0);
    CHECK(ef.density == 1.0);

    auto zero = [](std::span<const double>) { return 0.0; };
    const auto ez = empirical_frame(zero, pts, p.c);
    CHECK(ez.weighted == 0.0);
    CHECK(ez.density == 0.0);
}

TEST_CASE("weighted/density ratio lies in [R^{-n}, R^n]", "[sampling]") {
    SpaceParams p{1, {0.35}, 1.0};
    SynthesisProfile prof;
    prof.seed = 77;
    prof.K = 4;
    const auto f = random_band_function(p, prof);
    ConcentrationCube cube{3.0, 1};
    const auto pts = draw_uniform(500, cube, 7);
    auto feval = [&f](std::span<const double> x) { return eval_series(f, x); };
    const auto ef = empirical_frame(feval, pts, p.c);
    CHECK(ef.weighted >= ef.density / 3.0 * (1.0 - 1e-12));
    CHECK(ef.weighted <= ef.density * 3.0 * (1.0 + 1e-12));
}

TEST_CASE("check_inequality constants at the reference point", "[sampling]") {
    // n=1, R=2, delta=0.1, mu=0.1, ||f|| = 1
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = unit_coeff(p);
    ConcentrationCube cube{2.0, 1};
    const auto pts = draw_uniform(10, cube, 3);
    const auto res = check_inequality(f, pts, 0.1, 0.1, cube);
    CHECK(rel_close(res.lower_paper, 0.26666666666666666667, 1e-12));
    CHECK(rel_close(res.upper_paper, 1.4666666666666666667, 1e-12));
    // at n = 1 paper and sharp constants coincide
    CHECK(res.lower_sharp == res.lower_paper);
    CHECK(res.upper_sharp == res.upper_paper);
    CHECK(res.event_threshold == 0.1 * 2.0 / 3.0);
}

TEST_CASE("sharp constants bracket the paper constants for n >= 2", "[sampling]") {
    SpaceParams p{2, {0.0, 0.0}, 1.0};
    LatticeFunction f;
    f.params = p;
    f.coeffs[{0, 0}] = 1.0;
    ConcentrationCube cube{2.0, 2};
    const auto pts = draw_uniform(10, cube, 3);
    const auto res = check_inequality(f, pts, 0.2, 0.1, cube);
    CHECK(res.lower_sharp <= res.lower_paper);
    CHECK(res.upper_sharp >= res.upper_paper);
    CHECK(rel_close(res.lower_paper / res.lower_sharp, 2.0, 1e-12));        // R^{n-1}
    CHECK(rel_close(res.upper_sharp / res.upper_paper, 2.0, 1e-12));        // R^{2n}/R^{n+1}
}

TEST_CASE("check_inequality validates mu", "[sampling]") {
    SpaceParams p{1, {0.0}, 1.0};
    const auto f = unit_coeff(p);
    ConcentrationCube cube{2.0, 1};
    const auto pts = draw_uniform(5, cube, 1);
    CHECK_THROWS_AS(check_inequality(f, pts, 0.95, 0.1, cube), ParameterError);
    CHECK_THROWS_AS(check_inequality(f, pts, 0.0, 0.1, cube), ParameterError);
    CHECK_THROWS_AS(check_inequality(f, pts, -0.2, 0.1, cube), ParameterError);
}

TEST_CASE("wilson95 reference values", "[sampling]") {
    auto w = wilson95(0, 200);
    CHECK(w.lo == 0.0);
    CHECK(rel_close(w.hi, 0.018845326377266577924, 1e-12));
    w = wilson95(3, 200);
    CHECK(rel_close(w.lo, 0.0051142377932583109615, 1e-12));
    CHECK(rel_close(w.hi, 0.043165728792690269625, 1e-12));
    w = wilson95(200, 200);
    CHECK(rel_close(w.lo, 0.98115467362273342208, 1e-12));
    CHECK(w.hi == 1.0);
    CHECK_THROWS_AS(wilson95(5, 2), ParameterError);
}

TEST_CASE("z_statistics bounds and the Lipschitz probe", "[sampling]") {
    SpaceParams p{1, {0.0}, 1.0};
    SynthesisProfile prof;
    prof.seed = 61;
    prof.K = 6;
    const auto f = random_band_function(p, prof);
    prof.seed = 62;
    const auto g = random_band_function(p, prof);
    ConcentrationCube cube{2.0, 1};
    QuadratureSpec spec;
    spec.refinement_tol = 1e-9;
    const auto pts = draw_uniform(20000, cube, 444);

    const auto st = z_statistics(f, pts, cube, spec, &g);
    CHECK(std::fabs(st.mean) <= 4.0 * st.mean_standard_error);
    CHECK(st.empirical_var <= 4.0 / 3.0 + 3.0 * st.var_standard_error);
    CHECK(st.sup_abs <= 2.0);
    REQUIRE(st.lipschitz_lhs.has_value());
    REQUIRE(st.lipschitz_rhs.has_value());
    CHECK(*st.lipschitz_lhs <= *st.lipschitz_rhs);

    const auto same = z_statistics(f, pts, cube, spec, &f);
    CHECK(*same.lipschitz_lhs == 0.0);
    CHECK(*same.lipschitz_rhs == 0.0);
}

TEST_CASE("monte_carlo_experiment smoke and composition", "[sampling]") {
    ExperimentParams ep;
    ep.space = {1, {0.0}, 4.0};
    ep.cube = {std::exp(1.0), 1};
    ep.profile.K = 4;
    ep.profile.target_delta = 0.2;
    ep.profile.max_rejections = 16;
    ep.quad.refinement_tol = 1e-7;
    ep.mu = 0.5;
    ep.r = 200;
    ep.trials = 3;
    ep.seed = 12345;
    const auto rep = monte_carlo_experiment(ep);
    REQUIRE(rep.records.size() == 3);
    std::int64_t fails = 0;
    for (const auto& rec : rep.records) {
        CHECK(rec.delta <= 0.2);
        if (!rec.frame.pass_sharp) ++fails;
    }
    CHECK(fails == rep.failures_sharp);
    CHECK(rep.theoretical.vacuous);  // desk-scale r
    CHECK(rep.wilson_sharp.hi <= 1.0);
}

TEST_CASE("monte_carlo_experiment is deterministic and thread-invariant", "[sampling]") {
    ExperimentParams ep;
    ep.space = {1, {0.0}, 4.0};
    ep.cube = {std::exp(1.0), 1};
    ep.profile.K = 4;
    ep.quad.refinement_tol = 1e-7;
    ep.mu = 0.3;
    ep.r = 100;
    ep.trials = 8;
    ep.seed = 777;

    const auto a = monte_carlo_experiment(ep);
    const auto b = monte_carlo_experiment(ep);
    CHECK(to_csv(a) == to_csv(b));

    ExperimentParams ep4 = ep;
    ep4.threads = 4;
    const auto c = monte_carlo_experiment(ep4);
    CHECK(to_csv(a) == to_csv(c));
    CHECK(to_json(a).dump() == to_json(c).dump());
}

TEST_CASE("reuse_function keeps one function across trials", "[sampling]") {
    ExperimentParams ep;
    ep.space = {1, {0.0}, 2.0};
    ep.cube = {2.0, 1};
    ep.profile.K = 3;
    ep.quad.refinement_tol = 1e-7;
    ep.mu = 0.3;
    ep.r = 50;
    ep.trials = 4;
    ep.seed = 31337;
    ep.reuse_function = true;
    const auto rep = monte_carlo_experiment(ep);
    for (const auto& rec : rep.records) CHECK(rec.delta == rep.records[0].delta);
    // while the sampled points differ
    CHECK(rep.records[0].frame.empirical_weighted != rep.records[1].frame.empirical_weighted);
}
