#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "mellin/quadrature.hpp"

using namespace mellin;

TEST_CASE("Gauss rule integrates polynomials exactly", "[quadrature]") {
    auto v = quad::integrate_panels([](double x) { return std::pow(x, 5.0); }, 0.0, 1.0, 1);
    CHECK(std::fabs(v - 1.0 / 6.0) < 1e-15);
    v = quad::integrate_panels([](double x) { return std::pow(x, 15.0); }, 0.0, 1.0, 1);
    CHECK(std::fabs(v - 1.0 / 16.0) < 1e-14);  // degree 15 = 2*8 - 1, still exact
}

TEST_CASE("Gauss rule weights and nodes", "[quadrature]") {
    const auto& g = quad::gauss_rule(8);
    double wsum = 0.0;
    for (double w : g.weight) wsum += w;
    CHECK(std::fabs(wsum - 2.0) < 1e-14);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::fabs(g.node[i] + g.node[7 - i]) < 1e-15);
}

TEST_CASE("refinement converges on a smooth integrand", "[quadrature]") {
    QuadratureSpec spec;
    spec.panel_count = 2;
    spec.refinement_tol = 1e-12;
    const auto r = quad::integrate_refined([](double x) { return std::exp(x); }, -1.0, 1.0, spec);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - (std::exp(1.0) - std::exp(-1.0))) < 1e-12);
}

TEST_CASE("refinement reports non-convergence", "[quadrature]") {
    QuadratureSpec spec;
    spec.panel_count = 1;
    spec.refinement_tol = 1e-16;
    spec.max_refinements = 2;
    // slowly converging endpoint singularity derivative
    const auto r =
        quad::integrate_refined([](double x) { return std::sqrt(std::fabs(x)); }, 0.0, 1.0, spec);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(quad::integrate_refined_or_throw(
                        [](double x) { return std::sqrt(std::fabs(x)); }, 0.0, 1.0, spec, "t"),
                    QuadratureError);
}

TEST_CASE("box integration in two dimensions", "[quadrature]") {
    const std::vector<double> lo = {0.0, 0.0}, hi = {1.0, 1.0};
    const double v = quad::integrate_box(
        [](std::span<const double> u) { return u[0] * u[1]; }, lo, hi, 2);
    CHECK(std::fabs(v - 0.25) < 1e-14);

    QuadratureSpec spec;
    spec.panel_count = 2;
    spec.refinement_tol = 1e-11;
    const auto r = quad::integrate_box_refined(
        [](std::span<const double> u) { return std::exp(u[0] + u[1]); }, lo, hi, spec);
    CHECK(r.converged);
    const double e1 = std::exp(1.0) - 1.0;
    CHECK(std::fabs(r.value - e1 * e1) < 1e-10);
}

TEST_CASE("complex integrands accumulate componentwise", "[quadrature]") {
    QuadratureSpec spec;
    spec.panel_count = 4;
    spec.refinement_tol = 1e-12;
    const auto r = quad::integrate_refined(
        [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); }, 0.0, kPi / 2,
        spec);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::complex<double>(1.0, 1.0)) < 1e-12);
}

TEST_CASE("doubling the panel count moves a converged value less than tol", "[quadrature]") {
    QuadratureSpec spec;
    spec.panel_count = 8;
    spec.refinement_tol = 1e-10;
    auto f = [](double x) { return 1.0 / (1.0 + x * x); };
    const auto r = quad::integrate_refined(f, -3.0, 3.0, spec);
    REQUIRE(r.converged);
    const int converged_panels = spec.panel_count << r.refinements;
    const double again = quad::integrate_panels(f, -3.0, 3.0, 2 * converged_panels);
    CHECK(std::fabs(again - r.value) < spec.refinement_tol);
}

TEST_CASE("quadrature spec validation", "[quadrature]") {
    QuadratureSpec bad;
    bad.panel_count = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = {};
    bad.refinement_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}
