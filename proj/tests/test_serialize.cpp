#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "mellin/serialize.hpp"

using namespace mellin;

TEST_CASE("lattice function JSON round trip is value exact", "[serialize]") {
    SpaceParams p{2, {0.123456789012345678, -1.75}, 3.0};
    SynthesisProfile prof;
    prof.seed = 2024;
    prof.K = 3;
    LatticeFunction f;
    f.params = p;
    // raw gaussian doubles, no rounding anywhere
    std::uint64_t i = 0;
    for (const auto& k : index_box(2, 3)) {
        const auto g = rng::gaussian_pair(99, 1, i++, 0, 0);
        f.coeffs[k] = std::complex<double>(g.z0 * 1e-7, g.z1 * 1e12);
    }
    const std::string text = to_json(f).dump(2);
    const auto back = lattice_function_from_json(json::parse(text));
    REQUIRE(back.coeffs.size() == f.coeffs.size());
    CHECK(back.params.c == f.params.c);
    CHECK(back.params.T == f.params.T);
    auto it = f.coeffs.begin();
    for (const auto& [k, v] : back.coeffs) {
        CHECK(k == it->first);
        CHECK(v.real() == it->second.real());
        CHECK(v.imag() == it->second.imag());
        ++it;
    }
    // a second dump is byte-identical
    CHECK(to_json(back).dump(2) == text);
}

TEST_CASE("coefficients serialize in lexicographic key order", "[serialize]") {
    LatticeFunction f;
    f.params = {1, {0.0}, 1.0};
    f.coeffs[{3}] = 1.0;
    f.coeffs[{-5}] = 2.0;
    f.coeffs[{0}] = 3.0;
    const json j = to_json(f);
    REQUIRE(j.at("coeffs").size() == 3);
    CHECK(j.at("coeffs")[0].at("k")[0].get<int>() == -5);
    CHECK(j.at("coeffs")[1].at("k")[0].get<int>() == 0);
    CHECK(j.at("coeffs")[2].at("k")[0].get<int>() == 3);
}

TEST_CASE("lattice function parsing rejects malformed input", "[serialize]") {
    const auto good = json::parse(R"({"n":1,"c":[0.0],"T":1.0,
        "coeffs":[{"k":[0],"re":1.0,"im":0.0}]})");
    CHECK_NOTHROW(lattice_function_from_json(good));

    auto bad = good;
    bad["extra"] = 1;
    CHECK_THROWS_AS(lattice_function_from_json(bad), SerializationError);

    bad = good;
    bad["coeffs"][0]["k"] = json::array({0, 0});  // key length != n
    CHECK_THROWS_AS(lattice_function_from_json(bad), ParameterError);

    bad = good;
    bad["coeffs"].push_back(bad["coeffs"][0]);  // duplicate key
    CHECK_THROWS_AS(lattice_function_from_json(bad), SerializationError);

    bad = good;
    bad.erase("T");
    CHECK_THROWS_AS(lattice_function_from_json(bad), SerializationError);

    CHECK_THROWS_AS(lattice_function_from_json(json::parse("[1,2]")), SerializationError);
}

TEST_CASE("spectral function JSON carries the spec fields", "[serialize]") {
    SpectralFunction s;
    s.params = {1, {0.0}, 1.0};
    s.t_max = 2.0;
    s.points_per_axis = 3;
    s.values = {{1.0, 0.0}, {0.5, -0.5}, {0.0, 0.25}};
    const json j = to_json(s);
    REQUIRE(j.size() == 3);
    CHECK(j.at("t_max") == 2.0);
    CHECK(j.at("points_per_axis") == 3);
    REQUIRE(j.at("values").size() == 3);
    CHECK(j.at("values")[1][0] == 0.5);
    CHECK(j.at("values")[1][1] == -0.5);
}

TEST_CASE("concentration report JSON", "[serialize]") {
    ConcentrationReport rep{0.9, 1.0, 0.1};
    ConcentrationCube cube{2.5, 1};
    QuadratureSpec spec;
    const json j = to_json(rep, cube, spec);
    CHECK(j.at("cube_energy") == 0.9);
    CHECK(j.at("total_norm_sq") == 1.0);
    CHECK(j.at("delta") == 0.1);
    CHECK(j.at("R") == 2.5);
    CHECK(j.at("quad").at("panel_count") == spec.panel_count);
}

TEST_CASE("monte carlo CSV has the fixed column set", "[serialize]") {
    ExperimentParams ep;
    ep.space = {1, {0.0}, 2.0};
    ep.cube = {2.0, 1};
    ep.profile.K = 2;
    ep.quad.refinement_tol = 1e-7;
    ep.mu = 0.4;
    ep.r = 20;
    ep.trials = 2;
    ep.seed = 5;
    const auto rep = monte_carlo_experiment(ep);
    const std::string csv = to_csv(rep);
    CHECK(csv.rfind("trial,seed,delta,empirical_weighted,lower_paper,upper_paper,"
                    "lower_sharp,upper_sharp,pass_paper,pass_sharp\n", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 3);  // header + one row per trial

    const json j = to_json(rep);
    CHECK(j.at("per_trial").size() == 2);
    CHECK(j.at("variant") == "paper");
    CHECK(j.at("theoretical_bound").contains("vacuous"));
}

TEST_CASE("fmt17 round-trips doubles", "[serialize]") {
    for (double v : {1.0, -0.333333333333333315, 1e-300, 8.9e307, 0.1, 123456789.123456789}) {
        const std::string s = fmt17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("variant names round trip", "[serialize]") {
    CHECK(variant_from_name(variant_name(Variant::paper)) == Variant::paper);
    CHECK(variant_from_name(variant_name(Variant::corrected)) == Variant::corrected);
    CHECK_THROWS_AS(variant_from_name("bogus"), ConfigError);
}
