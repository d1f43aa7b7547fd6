// Command-line front end: synthesis of concentrated band-limited functions,
// verification of the sampling-theory invariants, Monte Carlo sampling
// experiments, and closed-form bound tables.  Every run is reproducible from
// its config file; outputs are byte-identical across reruns and thread counts.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mellin/cli_config.hpp"
#include "mellin/mellin.hpp"
#include "mellin/verify.hpp"

namespace fs = std::filesystem;
using mellin::json;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::optional<std::string> variant;
};

std::string resolve_out(const GlobalFlags& flags, const std::string& name) {
    fs::create_directories(flags.out_dir);
    return (fs::path(flags.out_dir) / name).string();
}

int cmd_synth(const GlobalFlags& flags) {
    auto cfg = mellin::cli::parse_synth_config(mellin::cli::load_config_file(flags.config_path));
    if (flags.seed) cfg.profile.seed = *flags.seed;
    if (!cfg.cube) throw mellin::ConfigError("config: synth requires a cube");

    const auto outcome = mellin::synthesize(cfg.space, cfg.profile, cfg.cube, cfg.quad);
    const auto& rep = *outcome.report;
    mellin::write_text_file(resolve_out(flags, cfg.out_function),
                            mellin::to_json(outcome.function).dump(2) + "\n");
    mellin::write_text_file(resolve_out(flags, cfg.out_report),
                            mellin::to_json(rep, *cfg.cube, cfg.quad).dump(2) + "\n");
    std::printf("delta=%.6g norm=%.12g support=%zu attempts=%d\n", rep.delta,
                mellin::norm_parseval(outcome.function), outcome.function.coeffs.size(),
                outcome.attempts);
    return 0;
}

int cmd_verify(const GlobalFlags& flags) {
    const auto cfg =
        mellin::cli::parse_verify_config(mellin::cli::load_config_file(flags.config_path));
    const auto f = mellin::lattice_function_from_json(
        mellin::parse_json_file(cfg.function_path));
    mellin::ConcentrationCube cube{cfg.cube.R, f.params.n};
    cube.validate();
    const auto checks = mellin::run_verification(f, cube, cfg.quad);

    json jchecks = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("[%s] %s%s%s\n", c.pass ? (c.skipped ? "SKIP" : "PASS") : "FAIL",
                    c.name.c_str(), c.detail.empty() ? "" : ": ",
                    c.detail.c_str());
        all_pass = all_pass && c.pass;
        jchecks.push_back(json{{"name", c.name},
                               {"pass", c.pass},
                               {"skipped", c.skipped},
                               {"detail", c.detail}});
    }
    mellin::write_text_file(
        resolve_out(flags, cfg.out_report),
        json{{"pass", all_pass}, {"checks", jchecks}}.dump(2) + "\n");
    return all_pass ? 0 : 3;
}

int cmd_experiment(const GlobalFlags& flags) {
    auto cfg =
        mellin::cli::parse_experiment_config(mellin::cli::load_config_file(flags.config_path));
    if (flags.seed) cfg.params.seed = *flags.seed;
    if (flags.variant) {
        if (*flags.variant == "both")
            throw mellin::ConfigError("experiment runs one variant; pass paper or corrected");
        cfg.params.variant = mellin::variant_from_name(*flags.variant);
    }
    cfg.params.threads = flags.threads;

    const auto report = mellin::monte_carlo_experiment(cfg.params);
    mellin::write_text_file(resolve_out(flags, cfg.out_json),
                            mellin::to_json(report).dump(2) + "\n");
    mellin::write_text_file(resolve_out(flags, cfg.out_csv), mellin::to_csv(report));

    const double rate_sharp =
        static_cast<double>(report.failures_sharp) / report.params.trials;
    const double rate_paper =
        static_cast<double>(report.failures_paper) / report.params.trials;
    std::printf("trials=%d r=%" PRId64 " mu=%.6g\n", report.params.trials, report.params.r,
                report.params.mu);
    std::printf("failure_rate_paper=%.6g wilson=[%.6g, %.6g]\n", rate_paper,
                report.wilson_paper.lo, report.wilson_paper.hi);
    std::printf("failure_rate_sharp=%.6g wilson=[%.6g, %.6g]\n", rate_sharp,
                report.wilson_sharp.lo, report.wilson_sharp.hi);
    std::printf("theoretical_bound_log=%.6g clamped=%.6g%s\n", report.theoretical.log_value,
                report.theoretical.clamped, report.theoretical.vacuous ? " (vacuous)" : "");
    return 0;
}

int cmd_bounds(const GlobalFlags& flags) {
    auto cfg =
        mellin::cli::parse_bounds_config(mellin::cli::load_config_file(flags.config_path));
    if (flags.variant) cfg.variant_mode = *flags.variant;
    std::vector<mellin::Variant> variants;
    if (cfg.variant_mode == "paper" || cfg.variant_mode == "both")
        variants.push_back(mellin::Variant::paper);
    if (cfg.variant_mode == "corrected" || cfg.variant_mode == "both")
        variants.push_back(mellin::Variant::corrected);

    std::string csv =
        "variant,n,T,R,mu,epsilon,r,target_failure,d_eps,log_covering,bernstein,"
        "prob_est_log,prob_est_clamped,alpha,log_beta,failure_log,failure_raw,"
        "failure_clamped,vacuous,min_r,remark_r\n";
    int rows = 0;
    for (const auto variant : variants)
        for (const int n : cfg.n_grid)
            for (const double T : cfg.T_grid)
                for (const double R : cfg.R_grid)
                    for (const double mu : cfg.mu_grid)
                        for (const std::int64_t r : cfg.r_grid)
                            for (const double target : cfg.target_grid) {
                                const std::vector<double> eps_list =
                                    cfg.epsilon_grid.empty()
                                        ? std::vector<double>{mu * std::pow(R, n) /
                                                              std::pow(R * R - 1.0, n)}
                                        : cfg.epsilon_grid;
                                for (const double eps : eps_list) {
                                    using mellin::fmt17;
                                    const double d =
                                        mellin::dimension_bound(eps, T, R, n, variant);
                                    const double cov =
                                        mellin::covering_log_bound(eps, T, R, n, variant);
                                    // Bernstein at the proof's instantiation for r draws
                                    const double sigma_sq =
                                        std::pow(R, 2 * n) / std::pow(R * R - 1.0, n);
                                    const double bern = mellin::bernstein_tail(
                                        static_cast<double>(r) * eps / 2.0, r, sigma_sq,
                                        std::pow(R, n));
                                    const auto pe = mellin::prob_est_failure_bound(
                                        eps, r, T, R, n, variant);
                                    const auto mc =
                                        mellin::main_theorem_constants(mu, T, R, n, variant);
                                    const auto fb = mellin::sampling_failure_bound(
                                        mu, T, R, n, r, variant);
                                    const auto ms =
                                        mellin::min_samples(mu, T, R, n, target, variant);
                                    csv += mellin::variant_name(variant) + "," +
                                           std::to_string(n) + "," + fmt17(T) + "," + fmt17(R) +
                                           "," + fmt17(mu) + "," + fmt17(eps) + "," +
                                           std::to_string(r) + "," + fmt17(target) + "," +
                                           fmt17(d) + "," + fmt17(cov) + "," + fmt17(bern) +
                                           "," + fmt17(pe.log_value) + "," + fmt17(pe.clamped) +
                                           "," + fmt17(mc.alpha) + "," + fmt17(mc.log_beta) +
                                           "," + fmt17(fb.log_value) + "," + fmt17(fb.raw) +
                                           "," + fmt17(fb.clamped) + "," +
                                           (fb.vacuous ? "1" : "0") + "," +
                                           std::to_string(ms.min_r) + "," +
                                           std::to_string(ms.remark_r) + "\n";
                                    ++rows;
                                }
                            }
    mellin::write_text_file(resolve_out(flags, cfg.out_csv), csv);
    std::printf("wrote %d rows\n", rows);
    return 0;
}

void print_error_json(const std::string& code, const std::string& message) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", json{{"code", code}, {"message", message}}}}.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential sampling and random sampling inequalities for "
                 "Mellin band-limited functions"};
    app.require_subcommand(1);

    GlobalFlags flags;
    std::uint64_t seed_value = 0;
    std::string variant_value;

    auto add_common = [&](CLI::App* sub, bool with_seed, bool with_variant,
                          bool with_threads) {
        sub->add_option("--config", flags.config_path, "path to the run config (JSON)")
            ->required();
        sub->add_option("--out", flags.out_dir, "output directory (default: .)");
        if (with_seed)
            sub->add_option("--seed", seed_value, "override the config seed")
                ->each([&](const std::string&) { flags.seed = seed_value; });
        if (with_variant)
            sub->add_option("--variant", variant_value, "paper, corrected, or both")
                ->each([&](const std::string&) { flags.variant = variant_value; });
        if (with_threads)
            sub->add_option("--threads", flags.threads,
                            "worker threads (affects speed only, never results)");
    };

    CLI::App* synth = app.add_subcommand("synth", "draw a concentrated band-limited function");
    add_common(synth, true, false, false);
    CLI::App* verify = app.add_subcommand("verify", "run invariant checks on a function file");
    add_common(verify, false, false, false);
    CLI::App* experiment =
        app.add_subcommand("experiment", "Monte Carlo sampling-inequality experiment");
    add_common(experiment, true, true, true);
    CLI::App* bounds = app.add_subcommand("bounds", "tabulate the closed-form bounds");
    add_common(bounds, false, true, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(flags);
        if (verify->parsed()) return cmd_verify(flags);
        if (experiment->parsed()) return cmd_experiment(flags);
        if (bounds->parsed()) return cmd_bounds(flags);
    } catch (const mellin::Error& e) {
        print_error_json(e.code(), e.what());
        const std::string& c = e.code();
        return (c == "config-invalid" || c == "parse" || c == "parameter") ? 2 : 1;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return 1;
    }
    return 0;
}
