#pragma once

// Closed-form evaluators for the covering / concentration machinery: the
// dimension bound d_eps, covering numbers, the Bernstein tail, the sampling
// failure bound, its two constants alpha and beta, and minimal sample sizes.
// Probability bounds are kept in log space; beta alone overflows a double for
// small mu.

#include <cmath>
#include <cstdint>
#include <limits>

#include "mellin/core.hpp"
#include "mellin/errors.hpp"

namespace mellin {

/// The printed formulas contain 2^{n(n/2+2)} where targeting error eps/2 in
/// the finite-dimensional approximation actually forces 2^{2/n+2} per factor,
/// i.e. 2^{2n+2} after raising to the n-th power.  Both are evaluated; they
/// coincide at n = 2.
enum class Variant { paper, corrected };

/// Bernstein tail 2 exp(-lambda^2 / (2 r sigma^2 + (2/3) M lambda)) for sums
/// of r bounded, centered, independent variables.  Values >= 1 are vacuous.
inline double bernstein_tail(double lambda, std::int64_t r, double sigma_sq, double M) {
    if (!(lambda > 0.0)) throw ParameterError("bernstein_tail: lambda must be > 0");
    if (r < 1) throw ParameterError("bernstein_tail: r must be >= 1");
    if (sigma_sq < 0.0) throw ParameterError("bernstein_tail: sigma_sq must be >= 0");
    if (!(M > 0.0)) throw ParameterError("bernstein_tail: M must be > 0");
    return 2.0 * std::exp(-lambda * lambda /
                          (2.0 * static_cast<double>(r) * sigma_sq + 2.0 / 3.0 * M * lambda));
}

namespace detail {

inline double variant_power_of_two(int n, Variant v) {
    return v == Variant::paper ? std::pow(2.0, n * (0.5 * n + 2.0))
                               : std::pow(2.0, 2.0 * n + 2.0);
}

}  // namespace detail

/// Dimension bound d_eps = 2^n [ T^n 2^* pi^{-2n} eps^{-2} + (2T log R + 1)^n ].
inline double dimension_bound(double epsilon, double T, double R, int n, Variant variant) {
    if (!(epsilon > 0.0)) throw ParameterError("dimension_bound: epsilon must be > 0");
    if (!(T > 0.0) || !(R > 1.0) || n < 1)
        throw ParameterError("dimension_bound: need T > 0, R > 1, n >= 1");
    const double lead = std::pow(T, n) * detail::variant_power_of_two(n, variant) *
                        std::pow(kPi, -2.0 * n) / (epsilon * epsilon);
    return std::pow(2.0, n) * (lead + std::pow(2.0 * T * std::log(R) + 1.0, n));
}

/// log of the covering-number bound exp(d_eps log(16/eps)); zero for eps >= 16.
inline double covering_log_bound(double epsilon, double T, double R, int n, Variant variant) {
    if (!(epsilon > 0.0)) throw ParameterError("covering_log_bound: epsilon must be > 0");
    if (epsilon >= 16.0) return 0.0;
    return dimension_bound(epsilon, T, R, n, variant) * std::log(16.0 / epsilon);
}

/// A probability bound kept in log space with presentation values: raw exp
/// (inf on overflow), the value capped at 2, and the clamp to [0, 1].
struct FailureBound {
    double log_value = 0.0;
    double raw = 0.0;
    double capped = 0.0;   // min(raw, 2)
    double clamped = 0.0;  // min(raw, 1)
    bool vacuous = false;  // raw >= 1
};

namespace detail {

inline FailureBound failure_from_log(double log_value) {
    FailureBound b;
    b.log_value = log_value;
    b.raw = log_value > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(log_value);
    b.capped = std::min(b.raw, 2.0);
    b.clamped = std::min(b.raw, 1.0);
    b.vacuous = b.raw >= 1.0;
    return b;
}

}  // namespace detail

/// Failure bound for the supremum deviation of the Z-averages:
///   2 exp[ 2^n (16 T^n pi^{-2n} R^{2n} 2^* / eps^2 + (2T log R + 1)^n) log(64 R^n / eps)
///          - 3 r eps^2 (R^2-1)^n / (4 R^n (6 R^n + eps (R^2-1)^n)) ].
inline FailureBound prob_est_failure_bound(double epsilon, std::int64_t r, double T, double R,
                                           int n, Variant variant) {
    if (!(epsilon > 0.0)) throw ParameterError("prob_est_failure_bound: epsilon must be > 0");
    if (r < 1) throw ParameterError("prob_est_failure_bound: r must be >= 1");
    const double Rn = std::pow(R, n);
    const double vol = std::pow(R * R - 1.0, n);
    const double covering =
        std::pow(2.0, n) *
        (16.0 * std::pow(T, n) * std::pow(kPi, -2.0 * n) * Rn * Rn *
             detail::variant_power_of_two(n, variant) / (epsilon * epsilon) +
         std::pow(2.0 * T * std::log(R) + 1.0, n)) *
        std::log(64.0 * Rn / epsilon);
    const double coeff =
        3.0 * epsilon * epsilon * vol / (4.0 * Rn * (6.0 * Rn + epsilon * vol));
    return detail::failure_from_log(std::log(2.0) + covering - static_cast<double>(r) * coeff);
}

struct MainConstants {
    double alpha = 0.0;
    double log_beta = 0.0;
};

/// The sampling-inequality constants:
///   alpha = 3 mu^2 / (4 (R^2-1)^n (6 + mu)),
///   log beta = 2^n (16 T^n pi^{-2n} (R^2-1)^{2n} 2^* / mu^2 + (2T log R + 1)^n)
///              log(64 (R^2-1)^n / mu).
inline MainConstants main_theorem_constants(double mu, double T, double R, int n,
                                            Variant variant) {
    if (!(mu > 0.0)) throw ParameterError("main_theorem_constants: mu must be > 0");
    if (!(T > 0.0) || !(R > 1.0) || n < 1)
        throw ParameterError("main_theorem_constants: need T > 0, R > 1, n >= 1");
    const double vol = std::pow(R * R - 1.0, n);
    MainConstants out;
    out.alpha = 3.0 * mu * mu / (4.0 * vol * (6.0 + mu));
    out.log_beta = std::pow(2.0, n) *
                   (16.0 * std::pow(T, n) * std::pow(kPi, -2.0 * n) * vol * vol *
                        detail::variant_power_of_two(n, variant) / (mu * mu) +
                    std::pow(2.0 * T * std::log(R) + 1.0, n)) *
                   std::log(64.0 * vol / mu);
    return out;
}

/// Failure probability bound 2 beta exp(-r alpha) of the sampling inequality.
inline FailureBound sampling_failure_bound(double mu, double T, double R, int n, std::int64_t r,
                                           Variant variant) {
    const MainConstants mc = main_theorem_constants(mu, T, R, n, variant);
    return detail::failure_from_log(std::log(2.0) + mc.log_beta -
                                    static_cast<double>(r) * mc.alpha);
}

struct MinSamples {
    std::int64_t min_r = 0;     // least r with 2 exp(log beta - r alpha) <= target
    std::int64_t remark_r = 0;  // the cruder threshold ceil(log beta / alpha) + 1
};

/// Least sample count making the failure bound meet target_failure.
inline MinSamples min_samples(double mu, double T, double R, int n, double target_failure,
                              Variant variant) {
    if (!(target_failure > 0.0 && target_failure < 1.0))
        throw ParameterError("min_samples: target_failure must lie in (0,1)");
    const MainConstants mc = main_theorem_constants(mu, T, R, n, variant);
    const double need = (mc.log_beta + std::log(2.0 / target_failure)) / mc.alpha;
    if (!std::isfinite(need) || need > 9.0e17)
        throw OverflowError("min_samples: required r overflows");
    MinSamples out;
    out.min_r = static_cast<std::int64_t>(std::ceil(need));
    out.remark_r = static_cast<std::int64_t>(std::ceil(mc.log_beta / mc.alpha)) + 1;
    return out;
}

}  // namespace mellin
