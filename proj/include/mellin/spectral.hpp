#pragma once

// Numerical Mellin transform and inverse via the log-axis substitution
// x = e^u, band-limit verification, the Jackson / Fejer kernel gallery, and
// the reproducing-kernel integral.
//
// Every integral here is computed in log coordinates, where
//   M[f](c+it) = int f(e^u) e^{<c,u>} e^{i<t,u>} du
// and the integrand is smooth on a symmetric box.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mellin/core.hpp"
#include "mellin/errors.hpp"
#include "mellin/quadrature.hpp"

namespace mellin {

/// Sampled Mellin transform t -> M[f](c+it) on a uniform symmetric grid
/// [-t_max, t_max]^n, values in row-major grid order.
struct SpectralFunction {
    SpaceParams params;
    double t_max = 0.0;
    int points_per_axis = 0;
    std::vector<std::complex<double>> values;
    bool tail_warning = false;  // integrand endpoint probe exceeded tolerance
    int refinements = 0;

    double t_coord(int j) const {
        return -t_max + j * (2.0 * t_max / (points_per_axis - 1));
    }

    std::size_t size() const { return values.size(); }

    /// Grid point of a flat row-major index.
    std::vector<double> t_point(std::size_t flat) const {
        std::vector<double> t(static_cast<std::size_t>(params.n));
        for (int i = params.n - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] =
                t_coord(static_cast<int>(flat % static_cast<std::size_t>(points_per_axis)));
            flat /= static_cast<std::size_t>(points_per_axis);
        }
        return t;
    }
};

namespace detail {

// E[t][q] = exp(i t u_q) for one axis
inline std::vector<std::complex<double>> fourier_factors(const std::vector<double>& u,
                                                         double t_max, int m) {
    const std::size_t Q = u.size();
    std::vector<std::complex<double>> E(static_cast<std::size_t>(m) * Q);
    const double step = 2.0 * t_max / (m - 1);
    for (int t = 0; t < m; ++t) {
        const double tt = -t_max + t * step;
        for (std::size_t q = 0; q < Q; ++q)
            E[static_cast<std::size_t>(t) * Q + q] =
                std::complex<double>(std::cos(tt * u[q]), std::sin(tt * u[q]));
    }
    return E;
}

// g_w is the integrand WITHOUT the Fourier factor: f(e^u) e^{<c,u>} already folded in.
template <class G>
std::vector<std::complex<double>> transform_level(G&& g_w, const SpaceParams& params, double L,
                                                  double t_max, int m, int panels) {
    const quad::PanelNodes pn = quad::panel_nodes(-L, L, panels);
    const std::size_t Q = pn.u.size();
    const auto E = fourier_factors(pn.u, t_max, m);
    const std::size_t M = static_cast<std::size_t>(m);

    if (params.n == 1) {
        std::vector<std::complex<double>> s(Q);
        double u1[1];
        for (std::size_t q = 0; q < Q; ++q) {
            u1[0] = pn.u[q];
            s[q] = g_w(std::span<const double>(u1, 1)) * pn.w[q];
        }
        std::vector<std::complex<double>> v(M);
        for (std::size_t t = 0; t < M; ++t) {
            std::complex<double> acc{0.0, 0.0};
            const auto* row = &E[t * Q];
            for (std::size_t q = 0; q < Q; ++q) acc += s[q] * row[q];
            v[t] = acc;
        }
        return v;
    }
    if (params.n == 2) {
        // contract the inner axis on the fly; memory stays Q x m
        std::vector<std::complex<double>> c1(Q * M);
        std::vector<std::complex<double>> srow(Q);
        double u2[2];
        for (std::size_t q1 = 0; q1 < Q; ++q1) {
            u2[0] = pn.u[q1];
            const double w1 = pn.w[q1];
            for (std::size_t q2 = 0; q2 < Q; ++q2) {
                u2[1] = pn.u[q2];
                srow[q2] = g_w(std::span<const double>(u2, 2)) * (w1 * pn.w[q2]);
            }
            for (std::size_t t2 = 0; t2 < M; ++t2) {
                std::complex<double> acc{0.0, 0.0};
                const auto* row = &E[t2 * Q];
                for (std::size_t q2 = 0; q2 < Q; ++q2) acc += srow[q2] * row[q2];
                c1[q1 * M + t2] = acc;
            }
        }
        std::vector<std::complex<double>> v(M * M);
        for (std::size_t t1 = 0; t1 < M; ++t1) {
            const auto* row = &E[t1 * Q];
            for (std::size_t t2 = 0; t2 < M; ++t2) {
                std::complex<double> acc{0.0, 0.0};
                for (std::size_t q1 = 0; q1 < Q; ++q1) acc += c1[q1 * M + t2] * row[q1];
                v[t1 * M + t2] = acc;
            }
        }
        return v;
    }
    // n >= 3: materialized tensor contraction; desk-scale grids only
    std::size_t total = 1;
    for (int i = 0; i < params.n; ++i) {
        total *= Q;
        if (total > (std::size_t{1} << 27))
            throw OverflowError("mellin_transform: node tensor too large for n >= 3");
    }
    std::vector<std::complex<double>> cur(total);
    std::vector<std::size_t> idx(static_cast<std::size_t>(params.n), 0);
    std::vector<double> u(static_cast<std::size_t>(params.n));
    std::size_t flat = 0;
    while (true) {
        double w = 1.0;
        for (int i = 0; i < params.n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            u[ii] = pn.u[idx[ii]];
            w *= pn.w[idx[ii]];
        }
        cur[flat++] = g_w(std::span<const double>(u)) * w;
        int axis = params.n - 1;
        while (axis >= 0 && idx[static_cast<std::size_t>(axis)] + 1 == Q) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++idx[static_cast<std::size_t>(axis)];
    }
    for (int stepi = 0; stepi < params.n; ++stepi) {
        const std::size_t D = cur.size() / Q;
        std::vector<std::complex<double>> next(D * M);
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t t = 0; t < M; ++t) {
                std::complex<double> acc{0.0, 0.0};
                const auto* row = &E[t * Q];
                const auto* src = &cur[d * Q];
                for (std::size_t q = 0; q < Q; ++q) acc += src[q] * row[q];
                next[t * D + d] = acc;  // move the finished t-axis to the front
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace detail

/// Core transform engine for integrands already carrying the x^c weight:
/// g_w(u) = f(e^u) e^{<c,u>}.  Refines panels until two levels agree within
/// spec.refinement_tol in sup norm over the grid.  Integrating the weighted
/// form keeps wide windows finite where e^{<c,u>} alone would overflow.
template <class Gw>
SpectralFunction mellin_transform_log_weighted(Gw&& g_w, const SpaceParams& params,
                                               double t_max, int points_per_axis,
                                               const QuadratureSpec& spec) {
    params.validate();
    spec.validate();
    if (points_per_axis < 2)
        throw ParameterError("mellin_transform: points_per_axis must be >= 2");
    if (!(t_max > 0.0)) throw ParameterError("mellin_transform: t_max must be > 0");

    SpectralFunction out;
    out.params = params;
    out.t_max = t_max;
    out.points_per_axis = points_per_axis;

    const double L = spec.log_radius;
    // endpoint probe along each axis
    std::vector<double> probe(static_cast<std::size_t>(params.n), 0.0);
    for (int i = 0; i < params.n; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            std::fill(probe.begin(), probe.end(), 0.0);
            probe[static_cast<std::size_t>(i)] = sgn * L;
            if (std::abs(g_w(std::span<const double>(probe))) > spec.refinement_tol)
                out.tail_warning = true;
        }
    }

    int panels = spec.panel_count;
    auto prev = detail::transform_level(g_w, params, L, t_max, points_per_axis, panels);
    for (int level = 1; level <= spec.max_refinements; ++level) {
        panels *= 2;
        auto cur = detail::transform_level(g_w, params, L, t_max, points_per_axis, panels);
        double sup = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i)
            sup = std::max(sup, std::abs(cur[i] - prev[i]));
        if (sup < spec.refinement_tol) {
            out.values = std::move(cur);
            out.refinements = level;
            return out;
        }
        prev = std::move(cur);
    }
    throw QuadratureError("mellin_transform: refinement budget exhausted");
}

/// Mellin transform of g in log coordinates (g(u) = f(e^u)).
template <class G>
SpectralFunction mellin_transform_log(G&& g, const SpaceParams& params, double t_max,
                                      int points_per_axis, const QuadratureSpec& spec) {
    auto g_w = [&g, &params](std::span<const double> u) -> std::complex<double> {
        return std::complex<double>(g(u)) * std::exp(detail::dot(params.c, u));
    };
    return mellin_transform_log_weighted(g_w, params, t_max, points_per_axis, spec);
}

/// Mellin transform of a callable on R_+^n.  The window must stay inside the
/// representable range of e^u; wide-window integrands should come through the
/// log-coordinate entry points instead.
template <class F>
SpectralFunction mellin_transform(F&& f, const SpaceParams& params, double t_max,
                                  int points_per_axis, const QuadratureSpec& spec) {
    auto g = [&f](std::span<const double> u) -> std::complex<double> {
        std::vector<double> x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) x[i] = std::exp(u[i]);
        return std::complex<double>(f(std::span<const double>(x)));
    };
    return mellin_transform_log(g, params, t_max, points_per_axis, spec);
}

/// Mellin transform of a lattice function.  The integration window widens to
/// support_radius/T + 30/T if the supplied log_radius is smaller, and panels
/// are sized for the lattice band pi*T plus the grid's top frequency.
inline SpectralFunction mellin_transform(const LatticeFunction& f, double t_max,
                                         int points_per_axis, QuadratureSpec spec) {
    f.validate();
    const double L = std::max(spec.log_radius,
                              (static_cast<double>(f.support_radius()) + 30.0) / f.params.T);
    spec.log_radius = L;
    spec.panel_count = detail::panels_for(2.0 * L, kPi * f.params.T + t_max, spec.panel_count);
    auto g_w = [&f](std::span<const double> u) { return eval_series_log_xc(f, u); };
    return mellin_transform_log_weighted(g_w, f.params, t_max, points_per_axis, spec);
}

struct InverseMellinResult {
    std::complex<double> value{0.0, 0.0};
    bool edge_warning = false;  // spectral mass at the outermost grid layer
};

/// Inverse transform (2 pi)^{-n} int F(c+it) x^{-c-it} dt by the tensor
/// trapezoid rule over the stored grid.
inline InverseMellinResult inverse_mellin(const SpectralFunction& F, std::span<const double> x) {
    if (static_cast<int>(x.size()) != F.params.n)
        throw ParameterError("inverse_mellin: point dimension mismatch");
    const std::vector<double> u = log_point(x);
    const int n = F.params.n;
    const int m = F.points_per_axis;
    const double h = 2.0 * F.t_max / (m - 1);

    double vmax = 0.0, edge = 0.0;
    InverseMellinResult res;
    std::complex<double> acc{0.0, 0.0};
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::size_t flat = 0;
    while (true) {
        double w = 1.0;
        double phase = 0.0;
        bool on_edge = false;
        for (int i = 0; i < n; ++i) {
            const int j = idx[static_cast<std::size_t>(i)];
            w *= (j == 0 || j == m - 1) ? 0.5 * h : h;
            phase -= F.t_coord(j) * u[static_cast<std::size_t>(i)];
            on_edge = on_edge || j == 0 || j == m - 1;
        }
        const std::complex<double>& val = F.values[flat];
        const double mag = std::abs(val);
        vmax = std::max(vmax, mag);
        if (on_edge) edge = std::max(edge, mag);
        acc += val * w * std::complex<double>(std::cos(phase), std::sin(phase));
        ++flat;
        int axis = n - 1;
        while (axis >= 0 && idx[static_cast<std::size_t>(axis)] + 1 == m) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++idx[static_cast<std::size_t>(axis)];
    }
    const double xc = std::exp(-detail::dot(F.params.c, u));
    res.value = acc * (xc / std::pow(2.0 * kPi, n));
    res.edge_warning = edge > 1e-6 * vmax;
    return res;
}

namespace detail {

inline double shell_over_full(const SpectralFunction& S, double T_test) {
    double full = 0.0, shell = 0.0;
    for (std::size_t flat = 0; flat < S.size(); ++flat) {
        const double mag = std::abs(S.values[flat]);
        full = std::max(full, mag);
        const auto t = S.t_point(flat);
        double sup = 0.0;
        for (double ti : t) sup = std::max(sup, std::fabs(ti));
        if (sup > T_test * (1.0 + 1e-12)) shell = std::max(shell, mag);
    }
    return full > 0.0 ? shell / full : 0.0;
}

}  // namespace detail

inline constexpr int kBandProbePointsPerAxis = 257;  // 64 per coordinate per octave

/// Ratio of the peak |M[f](c+it)| over the shell T_test < ||t||_inf <= 2 T_test
/// to the peak over the whole probe grid.  Near zero certifies band-limitedness
/// to [-T_test, T_test]^n at quadrature resolution.
template <class F>
double bandlimit_residual(F&& f, const SpaceParams& params, double T_test,
                          QuadratureSpec spec) {
    if (!(T_test > 0.0)) throw ParameterError("bandlimit_residual: T_test must be > 0");
    spec.panel_count = detail::panels_for(2.0 * spec.log_radius,
                                          kPi * params.T + 2.0 * T_test, spec.panel_count);
    const SpectralFunction S =
        mellin_transform(std::forward<F>(f), params, 2.0 * T_test, kBandProbePointsPerAxis, spec);
    return detail::shell_over_full(S, T_test);
}

/// Residual from an x^c-weighted log-coordinate integrand (wide windows).
template <class Gw>
double bandlimit_residual_weighted(Gw&& g_w, const SpaceParams& params, double T_test,
                                   QuadratureSpec spec) {
    if (!(T_test > 0.0)) throw ParameterError("bandlimit_residual: T_test must be > 0");
    spec.panel_count = detail::panels_for(2.0 * spec.log_radius,
                                          kPi * params.T + 2.0 * T_test, spec.panel_count);
    const SpectralFunction S = mellin_transform_log_weighted(
        std::forward<Gw>(g_w), params, 2.0 * T_test, kBandProbePointsPerAxis, spec);
    return detail::shell_over_full(S, T_test);
}

inline constexpr double kBandlimitWindowSteps = 4000;  // lattice tails ring near the band edge

/// Band-limit residual of a lattice function; the window must be wide enough
/// that the slowly decaying sinc tails do not pollute the band edge.
inline double bandlimit_residual(const LatticeFunction& f, double T_test, QuadratureSpec spec,
                                 double window_steps = kBandlimitWindowSteps) {
    spec.log_radius = std::max(
        spec.log_radius, (static_cast<double>(f.support_radius()) + window_steps) / f.params.T);
    auto g_w = [&f](std::span<const double> u) { return eval_series_log_xc(f, u); };
    return bandlimit_residual_weighted(g_w, f.params, T_test, spec);
}

// ---------------------------------------------------------------------------
// Kernel gallery
// ---------------------------------------------------------------------------

namespace detail {

/// Two-sided tail  int_{|v| > L} sinc^{2k}(v) dv.
///
/// k = 1 uses the exact identity
///   int_X^inf sin^2(pi v)/(pi v)^2 dv = (1/pi) [ sin^2(Y)/Y + pi/2 - Si(2Y) ],
/// Y = pi X, with the asymptotic expansion of pi/2 - Si; k >= 2 uses the mean
/// value of sin^{2k} over a period (error far below the quadrature part).
inline double sinc_power_tail(int k, double L) {
    if (k == 1) {
        const double Y = kPi * L;
        const double y = 2.0 * Y;
        const double y2 = y * y;
        const double si_rem = std::cos(y) / y * (1.0 - 2.0 / y2 + 24.0 / (y2 * y2)) +
                              std::sin(y) / y2 * (1.0 - 6.0 / y2 + 120.0 / (y2 * y2));
        const double s = std::sin(Y);
        return 2.0 / kPi * (s * s / Y + si_rem);
    }
    double mean = 1.0;  // binom(2k,k)/4^k
    for (int j = 1; j <= k; ++j) mean *= (k + j) / (4.0 * j);
    return 2.0 * mean / (std::pow(kPi, 2 * k) * (2 * k - 1) * std::pow(L, 2 * k - 1));
}

/// Whole-line integral of sinc^{2k}, quadrature plus tail correction.
inline double sinc_power_integral(int k) {
    const double L = k == 1 ? 600.0 : 200.0;
    const int panels = static_cast<int>(L) * 2;
    const double body =
        2.0 * quad::integrate_panels([k](double v) { return std::pow(sinc1(v), 2 * k); }, 0.0,
                                     L, panels);
    return body + sinc_power_tail(k, L);
}

inline std::string cache_path_from_env() {
    const char* dir = std::getenv("MELLIN_SAMPLER_CACHE");
    if (dir == nullptr || *dir == '\0') return {};
    return std::string(dir) + "/jackson_constants.txt";
}

inline bool cache_lookup(const std::string& path, double alpha, int k, double* out) {
    std::FILE* fp = std::fopen(path.c_str(), "r");
    if (fp == nullptr) return false;
    char line[256];
    bool found = false;
    while (std::fgets(line, sizeof(line), fp) != nullptr) {
        char* end = nullptr;
        const double a = std::strtod(line, &end);
        const long kk = std::strtol(end, &end, 10);
        const double v = std::strtod(end, &end);
        if (a == alpha && kk == k) {
            *out = v;
            found = true;
        }
    }
    std::fclose(fp);
    return found;
}

inline void cache_store(const std::string& path, double alpha, int k, double value) {
    std::FILE* fp = std::fopen(path.c_str(), "a");
    if (fp == nullptr) return;  // cache is best-effort
    std::fprintf(fp, "%a %d %a\n", alpha, k, value);
    std::fclose(fp);
}

}  // namespace detail

/// Normalizing constant C_{alpha,k} of the Jackson kernel,
/// 1 / int_0^inf sinc^{2k}(log x / (2 alpha k pi)) dx/x, computed once per
/// (alpha, k) and cached (in memory, and on disk under MELLIN_SAMPLER_CACHE).
inline double jackson_constant(double alpha, int k) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, double> mem;
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_pair(alpha, k);
    if (auto it = mem.find(key); it != mem.end()) return it->second;

    const std::string cache = detail::cache_path_from_env();
    double value = 0.0;
    if (!cache.empty() && detail::cache_lookup(cache, alpha, k, &value)) {
        mem[key] = value;
        return value;
    }
    // substitution v = u/(2 alpha k pi) maps the mass integral to
    // 2 alpha k pi * int sinc^{2k}(v) dv
    value = 1.0 / (2.0 * alpha * k * kPi * detail::sinc_power_integral(k));
    mem[key] = value;
    if (!cache.empty()) detail::cache_store(cache, alpha, k, value);
    return value;
}

/// Mellin Jackson kernel J_{alpha,k}(x) = C_{alpha,k} x^{-c} sinc^{2k}(log x/(2 alpha k pi)),
/// Mellin band-limited to [-1/alpha, 1/alpha].
struct JacksonKernel {
    double alpha;
    int k;
    double c;
    double constant;

    double operator()(double x) const {
        if (!(x > 0.0)) throw DomainError("JacksonKernel: x must be positive");
        return std::exp(-c * std::log(x)) * log_profile(std::log(x));
    }

    double operator()(std::span<const double> x) const { return (*this)(x[0]); }

    /// x^c J(x) at x = e^u; the weighted form used on wide log windows.
    double log_profile(double u) const {
        return constant * std::pow(sinc1(u / (2.0 * alpha * k * kPi)), 2 * k);
    }
};

inline JacksonKernel jackson_kernel(double alpha, int k, double c) {
    if (!(alpha >= 1.0)) throw ParameterError("jackson_kernel: alpha must be >= 1");
    if (k < 1) throw ParameterError("jackson_kernel: k must be >= 1");
    return JacksonKernel{alpha, k, c, jackson_constant(alpha, k)};
}

/// Mellin Fejer kernel F_rho^c(x) = (rho/2pi) x^{-c} sinc^2(rho log sqrt(x) / pi),
/// band-limited to [-rho, rho] with unit Mellin mass.
struct FejerKernel {
    double rho;
    double c;

    double operator()(double x) const {
        if (!(x > 0.0)) throw DomainError("FejerKernel: x must be positive");
        return std::exp(-c * std::log(x)) * log_profile(std::log(x));
    }

    double operator()(std::span<const double> x) const { return (*this)(x[0]); }

    /// x^c F(x) at x = e^u.
    double log_profile(double u) const {
        const double s = sinc1(rho * u / (2.0 * kPi));
        return rho / (2.0 * kPi) * s * s;
    }
};

inline FejerKernel fejer_kernel(double rho, double c) {
    if (!(rho > 0.0)) throw ParameterError("fejer_kernel: rho must be > 0");
    return FejerKernel{rho, c};
}

inline constexpr double kReproduceWindowSteps = 4000;  // sinc-pair tails decay like 1/W

/// Reproducing-kernel integral  T^n int f(y) lin_{c/T}((x/y)^T) y^{-1} dy
/// over a window covering the support of f plus a margin; for functions in
/// the lattice span this reproduces eval_series(f, x).
inline std::complex<double> reproduce_integral(const LatticeFunction& f,
                                               std::span<const double> x,
                                               const QuadratureSpec& spec,
                                               double window_steps = kReproduceWindowSteps) {
    f.validate();
    const std::vector<double> ux = log_point(x);
    const SpaceParams& p = f.params;
    const double W = (static_cast<double>(f.support_radius()) + window_steps) / p.T;
    std::vector<double> lo(static_cast<std::size_t>(p.n), -W);
    std::vector<double> hi(static_cast<std::size_t>(p.n), W);

    // f(e^v) e^{<c,v>} sinc_nd(T(log x - v)): the e^{<c,v>} weight is folded
    // into the series so the wide window never overflows
    auto integrand = [&](std::span<const double> v) -> std::complex<double> {
        double s = 1.0;
        for (int i = 0; i < p.n; ++i)
            s *= sinc1(p.T * (ux[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]));
        return eval_series_log_xc(f, v) * s;
    };

    QuadratureSpec box = spec;
    box.panel_count = detail::panels_for(2.0 * W, 2.0 * kPi * p.T, spec.panel_count);
    auto r = quad::integrate_box_refined(integrand, lo, hi, box);
    if (!r.converged) throw QuadratureError("reproduce_integral: refinement budget exhausted");
    return r.value * std::pow(p.T, p.n) * std::exp(-detail::dot(p.c, ux));
}

}  // namespace mellin
