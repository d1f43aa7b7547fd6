#pragma once

// Multi-index conventions, the sinc / lin kernels, and lattice-coefficient
// representation of band-limited functions with series evaluation on the
// exponential lattice e^{k/T}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mellin/errors.hpp"

namespace mellin {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Ambient dimension n, Mellin weight vector c, and band parameter T.
/// The sampling lattice has step 1/T per coordinate in log space.
struct SpaceParams {
    int n = 1;
    std::vector<double> c;
    double T = 1.0;

    void validate() const {
        if (n < 1) throw ParameterError("SpaceParams: n must be >= 1");
        if (!(T > 0.0) || !std::isfinite(T))
            throw ParameterError("SpaceParams: T must be positive and finite");
        if (static_cast<int>(c.size()) != n)
            throw ParameterError("SpaceParams: c must have length n");
        for (double ci : c)
            if (!std::isfinite(ci)) throw ParameterError("SpaceParams: c must be finite");
    }
};

using MultiIndex = std::vector<std::int64_t>;

inline std::int64_t sup_norm(const MultiIndex& k) {
    std::int64_t m = 0;
    for (auto ki : k) m = std::max(m, ki < 0 ? -ki : ki);
    return m;
}

/// All integer vectors in [-h, h]^n, lexicographic order.
inline std::vector<MultiIndex> index_box(int n, std::int64_t h) {
    std::vector<MultiIndex> out;
    const std::int64_t side = 2 * h + 1;
    double card = 1.0;
    for (int i = 0; i < n; ++i) card *= static_cast<double>(side);
    out.reserve(static_cast<std::size_t>(card));
    MultiIndex k(static_cast<std::size_t>(n), -h);
    while (true) {
        out.push_back(k);
        int axis = n - 1;
        while (axis >= 0 && k[static_cast<std::size_t>(axis)] == h) {
            k[static_cast<std::size_t>(axis)] = -h;
            --axis;
        }
        if (axis < 0) break;
        ++k[static_cast<std::size_t>(axis)];
    }
    return out;
}

/// Finite coefficient map k -> f(e^{k/T}).  An empty map is the zero function.
struct LatticeFunction {
    SpaceParams params;
    std::map<MultiIndex, std::complex<double>> coeffs;  // lexicographic by key

    void validate() const {
        params.validate();
        for (const auto& [k, v] : coeffs) {
            if (static_cast<int>(k.size()) != params.n)
                throw ParameterError("LatticeFunction: key length must equal n");
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ParameterError("LatticeFunction: coefficients must be finite");
        }
    }

    /// Largest sup-norm of any key (0 for the zero function).
    std::int64_t support_radius() const {
        std::int64_t r = 0;
        for (const auto& [k, v] : coeffs) r = std::max(r, sup_norm(k));
        return r;
    }
};

/// sin(pi z)/(pi z) with exact zeros at nonzero integers.
///
/// The argument is reduced to its nearest integer m and remainder eta = z - m
/// (exact in floating point), so sin(pi z) = (-1)^m sin(pi eta) never suffers
/// the catastrophic error of evaluating sin at a large inexact multiple of pi.
/// Near the origin a Taylor guard covers the removable singularity.
inline double sinc1(double z) {
    const double pz = kPi * z;
    if (std::fabs(pz) < 1e-4) return 1.0 - pz * pz / 6.0;
    const double m = std::nearbyint(z);
    const double eta = z - m;
    double s = std::sin(kPi * eta);
    if (std::fabs(std::fmod(m, 2.0)) == 1.0) s = -s;
    return s / pz;
}

/// Product sinc over coordinates:  prod_i sin(pi x_i)/(pi x_i).
inline double sinc_nd(std::span<const double> x) {
    double p = 1.0;
    for (double xi : x) p *= sinc1(xi);
    return p;
}

/// x^c = prod_i x_i^{c_i} for positive x (scalar-valued multi-index power).
inline double power_xc(std::span<const double> x, std::span<const double> c) {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= std::pow(x[i], c[i]);
    return p;
}

/// lin_c(x) = x^{-c} sinc(log x), the Mellin analogue of the sinc kernel.
inline double lin_c(std::span<const double> c, std::span<const double> x) {
    if (c.size() != x.size()) throw ParameterError("lin_c: dimension mismatch");
    double xc = 1.0, s = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("lin_c: x must be positive in every coordinate");
        xc *= std::pow(x[i], -c[i]);
        s *= sinc1(std::log(x[i]));
    }
    return xc * s;
}

namespace detail {

inline double dot(std::span<const double> a, const MultiIndex& k) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<double>(k[i]);
    return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// One series term without the common x^{-c} factor:
//   e^{<c,k>/T} * prod_i sinc(T u_i - k_i)
inline double series_term(const SpaceParams& p, const MultiIndex& k,
                          std::span<const double> u) {
    double s = std::exp(dot(p.c, k) / p.T);
    for (int i = 0; i < p.n; ++i)
        s *= sinc1(p.T * u[static_cast<std::size_t>(i)] - static_cast<double>(k[static_cast<std::size_t>(i)]));
    return s;
}

}  // namespace detail

/// Series evaluation in log coordinates: u = log x componentwise.
///
/// f(e^u) = e^{-<c,u>} sum_k c_k e^{<c,k>/T} sinc_nd(T u - k).
/// Evaluating here with exact lattice u = k/T reproduces coefficients to
/// machine precision (the sinc factors vanish identically off-diagonal).
inline std::complex<double> eval_series_log(const LatticeFunction& f,
                                            std::span<const double> u) {
    if (static_cast<int>(u.size()) != f.params.n)
        throw ParameterError("eval_series_log: point dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [k, ck] : f.coeffs) acc += ck * detail::series_term(f.params, k, u);
    return acc * std::exp(-detail::dot(f.params.c, u));
}

/// The x^c-weighted value in log coordinates:
///   e^{<c,u>} f(e^u) = sum_k c_k e^{<c,k>/T} sinc_nd(T u - k).
/// This form stays finite on arbitrarily wide windows where e^{+-<c,u>}
/// alone would overflow, so the wide-window quadratures integrate it
/// directly and the weight cancels analytically.
inline std::complex<double> eval_series_log_xc(const LatticeFunction& f,
                                               std::span<const double> u) {
    if (static_cast<int>(u.size()) != f.params.n)
        throw ParameterError("eval_series_log_xc: point dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [k, ck] : f.coeffs) acc += ck * detail::series_term(f.params, k, u);
    return acc;
}

/// Same, restricted to an explicit index window (absent keys contribute 0).
inline std::complex<double> eval_series_log(const LatticeFunction& f,
                                            std::span<const double> u,
                                            const std::vector<MultiIndex>& window) {
    if (static_cast<int>(u.size()) != f.params.n)
        throw ParameterError("eval_series_log: point dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& k : window) {
        auto it = f.coeffs.find(k);
        if (it == f.coeffs.end()) continue;
        acc += it->second * detail::series_term(f.params, k, u);
    }
    return acc * std::exp(-detail::dot(f.params.c, u));
}

inline std::vector<double> log_point(std::span<const double> x) {
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0))
            throw DomainError("eval_series: x must be positive in every coordinate");
        u[i] = std::log(x[i]);
    }
    return u;
}

/// Exponential sampling series  sum_k c_k lin_{c/T}(e^{-k} x^T)  at x > 0.
inline std::complex<double> eval_series(const LatticeFunction& f,
                                        std::span<const double> x) {
    return eval_series_log(f, log_point(x));
}

inline std::complex<double> eval_series(const LatticeFunction& f,
                                        std::span<const double> x,
                                        const std::vector<MultiIndex>& window) {
    return eval_series_log(f, log_point(x), window);
}

inline constexpr std::uint64_t kDefaultLatticeCap = std::uint64_t{1} << 24;

/// The nodes { e^{k/T} : k in Z^n, |k_i| <= N/2 } in lexicographic index
/// order; cardinality (2 floor(N/2) + 1)^n.
inline std::vector<std::vector<double>> lattice_points(const SpaceParams& params, std::int64_t N,
                                                       std::uint64_t cap = kDefaultLatticeCap) {
    params.validate();
    if (N < 0) throw ParameterError("lattice_points: N must be nonnegative");
    const std::int64_t h = N / 2;
    double card = 1.0;
    for (int i = 0; i < params.n; ++i) card *= static_cast<double>(2 * h + 1);
    if (card > static_cast<double>(cap))
        throw OverflowError("lattice_points: lattice cardinality exceeds cap");
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(card));
    for (const auto& k : index_box(params.n, h)) {
        std::vector<double> x(static_cast<std::size_t>(params.n));
        for (int i = 0; i < params.n; ++i)
            x[static_cast<std::size_t>(i)] =
                std::exp(static_cast<double>(k[static_cast<std::size_t>(i)]) / params.T);
        pts.push_back(std::move(x));
    }
    return pts;
}

}  // namespace mellin
