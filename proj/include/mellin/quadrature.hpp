#pragma once

// Composite Gauss-Legendre panel quadrature with uniform refinement, for the
// log-axis integrals used throughout.  Panels double until two successive
// levels agree to the requested tolerance.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mellin/core.hpp"
#include "mellin/errors.hpp"

namespace mellin {

/// Controls the panel quadratures: initial panel count per axis, half-width L
/// of the log-coordinate box [-L, L]^n where one applies, the sup-norm
/// agreement tolerance between refinement levels, and the refinement budget.
struct QuadratureSpec {
    int panel_count = 64;
    double log_radius = 10.0;
    double refinement_tol = 1e-9;
    int max_refinements = 10;

    void validate() const {
        if (panel_count < 1) throw ParameterError("QuadratureSpec: panel_count must be >= 1");
        if (!(log_radius > 0.0)) throw ParameterError("QuadratureSpec: log_radius must be > 0");
        if (!(refinement_tol > 0.0))
            throw ParameterError("QuadratureSpec: refinement_tol must be > 0");
        if (max_refinements < 1)
            throw ParameterError("QuadratureSpec: max_refinements must be >= 1");
    }
};

namespace detail {

/// Panels needed so that ~one wavelength of the fastest oscillation falls in
/// each Gauss panel.
inline int panels_for(double width, double max_angular_freq, int at_least) {
    const double wavelength = 2.0 * kPi / std::max(max_angular_freq, 1e-9);
    const double p = std::ceil(width / wavelength);
    return std::max(at_least, static_cast<int>(std::min(p, 1e7)));
}

}  // namespace detail

namespace quad {

inline constexpr int kPointsPerPanel = 8;

/// Gauss-Legendre rule on [-1, 1]: nodes and weights by Newton iteration on
/// the Legendre recurrence.
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

inline GaussRule make_gauss_rule(int m) {
    GaussRule r;
    r.node.resize(static_cast<std::size_t>(m));
    r.weight.resize(static_cast<std::size_t>(m));
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double dz = -p1 / pp;
            z += dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        r.node[static_cast<std::size_t>(i)] = -z;
        r.node[static_cast<std::size_t>(m - 1 - i)] = z;
        r.weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weight[static_cast<std::size_t>(m - 1 - i)] = r.weight[static_cast<std::size_t>(i)];
    }
    return r;
}

inline const GaussRule& gauss_rule(int m) {
    thread_local std::vector<GaussRule> cache;  // indexed by point count
    if (static_cast<int>(cache.size()) <= m) cache.resize(static_cast<std::size_t>(m) + 1);
    auto& entry = cache[static_cast<std::size_t>(m)];
    if (entry.node.empty()) entry = make_gauss_rule(m);
    return entry;
}

/// Composite panel nodes and weights over [a, b].
struct PanelNodes {
    std::vector<double> u;
    std::vector<double> w;
};

inline PanelNodes panel_nodes(double a, double b, int panels, int pts = kPointsPerPanel) {
    const GaussRule& g = gauss_rule(pts);
    PanelNodes out;
    out.u.reserve(static_cast<std::size_t>(panels) * static_cast<std::size_t>(pts));
    out.w.reserve(out.u.capacity());
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (int q = 0; q < pts; ++q) {
            out.u.push_back(mid + 0.5 * h * g.node[static_cast<std::size_t>(q)]);
            out.w.push_back(0.5 * h * g.weight[static_cast<std::size_t>(q)]);
        }
    }
    return out;
}

template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int pts = kPointsPerPanel) {
    const PanelNodes pn = panel_nodes(a, b, panels, pts);
    using R = std::decay_t<decltype(f(0.0))>;
    R acc{};
    for (std::size_t q = 0; q < pn.u.size(); ++q) acc += pn.w[q] * f(pn.u[q]);
    return acc;
}

template <class R>
struct RefineResultT {
    R value{};
    int refinements = 0;
    bool converged = false;
};
using RefineResult = RefineResultT<double>;

/// Doubles panels until two levels agree within spec.refinement_tol.
template <class F>
auto integrate_refined(F&& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    using R = std::decay_t<decltype(f(0.0))>;
    int panels = spec.panel_count;
    R prev = integrate_panels(f, a, b, panels);
    RefineResultT<R> res;
    for (int level = 1; level <= spec.max_refinements; ++level) {
        panels *= 2;
        const R cur = integrate_panels(f, a, b, panels);
        if (std::abs(cur - prev) < spec.refinement_tol) {
            res.value = cur;
            res.refinements = level;
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.refinements = spec.max_refinements;
    return res;
}

template <class F>
auto integrate_refined_or_throw(F&& f, double a, double b, const QuadratureSpec& spec,
                                const char* what) {
    auto r = integrate_refined(f, a, b, spec);
    if (!r.converged) throw QuadratureError(std::string(what) + ": refinement budget exhausted");
    return r.value;
}

/// Tensor-product panel integration of f(u), u in box prod [lo_i, hi_i].
/// Nodes are iterated in row-major axis order, so the summation order (and
/// hence the floating-point result) is deterministic.
template <class F>
auto integrate_box(F&& f, std::span<const double> lo, std::span<const double> hi,
                   int panels_per_axis, int pts = kPointsPerPanel) {
    const int n = static_cast<int>(lo.size());
    using R = std::decay_t<decltype(f(std::span<const double>()))>;
    std::vector<PanelNodes> axes;
    axes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        axes.push_back(panel_nodes(lo[static_cast<std::size_t>(i)],
                                   hi[static_cast<std::size_t>(i)], panels_per_axis, pts));
    const std::size_t per_axis = axes[0].u.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> u(static_cast<std::size_t>(n));
    R acc{};
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            u[ii] = axes[ii].u[idx[ii]];
            w *= axes[ii].w[idx[ii]];
        }
        acc += w * f(std::span<const double>(u));
        int axis = n - 1;
        while (axis >= 0 && idx[static_cast<std::size_t>(axis)] + 1 == per_axis) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++idx[static_cast<std::size_t>(axis)];
    }
    return acc;
}

/// Box integration refined uniformly in all axes.
template <class F>
auto integrate_box_refined(F&& f, std::span<const double> lo, std::span<const double> hi,
                           const QuadratureSpec& spec) {
    spec.validate();
    using R = std::decay_t<decltype(f(std::span<const double>()))>;
    int panels = spec.panel_count;
    R prev = integrate_box(f, lo, hi, panels);
    RefineResultT<R> res;
    for (int level = 1; level <= spec.max_refinements; ++level) {
        panels *= 2;
        const R cur = integrate_box(f, lo, hi, panels);
        if (std::abs(cur - prev) < spec.refinement_tol) {
            res.value = cur;
            res.refinements = level;
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.refinements = spec.max_refinements;
    return res;
}

}  // namespace quad
}  // namespace mellin
