#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "jet.hpp"

namespace maxlenqm {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre recurrence.
inline void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 2) throw ConfigError("Gauss-Legendre order must be at least 2");
    const int n = order;
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

namespace detail {

/// Deterministic pairwise sum; order depends only on the element order.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

} // namespace detail

inline double pairwise_sum(const std::vector<double>& xs) {
    return detail::pairwise_sum(std::span<const double>(xs));
}

inline cplx pairwise_sum(const std::vector<cplx>& xs) {
    return detail::pairwise_sum(std::span<const cplx>(xs));
}

/// Composite Gauss-Legendre grid in theta over the guarded chart.
/// Weights are theta-measure weights; x_nodes caches the chart inverse.
struct QuadratureGrid {
    ThetaChart chart;
    int panels = 0;
    int order = 0;
    double guard_scale = 1.0;
    bool windowed = false;
    double lo = 0.0; // theta window actually covered
    double hi = 0.0;
    std::vector<double> theta_nodes;
    std::vector<double> weights;
    std::vector<double> x_nodes;

    double total_weight() const { return pairwise_sum(weights); }
};

/// Grid over an explicit theta window [lo, hi] inside the chart.
inline QuadratureGrid build_grid_window(const ThetaChart& chart, double lo, double hi,
                                        int panels, int order) {
    if (panels < 1) throw ConfigError("panel count must be positive");
    if (order < 2) throw ConfigError("Gauss-Legendre order must be at least 2");
    if (!(lo < hi) || !(lo > chart.theta_min()) || !(hi < chart.theta_max()))
        throw ConfigError("integration window must lie strictly inside the chart");

    std::vector<double> ref_nodes, ref_weights;
    gauss_legendre(order, ref_nodes, ref_weights);

    QuadratureGrid g{chart, panels, order, 1.0, true, lo, hi, {}, {}, {}};
    const std::size_t total = static_cast<std::size_t>(panels) * order;
    g.theta_nodes.reserve(total);
    g.weights.reserve(total);
    g.x_nodes.reserve(total);
    const double h = (hi - lo) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = lo + pnl * h;
        const double c = a + 0.5 * h;
        for (int k = 0; k < order; ++k) {
            const double th = c + 0.5 * h * ref_nodes[k];
            g.theta_nodes.push_back(th);
            g.weights.push_back(0.5 * h * ref_weights[k]);
            g.x_nodes.push_back(chart.x_of_theta(th));
        }
    }
    return g;
}

/// Default grid: guarded full chart, ascending theta order.
inline QuadratureGrid build_grid(const ThetaChart& chart, int panels = 256, int order = 16,
                                 double guard_scale = 1.0) {
    if (!(guard_scale >= 1.0)) throw ConfigError("guard_scale must be >= 1");
    const double g = guard_scale * chart.guard();
    QuadratureGrid grid =
        build_grid_window(chart, chart.theta_min() + g, chart.theta_max() - g, panels, order);
    grid.guard_scale = guard_scale;
    grid.windowed = false;
    return grid;
}

/// Integral of fn against the deformed measure dx / D(x); equals
/// hbar * integral of fn(x(theta)) dtheta over the guarded chart.
inline cplx integrate_deformed(const std::function<cplx(double)>& fn, const QuadratureGrid& grid) {
    std::vector<cplx> terms(grid.x_nodes.size());
    for (std::size_t i = 0; i < grid.x_nodes.size(); ++i) {
        const cplx v = fn(grid.x_nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteError("integrand not finite at a quadrature node");
        terms[i] = grid.weights[i] * v;
    }
    return grid.chart.params().hbar * pairwise_sum(terms);
}

/// Integral of fn against plain dx (dx = hbar D dtheta on the chart).
inline cplx integrate_flat(const std::function<cplx(double)>& fn, const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    return integrate_deformed(
        [&](double x) { return deformation_factor(x, p) * fn(x); }, grid);
}

/// Integral evaluated on the grid and on its panel-doubled refinement.
/// A relative disagreement above 1e-3 marks the integral as divergent:
/// its value depends on how closely the nodes approach the chart boundary.
struct CheckedIntegral {
    cplx value;
    double rel_disagreement;
    bool consistent;
};

inline constexpr double divergence_tolerance = 1e-3;

/// Same window, doubled panel count.  Boundary-divergent integrands keep
/// growing as nodes approach the chart edge, so refinement moves their
/// value; convergent ones are already resolved and stay put.
inline QuadratureGrid refine_grid(const QuadratureGrid& grid) {
    if (grid.windowed)
        return build_grid_window(grid.chart, grid.lo, grid.hi, 2 * grid.panels, grid.order);
    return build_grid(grid.chart, 2 * grid.panels, grid.order, grid.guard_scale);
}

inline CheckedIntegral integrate_deformed_checked(const std::function<cplx(double)>& fn,
                                                  const QuadratureGrid& grid) {
    const cplx a = integrate_deformed(fn, grid);
    const cplx b = integrate_deformed(fn, refine_grid(grid));
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    const double rel = std::abs(a - b) / scale;
    return {a, rel, rel <= divergence_tolerance};
}

inline CheckedIntegral integrate_flat_checked(const std::function<cplx(double)>& fn,
                                              const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    return integrate_deformed_checked(
        [&](double x) { return deformation_factor(x, p) * fn(x); }, grid);
}

} // namespace maxlenqm
