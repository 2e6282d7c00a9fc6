#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "algebra.hpp"
#include "errors.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "wavefunction.hpp"

namespace maxlenqm {

/// First and second moments of X and P with the derived uncertainties and
/// the generalized uncertainty bound.  Imaginary parts of the P moments
/// are kept as diagnostics; they are roundoff for symmetric states.
struct UncertaintyReport {
    double mean_x = 0.0;
    double mean_x2 = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    double gup_rhs = 0.0;
    double margin = 0.0;
    bool satisfied = false;
    double mean_p_imag = 0.0;
    double mean_p2_imag = 0.0;
};

/// Right-hand side of the uncertainty bound:
///   (hbar / 2) (1 - tau <X> + tau^2 <X^2>).
inline double gup_rhs(double mean_x, double mean_x2, const DeformationParams& p) {
    return 0.5 * p.hbar * (1.0 - p.tau * mean_x + p.tau * p.tau * mean_x2);
}

namespace detail {

struct MomentSums {
    double norm2;
    double x1;
    double x2;
    cplx p1;
    double p2;
};

/// One pass over a grid: evaluates each state jet once per node and
/// accumulates every moment integrand with pairwise summation.
inline MomentSums moment_sums(const WaveFunction& psi, const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    const std::size_t n = grid.x_nodes.size();
    std::vector<double> t_norm(n), t_x1(n), t_x2(n), t_p2(n);
    std::vector<cplx> t_p1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x_nodes[i];
        const double w = grid.weights[i];
        const CJet j = psi.eval_jet(x);
        if (!std::isfinite(j.v.real()) || !std::isfinite(j.v.imag()) ||
            !std::isfinite(j.d1.real()) || !std::isfinite(j.d1.imag()))
            throw NonFiniteError("state not finite at a quadrature node");
        const double dens = std::norm(j.v);
        const cplx pval = cplx(0.0, -p.hbar) * deformation_factor(x, p) * j.d1;
        t_norm[i] = w * dens;
        t_x1[i] = w * x * dens;
        t_x2[i] = w * x * x * dens;
        t_p1[i] = w * std::conj(j.v) * pval;
        t_p2[i] = w * std::norm(pval);
    }
    const double h = p.hbar;
    return {h * maxlenqm::pairwise_sum(t_norm), h * maxlenqm::pairwise_sum(t_x1),
            h * maxlenqm::pairwise_sum(t_x2), h * maxlenqm::pairwise_sum(t_p1),
            h * maxlenqm::pairwise_sum(t_p2)};
}

inline void check_moment(double a, double b, const char* name) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    const double rel = std::abs(a - b) / scale;
    if (rel > divergence_tolerance) throw DivergentMomentError(name, rel);
}

} // namespace detail

/// Moments and uncertainty bound for a normalized state.  <P^2> is taken
/// as <P psi|P psi>, which is real and nonnegative by construction.
/// Divergent moments (refinement disagreement) are reported as errors.
inline UncertaintyReport moments(const WaveFunction& psi, const QuadratureGrid& grid) {
    if (psi.order < 1) throw Error("moments requires at least order-1 jets");
    if (grid.windowed) throw ConfigError("moments needs a full-chart grid");
    const DeformationParams& p = grid.chart.params();
    const detail::MomentSums a = detail::moment_sums(psi, grid);
    const detail::MomentSums b = detail::moment_sums(psi, refine_grid(grid));

    if (std::abs(a.norm2 - 1.0) > 1e-8)
        throw NotNormalizedError("moments requires a unit-norm state");

    detail::check_moment(a.x1, b.x1, "mean_x");
    detail::check_moment(a.x2, b.x2, "mean_x2");
    detail::check_moment(a.p1.real(), b.p1.real(), "mean_p");
    detail::check_moment(a.p2, b.p2, "mean_p2");

    UncertaintyReport r;
    r.mean_x = a.x1;
    r.mean_x2 = a.x2;
    r.mean_p = a.p1.real();
    r.mean_p2 = a.p2;
    r.mean_p_imag = a.p1.imag();
    r.mean_p2_imag = 0.0;
    r.delta_x = std::sqrt(std::max(r.mean_x2 - r.mean_x * r.mean_x, 0.0));
    r.delta_p = std::sqrt(std::max(r.mean_p2 - r.mean_p * r.mean_p, 0.0));
    r.gup_rhs = gup_rhs(r.mean_x, r.mean_x2, p);
    r.margin = r.delta_x * r.delta_p - r.gup_rhs;
    r.satisfied = r.margin >= -1e-9;
    return r;
}

/// The two saturation branches of the uncertainty relation solved for
/// delta_x at given delta_p and <X>:
///   delta_x = delta_p/(hbar tau^2) +- sqrt((delta_p/(hbar tau^2))^2
///             - (<X>/tau)(tau <X> - 1) - 1/tau^2).
struct DeltaXBranches {
    bool real_solutions = false;
    double lower = 0.0;
    double upper = 0.0;
    double discriminant = 0.0;
};

inline DeltaXBranches delta_x_branches(double delta_p, double mean_x, const DeformationParams& p) {
    const double t = p.tau;
    const double scale = p.hbar * t * t;
    // Factored discriminant (dp - s)(dp + s), s = hbar tau sqrt(D(mean_x)):
    // at the tangency point delta_p = hbar*tau, mean_x = 0 the first factor
    // is exactly zero in floating point, so the branches collapse to the
    // double root 1/tau instead of picking up sqrt(cancellation) noise.
    const double dbar = 1.0 - t * mean_x + t * t * mean_x * mean_x;
    const double s = p.hbar * t * std::sqrt(dbar);
    const double num = (delta_p - s) * (delta_p + s);
    DeltaXBranches out;
    out.discriminant = num / (scale * scale);
    if (num < 0.0) return out;
    const double root = std::sqrt(num) / scale;
    out.real_solutions = true;
    out.lower = delta_p / scale - root;
    out.upper = delta_p / scale + root;
    return out;
}

/// The tangency point of the two branches at <X> = 0: maximal position
/// uncertainty 1/tau, minimal momentum uncertainty hbar tau.
inline std::pair<double, double> extremal_uncertainties(const DeformationParams& p) {
    return {1.0 / p.tau, p.hbar * p.tau};
}

} // namespace maxlenqm
