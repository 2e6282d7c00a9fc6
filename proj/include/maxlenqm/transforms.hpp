#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "wavefunction.hpp"

namespace maxlenqm {

/// Uniform quasi-momentum grid, symmetric about zero:
/// eta_k = k * eta_step for |k| <= floor(eta_max / eta_step).
struct EtaGrid {
    double eta_max = 0.0;
    double eta_step = 0.0;

    /// Defaults: eta_max = 40 tau hbar, eta_step = tau hbar sqrt3 / 8
    /// (four-fold oversampling of the half-spacing lattice).
    static EtaGrid defaults(const DeformationParams& p) {
        return {40.0 * p.tau * p.hbar, p.tau * p.hbar * sqrt3 / 8.0};
    }

    std::vector<double> etas() const {
        if (!(eta_step > 0.0) || !(eta_max >= eta_step))
            throw ConfigError("eta grid requires 0 < eta_step <= eta_max");
        const long k_max = static_cast<long>(std::floor(eta_max / eta_step + 1e-12));
        std::vector<double> out;
        out.reserve(2 * k_max + 1);
        for (long k = -k_max; k <= k_max; ++k) out.push_back(eta_step * static_cast<double>(k));
        return out;
    }
};

struct QuasiMomentumSamples {
    std::vector<double> etas;
    std::vector<cplx> values;
    double eta_step = 0.0;
};

/// Forward transform: psi(eta) = A * integral dx/D psi(x) exp(-i eta theta(x)),
/// A = sqrt(tau sqrt3 / (2 pi)).  Equivalent to projecting on eigenstates.
inline QuasiMomentumSamples to_quasi_momentum(const WaveFunction& psi, const EtaGrid& eta_grid,
                                              const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    const double amp = eigenstate_amplitude(p);
    const std::size_t n = grid.x_nodes.size();

    std::vector<cplx> wpsi(n);
    std::vector<double> thetas(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx v = psi(grid.x_nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteError("state not finite at a quadrature node");
        wpsi[i] = grid.weights[i] * v;
        thetas[i] = grid.theta_nodes[i];
    }

    QuasiMomentumSamples s;
    s.etas = eta_grid.etas();
    s.eta_step = eta_grid.eta_step;
    s.values.assign(s.etas.size(), cplx{});
    parallel_for(s.etas.size(), [&](std::size_t k) {
        const double eta = s.etas[k];
        std::vector<cplx> terms(n);
        for (std::size_t i = 0; i < n; ++i)
            terms[i] = wpsi[i] * std::exp(cplx(0.0, -eta * thetas[i]));
        s.values[k] = amp * p.hbar * pairwise_sum(terms);
    });
    return s;
}

/// Inverse transform at one position:
/// psi(x) = (1 / (hbar sqrt(2 pi tau sqrt3))) * sum_k eta_step psi(eta_k) exp(i eta_k theta(x)).
inline cplx from_quasi_momentum(const QuasiMomentumSamples& s, double x, const ThetaChart& chart) {
    const DeformationParams& p = chart.params();
    const double c = 1.0 / (p.hbar * std::sqrt(2.0 * pi * p.tau * sqrt3));
    const double theta = chart.theta_of_x(x);
    std::vector<cplx> terms(s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k)
        terms[k] = s.values[k] * std::exp(cplx(0.0, s.etas[k] * theta));
    return c * s.eta_step * pairwise_sum(terms);
}

/// Inverse transform as a first-class state with exact jets: every term is
/// exp(i eta theta(x)) whose derivatives follow from the chart jets.
inline WaveFunction reconstruct(const QuasiMomentumSamples& s, const ThetaChart& chart) {
    const DeformationParams p = chart.params();
    const double c = 1.0 / (p.hbar * std::sqrt(2.0 * pi * p.tau * sqrt3));
    return {[s, chart, c](double x) -> CJet {
                const RJet th = chart.theta_jet(x);
                std::vector<cplx> tv(s.values.size()), t1(s.values.size()), t2(s.values.size());
                for (std::size_t k = 0; k < s.values.size(); ++k) {
                    const CJet e = jet_cis(s.etas[k] * th);
                    tv[k] = s.values[k] * e.v;
                    t1[k] = s.values[k] * e.d1;
                    t2[k] = s.values[k] * e.d2;
                }
                const cplx f = c * s.eta_step;
                return {f * pairwise_sum(tv), f * pairwise_sum(t1), f * pairwise_sum(t2)};
            },
            2, "reconstructed"};
}

/// L2 distance (deformed measure) between a state and its round trip
/// through the transform pair, given the state's forward samples.
inline double roundtrip_error(const WaveFunction& psi, const QuasiMomentumSamples& s,
                              const QuadratureGrid& grid) {
    const WaveFunction back = reconstruct(s, grid.chart);
    std::vector<double> terms(grid.x_nodes.size());
    parallel_for(grid.x_nodes.size(), [&](std::size_t i) {
        const double x = grid.x_nodes[i];
        terms[i] = grid.weights[i] * std::norm(back(x) - psi(x));
    });
    return std::sqrt(std::max(grid.chart.params().hbar * pairwise_sum(terms), 0.0));
}

inline double roundtrip_error(const WaveFunction& psi, const EtaGrid& eta_grid,
                              const QuadratureGrid& grid) {
    return roundtrip_error(psi, to_quasi_momentum(psi, eta_grid, grid), grid);
}

/// sum eta_step |psi(eta_k)|^2 divided by <psi|psi>; converges to
/// sqrt3 * tau * hbar (the Plancherel constant of the pair).
inline double parseval_factor(const QuasiMomentumSamples& s, const WaveFunction& psi,
                              const QuadratureGrid& grid) {
    std::vector<double> terms(s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k)
        terms[k] = std::norm(s.values[k]);
    const double spectral = s.eta_step * pairwise_sum(terms);
    const cplx n2 = inner_product(psi, psi, grid);
    if (!(n2.real() > 1e-150)) throw ZeroNormError("parseval_factor of a zero-norm state");
    return spectral / n2.real();
}

inline double parseval_factor(const WaveFunction& psi, const EtaGrid& eta_grid,
                              const QuadratureGrid& grid) {
    return parseval_factor(to_quasi_momentum(psi, eta_grid, grid), psi, grid);
}

/// Position operator conjugated into the quasi representation:
/// reconstruct, multiply by x, project back on the same grid.  Requires a
/// finite <X^2> for the reconstructed state, enforced with the
/// refinement divergence check.
inline QuasiMomentumSamples apply_X_quasi(const QuasiMomentumSamples& s,
                                          const QuadratureGrid& grid) {
    const WaveFunction back = reconstruct(s, grid.chart);
    {
        const auto x2 = integrate_deformed_checked(
            [&back](double x) { return cplx(std::norm(x * back(x)), 0.0); }, grid);
        if (!x2.consistent)
            throw DivergentMomentError("mean_x2 of reconstructed state", x2.rel_disagreement);
    }
    EtaGrid eta_grid{s.etas.empty() ? 0.0 : std::abs(s.etas.back()), s.eta_step};
    return to_quasi_momentum(apply_X(back), eta_grid, grid);
}

/// Scalar product evaluated entirely in the quasi representation: the
/// discretized triple integral
///   (1 / (2 pi hbar^2 sqrt3)) sum_i sum_j eta_step^2
///     conj(Psi(eta_j)) Phi(eta_i) * integral dx/D exp(i (eta_i - eta_j) theta(x)).
/// The x integral depends only on eta_i - eta_j, so it is evaluated once
/// per difference; the double sum is unchanged.  The dual-route oracle
/// against the position inner product fixes the overall constant at tau.
inline cplx scalar_product_quasi(const QuasiMomentumSamples& psi_s,
                                 const QuasiMomentumSamples& phi_s,
                                 const QuadratureGrid& grid) {
    if (psi_s.etas.size() != phi_s.etas.size() || psi_s.eta_step != phi_s.eta_step)
        throw ConfigError("scalar_product_quasi requires matching eta grids");
    const DeformationParams& p = grid.chart.params();
    const long n = static_cast<long>(psi_s.etas.size());
    const std::size_t nodes = grid.x_nodes.size();

    // T[m + (n-1)] = integral dx/D exp(i m eta_step theta), m in [-(n-1), n-1].
    std::vector<cplx> kernel(2 * n - 1);
    parallel_for(kernel.size(), [&](std::size_t idx) {
        const double delta = (static_cast<long>(idx) - (n - 1)) * psi_s.eta_step;
        std::vector<cplx> terms(nodes);
        for (std::size_t i = 0; i < nodes; ++i)
            terms[i] = grid.weights[i] * std::exp(cplx(0.0, delta * grid.theta_nodes[i]));
        kernel[idx] = p.hbar * pairwise_sum(terms);
    });

    std::vector<cplx> rows(n);
    for (long i = 0; i < n; ++i) {
        std::vector<cplx> terms(n);
        for (long j = 0; j < n; ++j)
            terms[j] = std::conj(psi_s.values[j]) * kernel[(i - j) + (n - 1)];
        rows[i] = phi_s.values[i] * pairwise_sum(terms);
    }
    const double step2 = psi_s.eta_step * psi_s.eta_step;
    return step2 / (2.0 * pi * p.hbar * p.hbar * sqrt3) * pairwise_sum(rows);
}

} // namespace maxlenqm
