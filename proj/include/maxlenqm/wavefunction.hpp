#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "jet.hpp"
#include "quadrature.hpp"

namespace maxlenqm {

/// Complex-valued function of position carrying order-2 jets.
/// `order` counts how many derivative entries of the returned jet are
/// meaningful: library states provide 2; every momentum-operator
/// application consumes one.  Entries beyond `order` are NaN so that
/// accidental use is loud rather than silently wrong.
struct WaveFunction {
    std::function<CJet(double)> jet;
    int order = 2;
    std::string label;

    CJet eval_jet(double x) const { return jet(x); }
    cplx operator()(double x) const { return jet(x).v; }
};

inline constexpr cplx jet_nan{std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN()};

inline WaveFunction constant_state(cplx c) {
    return {[c](double) -> CJet { return {c, 0.0, 0.0}; }, 2, "constant"};
}

/// Linear combination sum_i coeff_i * state_i; jets are linear.
inline WaveFunction superpose(std::vector<std::pair<cplx, WaveFunction>> terms) {
    int ord = 2;
    for (const auto& t : terms) ord = std::min(ord, t.second.order);
    return {[terms = std::move(terms)](double x) -> CJet {
                CJet acc{};
                for (const auto& [c, psi] : terms) {
                    const CJet j = psi.eval_jet(x);
                    acc.v += c * j.v;
                    acc.d1 += c * j.d1;
                    acc.d2 += c * j.d2;
                }
                return acc;
            },
            ord, "superposition"};
}

/// L2 pairing against the deformed measure: integral of conj(psi) phi dx/D.
inline cplx inner_product(const WaveFunction& psi, const WaveFunction& phi,
                          const QuadratureGrid& grid) {
    std::vector<cplx> terms(grid.x_nodes.size());
    for (std::size_t i = 0; i < grid.x_nodes.size(); ++i) {
        const cplx a = psi(grid.x_nodes[i]);
        const cplx b = phi(grid.x_nodes[i]);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
            !std::isfinite(b.real()) || !std::isfinite(b.imag()))
            throw NonFiniteError("state not finite at a quadrature node");
        terms[i] = grid.weights[i] * std::conj(a) * b;
    }
    return grid.chart.params().hbar * pairwise_sum(terms);
}

/// Same pairing against plain dx.
inline cplx inner_product_flat(const WaveFunction& psi, const WaveFunction& phi,
                               const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    std::vector<cplx> terms(grid.x_nodes.size());
    for (std::size_t i = 0; i < grid.x_nodes.size(); ++i) {
        const double x = grid.x_nodes[i];
        terms[i] = grid.weights[i] * deformation_factor(x, p) * std::conj(psi(x)) * phi(x);
    }
    return p.hbar * pairwise_sum(terms);
}

inline double norm(const WaveFunction& psi, const QuadratureGrid& grid) {
    const cplx n2 = inner_product(psi, psi, grid);
    return std::sqrt(std::max(n2.real(), 0.0));
}

/// Rescale to unit deformed-measure norm.  Idempotent up to roundoff.
inline WaveFunction normalize(const WaveFunction& psi, const QuadratureGrid& grid) {
    const double n = norm(psi, grid);
    if (!(n > 1e-150)) throw ZeroNormError("cannot normalize a zero-norm state");
    const double s = 1.0 / n;
    return {[psi, s](double x) -> CJet {
                const CJet j = psi.eval_jet(x);
                return {s * j.v, s * j.d1, s * j.d2};
            },
            psi.order, psi.label};
}

/// Momentum eigenstate phi_eta(x) = A exp(i eta theta(x)) with the
/// normalization A = sqrt(tau sqrt3 / (2 pi)); solves -i hbar D phi' = eta phi.
struct EigenState {
    double eta = 0.0;
    WaveFunction base;
};

inline double eigenstate_amplitude(const DeformationParams& p) {
    return std::sqrt(p.tau * sqrt3 / (2.0 * pi));
}

inline EigenState eigenstate(double eta, const DeformationParams& p) {
    p.validate();
    const double amp = eigenstate_amplitude(p);
    const ThetaChart chart(p);
    WaveFunction wf{[chart, eta, amp](double x) -> CJet {
                        const RJet phase = eta * chart.theta_jet(x);
                        return amp * jet_cis(phase);
                    },
                    2, "eigenstate"};
    return {eta, std::move(wf)};
}

namespace detail {

/// Physicists' Hermite polynomial H_k(u) and H_k'(u) = 2k H_{k-1}(u),
/// as jets through the recurrence H_{k+1} = 2u H_k - 2k H_{k-1}.
inline RJet hermite_jet(int k, const RJet& u) {
    RJet hm1{0.0, 0.0, 0.0};
    RJet h{1.0, 0.0, 0.0};
    for (int j = 0; j < k; ++j) {
        const RJet hp1 = 2.0 * (u * h) - 2.0 * static_cast<double>(j) * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

} // namespace detail

/// Real test state H_k((theta - center)/sigma) exp(-(theta - center)^2 / (2 sigma^2)).
/// sigma and center are in theta units; the default calibration used by the
/// test suites is center = chart midpoint, sigma = length/12, which keeps
/// boundary values (and hence all boundary terms) far below tolerances.
inline WaveFunction hermite_state(int k, const ThetaChart& chart, double sigma, double center) {
    if (k < 0) throw ConfigError("Hermite index must be nonnegative");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    return {[chart, k, sigma, center](double x) -> CJet {
                const RJet th = chart.theta_jet(x);
                const RJet u = (th - center) / sigma;
                const RJet gauss = jet_exp(-0.5 * (u * u));
                return jet_complex(detail::hermite_jet(k, u) * gauss);
            },
            2, "hermite"};
}

inline WaveFunction hermite_state(int k, const ThetaChart& chart) {
    return hermite_state(k, chart, chart.length() / 12.0, chart.midpoint());
}

} // namespace maxlenqm
