#pragma once

#include <algorithm>
#include <cmath>

#include "algebra.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "wavefunction.hpp"

namespace maxlenqm {

/// Position operator (X psi)(x) = x psi(x); jets by the product rule,
/// so the output keeps the input's jet order.
inline WaveFunction apply_X(const WaveFunction& psi) {
    return {[psi](double x) -> CJet {
                const CJet j = psi.eval_jet(x);
                return {x * j.v, j.v + x * j.d1, 2.0 * j.d1 + x * j.d2};
            },
            psi.order, "X " + psi.label};
}

/// Deformed momentum (P psi)(x) = -i hbar D(x) psi'(x).  The output's
/// first derivative needs psi'', so the jet order drops by one.
inline WaveFunction apply_P(const WaveFunction& psi, const DeformationParams& p) {
    if (psi.order < 1) throw Error("apply_P requires at least order-1 jets");
    return {[psi, p](double x) -> CJet {
                const CJet j = psi.eval_jet(x);
                const RJet D = deformation_factor_jet(x, p);
                const cplx mih(0.0, -p.hbar);
                CJet out;
                out.v = mih * D.v * j.d1;
                out.d1 = (psi.order >= 2) ? mih * (D.d1 * j.d1 + D.v * j.d2) : jet_nan;
                out.d2 = jet_nan;
                return out;
            },
            psi.order - 1, "P " + psi.label};
}

/// (P^2 psi)(x) = -hbar^2 D(x) d/dx [D(x) psi'(x)]; consumes two orders.
inline WaveFunction apply_P_squared(const WaveFunction& psi, const DeformationParams& p) {
    if (psi.order < 2) throw Error("apply_P_squared requires order-2 jets");
    return {[psi, p](double x) -> CJet {
                const CJet j = psi.eval_jet(x);
                const RJet D = deformation_factor_jet(x, p);
                const double h2 = p.hbar * p.hbar;
                CJet out;
                out.v = -h2 * D.v * (D.d1 * j.d1 + D.v * j.d2);
                out.d1 = jet_nan;
                out.d2 = jet_nan;
                return out;
            },
            psi.order - 2, "P^2 " + psi.label};
}

/// Flat-measure adjoint of P: (P + i hbar tau (1 - 2 tau x)) psi, which
/// pointwise equals -i hbar d/dx (D psi).
inline WaveFunction apply_P_dagger_flat(const WaveFunction& psi, const DeformationParams& p) {
    if (psi.order < 1) throw Error("apply_P_dagger_flat requires at least order-1 jets");
    const WaveFunction pw = apply_P(psi, p);
    return {[psi, pw, p](double x) -> CJet {
                const CJet j = psi.eval_jet(x);
                const CJet pj = pw.eval_jet(x);
                const cplx corr = cplx(0.0, p.hbar * p.tau) * (1.0 - 2.0 * p.tau * x);
                CJet out;
                out.v = pj.v + corr * j.v;
                out.d1 = (psi.order >= 2)
                             ? pj.d1 + corr * j.d1 +
                                   cplx(0.0, -2.0 * p.hbar * p.tau * p.tau) * j.v
                             : jet_nan;
                out.d2 = jet_nan;
                return out;
            },
            psi.order - 1, "Pdag " + psi.label};
}

/// Residual of the defining commutator: ((X P - P X) - i hbar D) psi.
/// Vanishes identically; the value probes jet propagation to roundoff.
inline WaveFunction commutator_residual(const WaveFunction& psi, const DeformationParams& p) {
    if (psi.order < 2) throw Error("commutator_residual requires order-2 jets");
    const WaveFunction xp = apply_X(apply_P(psi, p));
    const WaveFunction px = apply_P(apply_X(psi), p);
    return {[xp, px, psi, p](double x) -> CJet {
                const cplx ihD = cplx(0.0, p.hbar) * deformation_factor(x, p);
                CJet out;
                out.v = xp.eval_jet(x).v - px.eval_jet(x).v - ihD * psi.eval_jet(x).v;
                out.d1 = jet_nan;
                out.d2 = jet_nan;
                return out;
            },
            0, "commutator residual"};
}

enum class Measure { deformed, flat };

/// Symmetry defect <psi|P phi> - <P psi|phi> under the chosen measure.
/// Vanishes for boundary-vanishing states under the deformed measure;
/// under the flat measure it equals -<psi| i hbar tau (1 - 2 tau x) phi>,
/// the anti-Hermitian part fixed by the flat adjoint.
inline cplx symmetry_defect(const WaveFunction& psi, const WaveFunction& phi, Measure measure,
                            const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    const WaveFunction p_phi = apply_P(phi, p);
    const WaveFunction p_psi = apply_P(psi, p);
    if (measure == Measure::deformed)
        return inner_product(psi, p_phi, grid) - inner_product(p_psi, phi, grid);

    const auto lhs = integrate_flat_checked(
        [&](double x) { return std::conj(psi(x)) * p_phi(x); }, grid);
    const auto rhs = integrate_flat_checked(
        [&](double x) { return std::conj(p_psi(x)) * phi(x); }, grid);
    if (!lhs.consistent || !rhs.consistent)
        throw DivergentMomentError("flat symmetry defect",
                                   std::max(lhs.rel_disagreement, rhs.rel_disagreement));
    return lhs.value - rhs.value;
}

} // namespace maxlenqm
