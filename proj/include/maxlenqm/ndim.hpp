#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "jet.hpp"

namespace maxlenqm {

/// Norm entering the radial deformation factor.  l1 is the literal
/// component sum sum_i sqrt(x_i x_i); its derivative is undefined on the
/// axis planes, so evaluations there are rejected.
enum class NormKind { l1, euclidean };

struct NDimParams {
    int dim = 1;
    DeformationParams base;
    NormKind norm_kind = NormKind::l1;
    std::optional<GeneralDeformation> deformation; // absent: standard tau factor

    void validate() const {
        base.validate();
        if (dim < 1) throw ConfigError("dimension must be at least 1");
    }

    /// Axis guard in position units: 1e-6 / tau.
    double eps_axis() const { return 1e-6 / base.tau; }

    void check_index(int i) const {
        if (i < 0 || i >= dim) throw IndexError("component index outside [0, dim)");
    }
};

/// Value, gradient and (symmetric) Hessian at a point; `order` counts the
/// valid derivative levels exactly as in the 1-dim jets.
struct NDJet {
    cplx v{};
    std::vector<cplx> grad;
    std::vector<cplx> hess; // row-major dim x dim
    int order = 2;

    explicit NDJet(int dim = 0)
        : grad(static_cast<std::size_t>(dim), cplx{}),
          hess(static_cast<std::size_t>(dim) * dim, cplx{}) {}
};

struct NDimWaveFunction {
    std::function<NDJet(const std::vector<double>&)> jet;
    int order = 2;

    NDJet eval_jet(const std::vector<double>& x) const { return jet(x); }
    cplx operator()(const std::vector<double>& x) const { return jet(x).v; }
};

namespace ndim_detail {

struct NormJet {
    double r = 0.0;
    std::vector<double> grad;
    std::vector<double> hess;
};

/// Norm with first and second derivatives; throws where the derivative is
/// undefined within the axis guard.
inline NormJet norm_jet(const std::vector<double>& x, const NDimParams& nd) {
    const int n = nd.dim;
    const double eps = nd.eps_axis();
    NormJet out;
    out.grad.assign(n, 0.0);
    out.hess.assign(static_cast<std::size_t>(n) * n, 0.0);
    if (nd.norm_kind == NormKind::l1) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(x[i]) < eps)
                throw AxisSingularityError("norm derivative undefined on an axis plane");
            r += std::abs(x[i]);
        }
        out.r = r;
        for (int i = 0; i < n; ++i) out.grad[i] = x[i] > 0.0 ? 1.0 : -1.0;
        return out; // second derivatives vanish off the axis planes
    }
    double q = 0.0;
    for (int i = 0; i < n; ++i) q += x[i] * x[i];
    const double r = std::sqrt(q);
    if (r < eps) throw AxisSingularityError("norm derivative undefined at the origin");
    out.r = r;
    for (int i = 0; i < n; ++i) out.grad[i] = x[i] / r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.hess[static_cast<std::size_t>(i) * n + j] =
                ((i == j ? 1.0 : 0.0) - out.grad[i] * out.grad[j]) / r;
    return out;
}

/// Radial factor value and its radial derivative: D_n(r) and dD_n/dr.
inline std::pair<double, double> factor_radial(double r, const NDimParams& nd) {
    if (nd.deformation) {
        const GeneralDeformation& d = *nd.deformation;
        const double val = 1.0 - d.f(r) + d.g(r * r);
        if (!std::isfinite(val)) throw NonFiniteError("deformation factor is not finite");
        if (val <= 0.0) throw DomainError("deformation factor must stay positive");
        return {val, -d.f_prime(r) + 2.0 * r * d.g_prime(r * r)};
    }
    const double t = nd.base.tau;
    return {1.0 - t * r + t * t * r * r, -t + 2.0 * t * t * r};
}

} // namespace ndim_detail

/// D_n(||x||) without derivatives; usable anywhere (no axis guard).
inline double deformation_factor_ndim(const std::vector<double>& x, const NDimParams& nd) {
    double r = 0.0;
    if (nd.norm_kind == NormKind::l1)
        for (double xi : x) r += std::abs(xi);
    else {
        for (double xi : x) r += xi * xi;
        r = std::sqrt(r);
    }
    return ndim_detail::factor_radial(r, nd).first;
}

/// Component position operator: multiply by x_i.
inline NDimWaveFunction apply_X_i(int i, const NDimWaveFunction& psi, const NDimParams& nd) {
    nd.check_index(i);
    const int n = nd.dim;
    return {[psi, i, n](const std::vector<double>& x) -> NDJet {
                const NDJet j = psi.eval_jet(x);
                NDJet out(n);
                out.order = j.order;
                out.v = x[i] * j.v;
                for (int m = 0; m < n; ++m)
                    out.grad[m] = (m == i ? j.v : cplx{}) + x[i] * j.grad[m];
                for (int m = 0; m < n; ++m)
                    for (int k = 0; k < n; ++k) {
                        cplx h = x[i] * j.hess[static_cast<std::size_t>(m) * n + k];
                        if (m == i) h += j.grad[k];
                        if (k == i) h += j.grad[m];
                        out.hess[static_cast<std::size_t>(m) * n + k] = h;
                    }
                return out;
            },
            psi.order};
}

/// Component momentum operator: (P_j psi)(x) = -i hbar D_n(||x||) d_j psi.
/// Consumes one jet order; evaluation inside the axis guard throws.
inline NDimWaveFunction apply_P_j(int j, const NDimWaveFunction& psi, const NDimParams& nd) {
    nd.check_index(j);
    if (psi.order < 1) throw Error("apply_P_j requires at least order-1 jets");
    const int n = nd.dim;
    return {[psi, j, n, nd](const std::vector<double>& x) -> NDJet {
                const NDJet in = psi.eval_jet(x);
                const ndim_detail::NormJet nj = ndim_detail::norm_jet(x, nd);
                const auto [D, dDdr] = ndim_detail::factor_radial(nj.r, nd);
                const cplx mih(0.0, -nd.base.hbar);
                const cplx nanc(std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN());
                NDJet out(n);
                out.order = in.order - 1;
                out.v = mih * D * in.grad[j];
                for (int m = 0; m < n; ++m) {
                    if (in.order >= 2)
                        out.grad[m] = mih * (dDdr * nj.grad[m] * in.grad[j] +
                                             D * in.hess[static_cast<std::size_t>(m) * n + j]);
                    else
                        out.grad[m] = nanc;
                }
                for (auto& h : out.hess) h = nanc;
                return out;
            },
            psi.order - 1};
}

inline NDimWaveFunction nd_subtract(const NDimWaveFunction& a, const NDimWaveFunction& b,
                                    const NDimParams& nd) {
    const int n = nd.dim;
    return {[a, b, n](const std::vector<double>& x) -> NDJet {
                const NDJet ja = a.eval_jet(x);
                const NDJet jb = b.eval_jet(x);
                NDJet out(n);
                out.order = std::min(ja.order, jb.order);
                out.v = ja.v - jb.v;
                for (int m = 0; m < n; ++m) out.grad[m] = ja.grad[m] - jb.grad[m];
                for (std::size_t m = 0; m < out.hess.size(); ++m)
                    out.hess[m] = ja.hess[m] - jb.hess[m];
                return out;
            },
            std::min(a.order, b.order)};
}

/// [X_i, P_j] psi by double application; equals i hbar delta_ij D_n psi.
inline NDimWaveFunction commutator_XP(int i, int j, const NDimWaveFunction& psi,
                                      const NDimParams& nd) {
    return nd_subtract(apply_X_i(i, apply_P_j(j, psi, nd), nd),
                       apply_P_j(j, apply_X_i(i, psi, nd), nd), nd);
}

/// [P_i, P_j] psi by double application (the oracle for the closed forms).
inline NDimWaveFunction commutator_PP_direct(int i, int j, const NDimWaveFunction& psi,
                                             const NDimParams& nd) {
    return nd_subtract(apply_P_j(i, apply_P_j(j, psi, nd), nd),
                       apply_P_j(j, apply_P_j(i, psi, nd), nd), nd);
}

namespace ndim_detail {

/// Multiply by the scalar field m(x) = ||x|| * d_j ||x||  (euclidean: x_j;
/// l1: ||x|| sign(x_j)).  Its second derivatives vanish for both norms, so
/// the product keeps the input's jet order.
inline NDimWaveFunction multiply_norm_component(int j, const NDimWaveFunction& psi,
                                                const NDimParams& nd) {
    const int n = nd.dim;
    return {[psi, j, n, nd](const std::vector<double>& x) -> NDJet {
                const NDJet in = psi.eval_jet(x);
                const NormJet nj = norm_jet(x, nd);
                const double m = nj.r * nj.grad[j];
                std::vector<double> dm(n);
                for (int k = 0; k < n; ++k)
                    dm[k] = nj.grad[k] * nj.grad[j] +
                            nj.r * nj.hess[static_cast<std::size_t>(k) * n + j];
                NDJet out(n);
                out.order = in.order;
                out.v = m * in.v;
                for (int k = 0; k < n; ++k) out.grad[k] = dm[k] * in.v + m * in.grad[k];
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        out.hess[static_cast<std::size_t>(a) * n + b] =
                            dm[a] * in.grad[b] + dm[b] * in.grad[a] +
                            m * in.hess[static_cast<std::size_t>(a) * n + b];
                return out;
            },
            psi.order};
}

} // namespace ndim_detail

/// Antisymmetrized closed form of [P_i, P_j]:
///   i hbar c(||x||) (P_i M_j - P_j M_i) psi,   M_j = ||x|| d_j ||x||,
/// with c = tau (2 tau - 1/||x||) for the standard factor and
/// c = -f'(||x||)/||x|| + 2 g'(||x||^2) in general.  For the euclidean
/// norm M_j is exactly X_j, which recovers the textbook arrangement; the
/// norm-gradient form is what matches the double-application oracle for
/// every norm kind.
inline NDimWaveFunction commutator_PP_closed(int i, int j, const NDimWaveFunction& psi,
                                             const NDimParams& nd) {
    nd.check_index(i);
    nd.check_index(j);
    const NDimWaveFunction pimj =
        apply_P_j(i, ndim_detail::multiply_norm_component(j, psi, nd), nd);
    const NDimWaveFunction pjmi =
        apply_P_j(j, ndim_detail::multiply_norm_component(i, psi, nd), nd);
    const NDimWaveFunction diff = nd_subtract(pimj, pjmi, nd);
    const int n = nd.dim;
    return {[diff, n, nd](const std::vector<double>& x) -> NDJet {
                const ndim_detail::NormJet nj = ndim_detail::norm_jet(x, nd);
                double c;
                if (nd.deformation)
                    c = -nd.deformation->f_prime(nj.r) / nj.r +
                        2.0 * nd.deformation->g_prime(nj.r * nj.r);
                else
                    c = nd.base.tau * (2.0 * nd.base.tau - 1.0 / nj.r);
                const cplx ihc(0.0, nd.base.hbar * c);
                NDJet out = diff.eval_jet(x);
                out.v *= ihc;
                for (auto& g : out.grad) g *= ihc;
                for (auto& h : out.hess) h *= ihc;
                // the prefactor varies with x, so propagated derivatives
                // beyond the value are no longer exact
                out.order = 0;
                return out;
            },
            0};
}

/// Cyclic Jacobi sum [[P_i,P_j],X_k] + [[P_j,X_k],P_i] + [[X_k,P_i],P_j]
/// applied to psi; vanishes identically by associativity of composition.
inline NDimWaveFunction jacobi_residual(int i, int j, int k, const NDimWaveFunction& psi,
                                        const NDimParams& nd) {
    using Op = std::function<NDimWaveFunction(const NDimWaveFunction&)>;
    const Op Pi = [i, nd](const NDimWaveFunction& f) { return apply_P_j(i, f, nd); };
    const Op Pj = [j, nd](const NDimWaveFunction& f) { return apply_P_j(j, f, nd); };
    const Op Xk = [k, nd](const NDimWaveFunction& f) { return apply_X_i(k, f, nd); };
    const auto comm = [&nd](const Op& A, const Op& B) {
        return [A, B, nd](const NDimWaveFunction& f) {
            return nd_subtract(A(B(f)), B(A(f)), nd);
        };
    };
    const auto c1 = comm([&](const NDimWaveFunction& f) { return comm(Pi, Pj)(f); }, Xk);
    const auto c2 = comm([&](const NDimWaveFunction& f) { return comm(Pj, Xk)(f); }, Pi);
    const auto c3 = comm([&](const NDimWaveFunction& f) { return comm(Xk, Pi)(f); }, Pj);
    NDimWaveFunction s1 = c1(psi);
    NDimWaveFunction s2 = c2(psi);
    NDimWaveFunction s3 = c3(psi);
    const int n = nd.dim;
    return {[s1, s2, s3, n](const std::vector<double>& x) -> NDJet {
                NDJet out(n);
                out.order = 0;
                out.v = s1.eval_jet(x).v + s2.eval_jet(x).v + s3.eval_jet(x).v;
                return out;
            },
            0};
}

/// Product of 1-dim Hermite-Gaussian factors in mildly rotated
/// coordinates y = R x: psi(x) = prod_d H_{k_d}(u_d) exp(-u_d^2 / 2),
/// u_d = (y_d - center_d) / sigma_d.  Exact jets for testing.
inline NDimWaveFunction ndim_test_state(const NDimParams& nd, std::vector<int> ks,
                                        std::vector<double> sigmas, std::vector<double> centers,
                                        std::vector<double> angles) {
    nd.validate();
    const int n = nd.dim;
    if (static_cast<int>(ks.size()) != n || static_cast<int>(sigmas.size()) != n ||
        static_cast<int>(centers.size()) != n)
        throw ConfigError("test state needs one k, sigma, center per dimension");

    // rotation from Givens factors in consecutive planes
    std::vector<double> R(static_cast<std::size_t>(n) * n, 0.0);
    for (int d = 0; d < n; ++d) R[static_cast<std::size_t>(d) * n + d] = 1.0;
    for (std::size_t a = 0; a + 1 < static_cast<std::size_t>(n) && a < angles.size(); ++a) {
        const double c = std::cos(angles[a]), s = std::sin(angles[a]);
        for (int col = 0; col < n; ++col) {
            const double r0 = R[a * n + col];
            const double r1 = R[(a + 1) * n + col];
            R[a * n + col] = c * r0 - s * r1;
            R[(a + 1) * n + col] = s * r0 + c * r1;
        }
    }

    return {[n, ks, sigmas, centers, R](const std::vector<double>& x) -> NDJet {
                std::vector<double> f(n), f1(n), f2(n);
                for (int d = 0; d < n; ++d) {
                    double y = 0.0;
                    for (int i = 0; i < n; ++i) y += R[static_cast<std::size_t>(d) * n + i] * x[i];
                    // jet of the factor in y via the 1-dim machinery
                    RJet u = (jet_seed(y) - centers[d]) / sigmas[d];
                    RJet h{1.0, 0.0, 0.0};
                    RJet hm1{0.0, 0.0, 0.0};
                    for (int q = 0; q < ks[d]; ++q) {
                        const RJet hp1 = 2.0 * (u * h) - 2.0 * static_cast<double>(q) * hm1;
                        hm1 = h;
                        h = hp1;
                    }
                    const RJet val = h * jet_exp(-0.5 * (u * u));
                    f[d] = val.v;
                    f1[d] = val.d1;
                    f2[d] = val.d2;
                }
                NDJet out(n);
                out.order = 2;
                double prod = 1.0;
                for (int d = 0; d < n; ++d) prod *= f[d];
                out.v = prod;
                // dpsi/dx_i = sum_d f'_d R_di prod_{e != d} f_e
                std::vector<double> others(n);
                for (int d = 0; d < n; ++d) {
                    double pr = 1.0;
                    for (int e = 0; e < n; ++e)
                        if (e != d) pr *= f[e];
                    others[d] = pr;
                }
                for (int i = 0; i < n; ++i) {
                    double g = 0.0;
                    for (int d = 0; d < n; ++d)
                        g += f1[d] * R[static_cast<std::size_t>(d) * n + i] * others[d];
                    out.grad[i] = g;
                }
                for (int i = 0; i < n; ++i)
                    for (int jx = 0; jx < n; ++jx) {
                        double h = 0.0;
                        for (int d = 0; d < n; ++d)
                            h += f2[d] * R[static_cast<std::size_t>(d) * n + i] *
                                 R[static_cast<std::size_t>(d) * n + jx] * others[d];
                        for (int d = 0; d < n; ++d)
                            for (int e = 0; e < n; ++e) {
                                if (d == e) continue;
                                double pr = 1.0;
                                for (int c = 0; c < n; ++c)
                                    if (c != d && c != e) pr *= f[c];
                                h += f1[d] * f1[e] * R[static_cast<std::size_t>(d) * n + i] *
                                     R[static_cast<std::size_t>(e) * n + jx] * pr;
                            }
                        out.hess[static_cast<std::size_t>(i) * n + jx] = h;
                    }
                return out;
            },
            2};
}

} // namespace maxlenqm
