#pragma once

#include <cmath>
#include <complex>

#include "algebra.hpp"
#include "operators.hpp"
#include "wavefunction.hpp"

namespace maxlenqm {

namespace detail {

/// sin(z)/z with a series branch near zero (|z| < 1e-6).
inline double sinc(double z) {
    if (std::abs(z) < 1e-6) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

} // namespace detail

/// Conventional sinc-form overlap kernel
///   (tau hbar sqrt3 / (2 pi delta)) * sin(2 pi delta / (tau hbar sqrt3)),
/// the form commonly quoted for this algebra, with zeros on the
/// half-spacing lattice delta = n tau hbar sqrt3 / 2.  It does NOT equal
/// the actual overlap integral of the normalized eigenstates; see
/// overlap_chart_kernel and the README discrepancy note.
inline double overlap_closed_form(double eta, double eta_prime, const DeformationParams& p) {
    const double delta = eta - eta_prime;
    const double z = 2.0 * pi * delta / (p.tau * p.hbar * sqrt3);
    return detail::sinc(z);
}

/// Exact overlap <phi_eta' | phi_eta> of normalized eigenstates: with
/// z = delta * chart_length = 2 pi delta / (tau hbar sqrt3),
///   K(delta) = exp(i z / 6) * sinc(z / 2).
/// The phase comes from the chart midpoint sitting at length/6; the real
/// zeros lie on the full-spacing lattice delta = n tau hbar sqrt3.
inline cplx overlap_chart_kernel(double eta, double eta_prime, const DeformationParams& p) {
    const double delta = eta - eta_prime;
    const double z = 2.0 * pi * delta / (p.tau * p.hbar * sqrt3);
    return std::exp(cplx(0.0, z / 6.0)) * detail::sinc(0.5 * z);
}

/// Half-spacing momentum lattice eta_n = (tau hbar sqrt3 / 2) n, n in Z.
/// Both signs are admitted; restrict to n >= 0 for the one-sided convention.
/// Quadrature orthogonality holds on the even sublattice (spacing
/// tau hbar sqrt3); see overlap_chart_kernel.
inline double lattice_eta(long n, const DeformationParams& p) {
    return 0.5 * p.tau * p.hbar * sqrt3 * static_cast<double>(n);
}

/// Kinetic energy <phi_eta| P^2 / (2 m) |phi_eta> by quadrature; the
/// eigenvalue relation makes it eta^2 / (2 m), finite for every eta.
inline double kinetic_energy(double eta, const QuadratureGrid& grid) {
    const DeformationParams& p = grid.chart.params();
    const EigenState phi = eigenstate(eta, p);
    const cplx e = inner_product(phi.base, apply_P_squared(phi.base, p), grid);
    return e.real() / (2.0 * p.mass);
}

} // namespace maxlenqm
