#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "errors.hpp"
#include "jet.hpp"

namespace maxlenqm {

inline constexpr double sqrt3 = std::numbers::sqrt3;
inline constexpr double pi = std::numbers::pi;

/// Deformation strength tau, Planck constant hbar and particle mass.
/// tau > 0 gives the maximal position uncertainty 1/tau and the minimal
/// momentum uncertainty hbar*tau.
struct DeformationParams {
    double tau = 0.1;
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const {
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw ConfigError("tau must be positive and finite");
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw ConfigError("hbar must be positive and finite");
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw ConfigError("mass must be positive and finite");
    }
};

/// D(x) = 1 - tau x + tau^2 x^2.  Minimum 3/4 at x = 1/(2 tau), so the
/// factor never vanishes and 1/D is integrable over the whole line.
inline double deformation_factor(double x, const DeformationParams& p) {
    return 1.0 - p.tau * x + p.tau * p.tau * x * x;
}

/// (D, D', D'') as a jet in x.
inline RJet deformation_factor_jet(double x, const DeformationParams& p) {
    const double t = p.tau;
    return {1.0 - t * x + t * t * x * x, -t + 2.0 * t * t * x, 2.0 * t * t};
}

/// General radial deformation 1 - f(s) + g(s^2) evaluated on a norm
/// s >= 0.  f_prime and g_prime are derivatives with respect to the
/// written argument (s and s^2 respectively).
struct GeneralDeformation {
    std::function<double(double)> f;
    std::function<double(double)> g;
    std::function<double(double)> f_prime;
    std::function<double(double)> g_prime;

    /// f(s) = tau s, g(q) = tau^2 q reproduces the standard factor.
    static GeneralDeformation standard(double tau) {
        return {[tau](double s) { return tau * s; },
                [tau](double q) { return tau * tau * q; },
                [tau](double) { return tau; },
                [tau](double) { return tau * tau; }};
    }

    /// f(s) = 1 - 1/(1 - alpha s^2), g = 0: the inverse-quadratic factor
    /// 1/(1 - alpha s^2), defined for alpha s^2 < 1.
    static GeneralDeformation inverse_quadratic(double alpha) {
        return {[alpha](double s) {
                    const double w = 1.0 - alpha * s * s;
                    if (w == 0.0) throw DomainError("deformation factor pole at alpha*s^2 = 1");
                    return 1.0 - 1.0 / w;
                },
                [](double) { return 0.0; },
                [alpha](double s) {
                    const double w = 1.0 - alpha * s * s;
                    if (w == 0.0) throw DomainError("deformation factor pole at alpha*s^2 = 1");
                    return -2.0 * alpha * s / (w * w);
                },
                [](double) { return 0.0; }};
    }
};

/// 1 - f(s) + g(s^2); throws DomainError when the result is not positive,
/// because the algebra (and the integration measure) degenerates there.
inline double general_deformation_factor(double x_norm, const GeneralDeformation& d) {
    const double val = 1.0 - d.f(x_norm) + d.g(x_norm * x_norm);
    if (!std::isfinite(val)) throw NonFiniteError("deformation factor is not finite");
    if (val <= 0.0) throw DomainError("deformation factor must stay positive");
    return val;
}

/// Monotone chart theta(x) that flattens the deformed measure:
/// dx / D(x) = hbar * dtheta.  The image of the real line is the open
/// interval (theta_min, theta_max) of length 2 pi / (tau hbar sqrt3),
/// with theta(0) = 0.
class ThetaChart {
public:
    explicit ThetaChart(const DeformationParams& params) : p_(params) {
        p_.validate();
        const double c = 2.0 / (p_.tau * p_.hbar * sqrt3);
        theta_min_ = c * (-pi / 3.0);
        theta_max_ = c * (2.0 * pi / 3.0);
    }

    const DeformationParams& params() const { return p_; }
    double theta_min() const { return theta_min_; }
    double theta_max() const { return theta_max_; }
    double length() const { return theta_max_ - theta_min_; }
    double midpoint() const { return 0.5 * (theta_min_ + theta_max_); }

    /// Numeric routines keep this distance away from either endpoint.
    // Truncation removes 2*guard/length ~ 2e-12 of the measure, far below
    // every stated tolerance, while keeping tan() well away from its pole.
    double guard() const { return 1e-12 * length(); }

    double theta_of_x(double x) const {
        const double u = (2.0 * p_.tau * x - 1.0) / sqrt3;
        return (2.0 / (p_.tau * p_.hbar * sqrt3)) * (std::atan(u) + pi / 6.0);
    }

    /// Inverse chart; defined on the open interval only.
    double x_of_theta(double theta) const {
        if (!(theta > theta_min_) || !(theta < theta_max_))
            throw ChartBoundaryError("theta outside the open chart interval");
        const double a = 0.5 * p_.tau * p_.hbar * sqrt3 * theta - pi / 6.0;
        return (1.0 + sqrt3 * std::tan(a)) / (2.0 * p_.tau);
    }

    /// (theta, theta', theta'') at x, by jet arithmetic through atan.
    RJet theta_jet(double x) const {
        const double t = p_.tau;
        const RJet u = (2.0 * t * jet_seed(x) - 1.0) / sqrt3;
        return (2.0 / (t * p_.hbar * sqrt3)) * (jet_atan(u) + pi / 6.0);
    }

    /// (x, dx/dtheta, d2x/dtheta2) at theta, by jet arithmetic through tan.
    RJet x_jet_of_theta(double theta) const {
        if (!(theta > theta_min_) || !(theta < theta_max_))
            throw ChartBoundaryError("theta outside the open chart interval");
        const double t = p_.tau;
        const RJet a = 0.5 * t * p_.hbar * sqrt3 * jet_seed(theta) - pi / 6.0;
        return (1.0 + sqrt3 * jet_tan(a)) / (2.0 * t);
    }

private:
    DeformationParams p_;
    double theta_min_;
    double theta_max_;
};

} // namespace maxlenqm
