#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "ndim.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "states.hpp"
#include "transforms.hpp"
#include "uncertainty.hpp"
#include "wavefunction.hpp"

namespace maxlenqm {

/// One line of the invariant table.  Scored checks decide the exit code;
/// informational lines document landmark values without being able to
/// fail the run.
struct CheckResult {
    std::string name;
    bool scored = true;
    bool pass = true;
    double value = 0.0;     // measured deviation (check-specific normalization)
    double threshold = 0.0; // pass iff value <= threshold
    std::string detail;
};

struct CheckConfig {
    DeformationParams params;
    int panels = 256;
    int order = 16;
    double eta_max_mult = 40.0;
    double eta_step_div = 8.0;
    std::map<std::string, double> tol_overrides;
};

inline bool all_scored_pass(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return !r.scored || r.pass; });
}

namespace check_detail {

/// Adaptive Simpson on a plain dx interval - the independent flat-measure
/// cross-oracle (deliberately not the Gauss-Legendre machinery under test).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double eps,
            int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double h = hi - lo;
        const double whole = h / 6.0 * (flo + 4.0 * fmid + fhi);
        const double left = h / 12.0 * (flo + 4.0 * flm + fmid);
        const double right = h / 12.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, 0.5 * eps, d - 1) +
               rec(mid, hi, fmid, frm, fhi, 0.5 * eps, d - 1);
    };
    return rec(a, b, fa, fm, fb, tol, depth);
}

/// Random smooth boundary-vanishing state for property sweeps.
inline WaveFunction random_hermite(std::mt19937_64& rng, const ThetaChart& chart,
                                   const QuadratureGrid& grid, int k_max = 4) {
    std::uniform_int_distribution<int> kd(0, k_max);
    const double len = chart.length();
    std::uniform_real_distribution<double> sd(len / 18.0, len / 14.0);
    std::uniform_real_distribution<double> cd(chart.midpoint() - len / 24.0,
                                              chart.midpoint() + len / 24.0);
    return normalize(hermite_state(kd(rng), chart, sd(rng), cd(rng)), grid);
}

inline std::vector<double> theta_samples(std::mt19937_64& rng, const ThetaChart& chart, int n) {
    std::uniform_real_distribution<double> td(chart.theta_min() + 2.0 * chart.guard(),
                                              chart.theta_max() - 2.0 * chart.guard());
    std::vector<double> xs(n);
    for (double& x : xs) x = chart.x_of_theta(td(rng));
    return xs;
}

struct Runner {
    const CheckConfig& cfg;
    std::vector<CheckResult> results;
    std::set<std::string> seen;

    void run(const std::string& name, double default_tol, bool scored,
             const std::function<std::pair<double, std::string>()>& body) {
        CheckResult r;
        r.name = name;
        r.scored = scored;
        r.threshold = default_tol;
        seen.insert(name);
        if (auto it = cfg.tol_overrides.find(name); it != cfg.tol_overrides.end()) {
            if (!scored) throw ConfigError("tolerance override on informational check: " + name);
            r.threshold = it->second;
        }
        try {
            auto [value, detail] = body();
            r.value = value;
            r.detail = detail;
            r.pass = !scored || (std::isfinite(value) && value <= r.threshold);
        } catch (const std::exception& e) {
            r.value = std::numeric_limits<double>::quiet_NaN();
            r.detail = std::string("exception: ") + e.what();
            r.pass = !scored;
        }
        results.push_back(std::move(r));
    }
};

} // namespace check_detail

/// Run the whole invariant battery at the configured resolution and
/// tolerances.  Throws ConfigError for overrides naming no check.
inline std::vector<CheckResult> run_invariant_checks(const CheckConfig& cfg) {
    cfg.params.validate();
    if (cfg.panels < 1 || cfg.order < 2) throw ConfigError("invalid quadrature resolution");
    using check_detail::Runner;
    namespace cd = check_detail;

    const DeformationParams p = cfg.params;
    const ThetaChart chart(p);
    const QuadratureGrid grid = build_grid(chart, cfg.panels, cfg.order);
    const double len = chart.length();
    Runner R{cfg, {}, {}};

    R.run("factor-lower-bound", 1e-12, true, [&] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> xd(-50.0 / p.tau, 50.0 / p.tau);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i)
            worst = std::max(worst, 0.75 - deformation_factor(xd(rng), p));
        worst = std::max(worst, std::abs(deformation_factor(0.5 / p.tau, p) - 0.75));
        return std::pair{std::max(worst, 0.0),
                         std::string("min 3/4 attained only at x = 1/(2 tau)")};
    });

    R.run("chart-jacobian", 1e-12, true, [&] {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> xd(-100.0 / p.tau, 100.0 / p.tau);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = xd(rng);
            const RJet th = chart.theta_jet(x);
            worst = std::max(worst, std::abs(p.hbar * deformation_factor(x, p) * th.d1 - 1.0));
        }
        return std::pair{worst, std::string("hbar D(x) theta'(x) = 1, jet derivative")};
    });

    R.run("chart-roundtrip", 1e-10, true, [&] {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> xd(-100.0 / p.tau, 100.0 / p.tau);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = xd(rng);
            const double x2 = chart.x_of_theta(chart.theta_of_x(x));
            worst = std::max(worst, std::abs(x2 - x) / std::max(std::abs(x), 1.0 / p.tau));
        }
        return std::pair{worst, std::string("x_of_theta(theta_of_x(x)), |x| <= 100/tau")};
    });

    R.run("chart-monotone", 0.0, true, [&] {
        std::mt19937_64 rng(14);
        std::uniform_real_distribution<double> xd(-200.0 / p.tau, 200.0 / p.tau);
        std::vector<double> xs(500);
        for (double& x : xs) x = xd(rng);
        std::sort(xs.begin(), xs.end());
        int violations = 0;
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (xs[i] > xs[i - 1] && !(chart.theta_of_x(xs[i]) > chart.theta_of_x(xs[i - 1])))
                ++violations;
        return std::pair{static_cast<double>(violations),
                         std::string("strict monotonicity violation count")};
    });

    R.run("factor-general-match", 1e-12, true, [&] {
        const GeneralDeformation gd = GeneralDeformation::standard(p.tau);
        std::mt19937_64 rng(15);
        std::uniform_real_distribution<double> xd(-50.0 / p.tau, 50.0 / p.tau);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = xd(rng);
            worst = std::max(worst, std::abs(general_deformation_factor(x, gd) -
                                             deformation_factor(x, p)));
        }
        return std::pair{worst, std::string("f(s)=tau s, g(q)=tau^2 q reproduces the factor")};
    });

    R.run("measure-mass", 1e-10, true, [&] {
        double worst = 0.0;
        for (double tau : {0.01, 0.1, 1.0, 10.0}) {
            DeformationParams q = p;
            q.tau = tau;
            const ThetaChart c(q);
            const QuadratureGrid g = build_grid(c, cfg.panels, cfg.order);
            const double mass = integrate_deformed([](double) { return cplx{1.0, 0.0}; }, g)
                                    .real();
            const double exact = 2.0 * pi / (tau * sqrt3);
            worst = std::max(worst, std::abs(mass - exact) / exact);
        }
        return std::pair{worst, std::string("integral dx/D = 2 pi/(tau sqrt3), tau sweep")};
    });

    R.run("quadrature-convergence", 0.02, true, [&] {
        const double mid = chart.midpoint();
        const double sig = len / 40.0;
        auto f = [&](double x) {
            const double u = (chart.theta_of_x(x) - mid) / sig;
            return cplx{std::exp(-0.5 * u * u), 0.0};
        };
        const double ref = integrate_deformed(f, grid).real();
        const double e1 =
            std::abs(integrate_deformed(f, build_grid(chart, 8, 4)).real() - ref);
        const double e2 =
            std::abs(integrate_deformed(f, build_grid(chart, 16, 4)).real() - ref);
        return std::pair{e2 / std::max(e1, 1e-300),
                         std::string("panel halving at order 4; expect ~2^-8")};
    });

    R.run("quadrature-positivity", 1e-12, true, [&] {
        std::mt19937_64 rng(16);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const WaveFunction a = cd::random_hermite(rng, chart, grid);
            const WaveFunction b = cd::random_hermite(rng, chart, grid);
            const WaveFunction s = superpose({{cplx(cdist(rng), cdist(rng)), a},
                                              {cplx(cdist(rng), cdist(rng)), b}});
            const cplx ip = inner_product(s, s, grid);
            worst = std::max(worst, std::abs(ip.imag()) / std::max(ip.real(), 1e-300));
            worst = std::max(worst, -ip.real());
        }
        return std::pair{worst, std::string("<psi|psi> real and nonnegative")};
    });

    R.run("flat-cross-oracle", 1e-6, true, [&] {
        const double c = 0.5 / p.tau, s = 1.0 / p.tau;
        auto g = [&](double x) { return std::exp(-0.5 * (x - c) * (x - c) / (s * s)); };
        const double via_theta =
            integrate_deformed([&](double x) { return cplx{g(x), 0.0}; }, grid).real();
        const double via_x = cd::adaptive_simpson(
            [&](double x) { return g(x) / deformation_factor(x, p); }, c - 14.0 * s,
            c + 14.0 * s, 1e-12 * s);
        return std::pair{std::abs(via_theta - via_x) / std::abs(via_x),
                         std::string("theta-chart quadrature vs adaptive dx/D rule")};
    });

    R.run("eigenstate-modulus", 1e-12, true, [&] {
        std::mt19937_64 rng(17);
        const double A = eigenstate_amplitude(p);
        const EigenState phi = eigenstate(3.7 * p.tau * p.hbar, p);
        double worst = 0.0;
        for (double x : cd::theta_samples(rng, chart, 1000))
            worst = std::max(worst, std::abs(std::abs(phi.base(x)) - A));
        return std::pair{worst, std::string("plane-wave modulus equals the amplitude")};
    });

    R.run("overlap-kernel", 1e-8, true, [&] {
        std::mt19937_64 rng(18);
        std::uniform_real_distribution<double> ed(-20.0 * p.tau * p.hbar, 20.0 * p.tau * p.hbar);
        std::uniform_real_distribution<double> dd(-10.0 * p.tau * p.hbar, 10.0 * p.tau * p.hbar);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double eta = ed(rng), etap = eta + dd(rng);
            const cplx quad =
                inner_product(eigenstate(etap, p).base, eigenstate(eta, p).base, grid);
            worst = std::max(worst, std::abs(quad - overlap_chart_kernel(eta, etap, p)));
        }
        return std::pair{worst, std::string("quadrature vs exp(i z/6) sinc(z/2) closed form")};
    });

    R.run("overlap-conventional-deviation", 0.0, false, [&] {
        std::mt19937_64 rng(18); // same pairs as overlap-kernel
        std::uniform_real_distribution<double> ed(-20.0 * p.tau * p.hbar, 20.0 * p.tau * p.hbar);
        std::uniform_real_distribution<double> dd(-10.0 * p.tau * p.hbar, 10.0 * p.tau * p.hbar);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double eta = ed(rng), etap = eta + dd(rng);
            const cplx quad =
                inner_product(eigenstate(etap, p).base, eigenstate(eta, p).base, grid);
            worst = std::max(worst, std::abs(quad - overlap_closed_form(eta, etap, p)));
        }
        return std::pair{worst,
                         std::string("informational: distance to the conventionally quoted "
                                     "sinc(z) kernel; see README \"Known discrepancies\"")};
    });

    R.run("overlap-decay", 1e-12, true, [&] {
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double delta = 5.0 * p.tau * p.hbar * std::pow(10.0, i / 20.0);
            const double bound = p.tau * p.hbar * sqrt3 / (2.0 * pi * delta);
            worst = std::max(worst, std::abs(overlap_closed_form(delta, 0.0, p)) / bound - 1.0);
        }
        return std::pair{std::max(worst, 0.0),
                         std::string("closed form bounded by (tau hbar sqrt3)/(2 pi |delta|)")};
    });

    R.run("orthogonality-lattice", 1e-8, true, [&] {
        const double step = p.tau * p.hbar * sqrt3;
        double worst = 0.0;
        for (int n = -10; n <= 10; ++n)
            for (int m = n; m <= 10; ++m) {
                const cplx ip = inner_product(eigenstate(step * m, p).base,
                                              eigenstate(step * n, p).base, grid);
                worst = std::max(worst, std::abs(ip - (m == n ? 1.0 : 0.0)));
            }
        return std::pair{worst, std::string("Kronecker on the lattice with spacing "
                                            "tau hbar sqrt3")};
    });

    R.run("orthogonality-half-lattice-deviation", 0.0, false, [&] {
        double worst = 0.0;
        for (int n = -6; n <= 6; ++n)
            for (int m = n; m <= 6; ++m) {
                const cplx ip = inner_product(eigenstate(lattice_eta(m, p), p).base,
                                              eigenstate(lattice_eta(n, p), p).base, grid);
                worst = std::max(worst, std::abs(ip - (m == n ? 1.0 : 0.0)));
            }
        return std::pair{worst,
                         std::string("informational: on the half-spacing lattice odd "
                                     "separations reach 2/pi; see README")};
    });

    R.run("kinetic-energy", 1e-8, true, [&] {
        double worst = 0.0;
        for (int n = -10; n <= 10; ++n) {
            const double eta = lattice_eta(n, p);
            const double exact = eta * eta / (2.0 * p.mass);
            const double got = kinetic_energy(eta, grid);
            worst = std::max(worst, std::abs(got - exact) /
                                        std::max(exact, p.tau * p.hbar * p.tau * p.hbar));
        }
        return std::pair{worst, std::string("<phi|P^2|phi>/(2m) = eta^2/(2m) on the lattice")};
    });

    R.run("eigenrelation", 1e-10, true, [&] {
        std::mt19937_64 rng(19);
        const std::vector<double> xs = cd::theta_samples(rng, chart, 200);
        const double A = eigenstate_amplitude(p);
        double worst = 0.0;
        for (int n = -10; n <= 10; ++n) {
            const double eta = lattice_eta(n, p);
            const WaveFunction phi = eigenstate(eta, p).base;
            const WaveFunction Pphi = apply_P(phi, p);
            const double scale = (std::abs(eta) + p.tau * p.hbar) * A;
            for (double x : xs)
                worst = std::max(worst, std::abs(Pphi(x) - eta * phi(x)) / scale);
        }
        return std::pair{worst, std::string("apply_P(phi_eta) = eta phi_eta pointwise")};
    });

    R.run("commutator-residual", 1e-10, true, [&] {
        std::mt19937_64 rng(20);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const WaveFunction psi = cd::random_hermite(rng, chart, grid);
            for (double x : cd::theta_samples(rng, chart, 40))
                worst = std::max(worst, std::abs(commutator_residual(psi, p)(x)));
        }
        return std::pair{worst, std::string("(XP - PX - i hbar D) psi, normalized states")};
    });

    R.run("operator-linearity", 1e-12, true, [&] {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const WaveFunction psi = cd::random_hermite(rng, chart, grid);
        const WaveFunction phi = cd::random_hermite(rng, chart, grid);
        const cplx a(cdist(rng), cdist(rng)), b(cdist(rng), cdist(rng));
        const WaveFunction lhs = apply_P(superpose({{a, psi}, {b, phi}}), p);
        const WaveFunction pp = apply_P(psi, p), pf = apply_P(phi, p);
        double worst = 0.0;
        for (double x : cd::theta_samples(rng, chart, 100))
            worst = std::max(worst, std::abs(lhs(x) - (a * pp(x) + b * pf(x))));
        return std::pair{worst, std::string("apply_P(a psi + b phi) = a P psi + b P phi")};
    });

    R.run("flat-adjoint-pointwise", 1e-12, true, [&] {
        std::mt19937_64 rng(22);
        const WaveFunction psi = cd::random_hermite(rng, chart, grid);
        const WaveFunction dag = apply_P_dagger_flat(psi, p);
        double worst = 0.0;
        for (double x : cd::theta_samples(rng, chart, 200)) {
            const RJet D = deformation_factor_jet(x, p);
            const CJet j = psi.eval_jet(x);
            const cplx rhs = cplx(0.0, -p.hbar) * (D.d1 * j.v + D.v * j.d1);
            worst = std::max(worst, std::abs(dag(x) - rhs));
        }
        return std::pair{worst, std::string("P-dagger(flat) = -i hbar d/dx (D psi), two routes")};
    });

    R.run("tau-continuity", 1e-4, true, [&] {
        DeformationParams q = p;
        q.tau = 1e-6;
        double worst = 0.0;
        for (int k = 0; k <= 2; ++k) {
            WaveFunction psi{[k](double x) -> CJet {
                                 RJet u = 0.5 * jet_seed(x);
                                 RJet h{1.0, 0.0, 0.0}, hm{0.0, 0.0, 0.0};
                                 for (int m = 0; m < k; ++m) {
                                     const RJet hp = 2.0 * (u * h) - 2.0 * double(m) * hm;
                                     hm = h;
                                     h = hp;
                                 }
                                 return jet_complex(h * jet_exp(-0.5 * (u * u)));
                             },
                             2, "hermite"};
            const WaveFunction Pp = apply_P(psi, q);
            for (int i = -40; i <= 40; ++i) {
                const double x = 0.2 * i;
                const CJet j = psi.eval_jet(x);
                worst = std::max(worst, std::abs(Pp(x) - cplx(0.0, -q.hbar) * j.d1));
            }
        }
        return std::pair{worst, std::string("P at tau=1e-6 vs -i hbar d/dx; deviation is "
                                            "O(tau) on bounded states")};
    });

    R.run("gup-margin", 1e-9, true, [&] {
        std::mt19937_64 rng(23);
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            const WaveFunction psi = cd::random_hermite(rng, chart, grid, 5);
            const UncertaintyReport rep = moments(psi, grid);
            worst = std::max(worst, -rep.margin);
        }
        return std::pair{std::max(worst, 0.0),
                         std::string("dX dP >= rhs for random normalized states")};
    });

    R.run("gup-vieta", 1e-10, true, [&] {
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double dp = p.hbar * p.tau * (1.0 + i);
            const DeltaXBranches br = delta_x_branches(dp, 0.0, p);
            if (!br.real_solutions) return std::pair{1.0, std::string("missing real branches")};
            worst = std::max(worst, std::abs(br.lower * br.upper * p.tau * p.tau - 1.0));
        }
        return std::pair{worst, std::string("branch product = 1/tau^2 at <X> = 0 (Vieta)")};
    });

    R.run("gup-extremal-scan", 1e-6, true, [&] {
        double best = std::numeric_limits<double>::infinity();
        double arg = 0.0;
        const int N = 20000;
        for (int i = 0; i <= N; ++i) {
            const double dx = 0.01 / p.tau * std::pow(1e4, double(i) / N);
            const double need = gup_rhs(0.0, dx * dx, p) / dx;
            if (need < best) {
                best = need;
                arg = dx;
            }
        }
        const double vdev = std::abs(best - p.hbar * p.tau) / (p.hbar * p.tau);
        return std::pair{vdev, "dense scan: min of required dP at dX*tau = " +
                                   std::to_string(arg * p.tau)};
    });

    R.run("gup-report-consistency", 0.0, true, [&] {
        std::mt19937_64 rng(24);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const WaveFunction psi = cd::random_hermite(rng, chart, grid);
            const UncertaintyReport rep = moments(psi, grid);
            worst = std::max(worst, std::abs(gup_rhs(rep.mean_x, rep.mean_x2, p) - rep.gup_rhs));
        }
        return std::pair{worst, std::string("gup_rhs recomputed from reported moments, "
                                            "bitwise")};
    });

    R.run("extremal-double-root", 1e-12, true, [&] {
        const auto [dx_max, dp_min] = extremal_uncertainties(p);
        const DeltaXBranches br = delta_x_branches(p.hbar * p.tau, 0.0, p);
        if (!br.real_solutions) return std::pair{1.0, std::string("tangency point lost")};
        const double worst = std::max(std::abs(br.lower - dx_max), std::abs(br.upper - dx_max)) *
                             p.tau;
        return std::pair{worst, "double root at dP = hbar tau; dP_min = " +
                                    std::to_string(dp_min)};
    });

    // --- transform block ---
    const EtaGrid eta_grid{cfg.eta_max_mult * p.tau * p.hbar,
                           p.tau * p.hbar * sqrt3 / cfg.eta_step_div};

    R.run("roundtrip-error", 1e-6, true, [&] {
        double worst = 0.0;
        for (int k = 0; k <= 2; ++k) {
            const WaveFunction psi =
                normalize(hermite_state(k, chart, len / 16.0, chart.midpoint()), grid);
            const QuasiMomentumSamples s = to_quasi_momentum(psi, eta_grid, grid);
            worst = std::max(worst, roundtrip_error(psi, s, grid));
        }
        return std::pair{worst, std::string("L2 reconstruction error, three smooth states")};
    });

    R.run("roundtrip-monotone", 0.0, true, [&] {
        const WaveFunction psi =
            normalize(hermite_state(0, chart, len / 16.0, chart.midpoint()), grid);
        double prev = std::numeric_limits<double>::infinity();
        double worst = 0.0;
        std::string ladder;
        for (double mult : {5.0, 10.0, 20.0, 40.0}) {
            const EtaGrid eg{mult * p.tau * p.hbar, eta_grid.eta_step};
            const double err = roundtrip_error(psi, to_quasi_momentum(psi, eg, grid), grid);
            worst = std::max(worst, err - prev);
            prev = err;
            ladder += (ladder.empty() ? "" : " -> ") + std::to_string(err);
        }
        return std::pair{std::max(worst, 0.0), "errors " + ladder};
    });

    R.run("forward-kronecker", 1e-8, true, [&] {
        const double step = p.tau * p.hbar * sqrt3;
        const EtaGrid eg{10.0 * step, step};
        const double eta0 = 2.0 * step;
        const QuasiMomentumSamples s = to_quasi_momentum(eigenstate(eta0, p).base, eg, grid);
        double worst = 0.0;
        for (std::size_t k = 0; k < s.etas.size(); ++k) {
            const double expect = std::abs(s.etas[k] - eta0) < 0.5 * step ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(s.values[k] - expect));
        }
        return std::pair{worst, std::string("projection of a lattice eigenstate is a "
                                            "Kronecker comb")};
    });

    R.run("parseval", 1e-4, true, [&] {
        double worst = 0.0;
        for (double tau : {0.1, 1.0}) {
            DeformationParams q = p;
            q.tau = tau;
            const ThetaChart c(q);
            const QuadratureGrid g = build_grid(c, cfg.panels, cfg.order);
            const WaveFunction psi =
                normalize(hermite_state(0, c, c.length() / 16.0, c.midpoint()), g);
            const EtaGrid eg{cfg.eta_max_mult * tau * q.hbar,
                             tau * q.hbar * sqrt3 / cfg.eta_step_div};
            const double f = parseval_factor(to_quasi_momentum(psi, eg, g), psi, g);
            worst = std::max(worst, std::abs(f / (sqrt3 * tau * q.hbar) - 1.0));
        }
        return std::pair{worst, std::string("sum dEta |psi|^2 / <psi|psi> -> sqrt3 tau hbar")};
    });

    R.run("transform-linearity", 1e-12, true, [&] {
        std::mt19937_64 rng(25);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const WaveFunction psi = cd::random_hermite(rng, chart, grid);
        const WaveFunction phi = cd::random_hermite(rng, chart, grid);
        const cplx a(cdist(rng), cdist(rng)), b(cdist(rng), cdist(rng));
        const QuasiMomentumSamples sum =
            to_quasi_momentum(superpose({{a, psi}, {b, phi}}), eta_grid, grid);
        const QuasiMomentumSamples sp = to_quasi_momentum(psi, eta_grid, grid);
        const QuasiMomentumSamples sf = to_quasi_momentum(phi, eta_grid, grid);
        double worst = 0.0;
        for (std::size_t k = 0; k < sum.values.size(); ++k)
            worst = std::max(worst,
                             std::abs(sum.values[k] - (a * sp.values[k] + b * sf.values[k])));
        return std::pair{worst, std::string("forward transform is linear")};
    });

    R.run("xquasi-conjugation", 1e-6, true, [&] {
        const WaveFunction psi =
            normalize(hermite_state(1, chart, len / 16.0, chart.midpoint()), grid);
        const QuasiMomentumSamples s = to_quasi_momentum(psi, eta_grid, grid);
        const QuasiMomentumSamples lhs = apply_X_quasi(s, grid);
        const QuasiMomentumSamples rhs = to_quasi_momentum(apply_X(psi), eta_grid, grid);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < lhs.values.size(); ++k) {
            num += std::norm(lhs.values[k] - rhs.values[k]);
            den += std::norm(rhs.values[k]);
        }
        return std::pair{std::sqrt(num / std::max(den, 1e-300)),
                         std::string("X via quasi-momentum conjugation vs X then project")};
    });

    // --- n-dim block ---
    const auto nd_points = [&](int dim, unsigned seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> mag(0.3 / p.tau, 3.0 / p.tau);
        std::uniform_int_distribution<int> sign(0, 1);
        std::vector<std::vector<double>> pts(50, std::vector<double>(dim));
        for (auto& pt : pts)
            for (double& c : pt) c = (sign(rng) ? 1.0 : -1.0) * mag(rng);
        return pts;
    };
    const auto nd_state = [&](const NDimParams& nd) {
        std::vector<int> ks(nd.dim);
        std::vector<double> sig(nd.dim), cen(nd.dim), ang;
        for (int d = 0; d < nd.dim; ++d) {
            ks[d] = d % 3;
            sig[d] = (1.1 + 0.2 * d) / p.tau;
            cen[d] = (0.3 - 0.25 * d) / p.tau;
            if (d + 1 < nd.dim) ang.push_back(0.25 + 0.1 * d);
        }
        return ndim_test_state(nd, ks, sig, cen, ang);
    };

    R.run("ndim-xx-commute", 1e-12, true, [&] {
        double worst = 0.0;
        for (int dim : {2, 3}) {
            NDimParams nd{dim, p, NormKind::l1, std::nullopt};
            const NDimWaveFunction psi = nd_state(nd);
            const NDimWaveFunction c = nd_subtract(apply_X_i(0, apply_X_i(1, psi, nd), nd),
                                                   apply_X_i(1, apply_X_i(0, psi, nd), nd), nd);
            for (const auto& pt : nd_points(dim, 31))
                worst = std::max(worst, std::abs(c.eval_jet(pt).v));
        }
        return std::pair{worst, std::string("[X_i, X_j] psi; residual is multiplication "
                                            "reassociation roundoff only")};
    });

    R.run("ndim-xp-algebra", 1e-10, true, [&] {
        double worst = 0.0;
        for (int dim : {2, 3}) {
            for (NormKind kind : {NormKind::l1, NormKind::euclidean}) {
                NDimParams nd{dim, p, kind, std::nullopt};
                const NDimWaveFunction psi = nd_state(nd);
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        const NDimWaveFunction c = commutator_XP(i, j, psi, nd);
                        for (const auto& pt : nd_points(dim, 32)) {
                            const cplx expect =
                                i == j ? cplx(0.0, p.hbar) * deformation_factor_ndim(pt, nd) *
                                             psi(pt)
                                       : cplx{};
                            worst = std::max(worst, std::abs(c(pt) - expect));
                        }
                    }
            }
        }
        return std::pair{worst, std::string("[X_i, P_j] = i hbar delta_ij D_n pointwise")};
    });

    R.run("ndim-pp-antisymmetry", 0.0, true, [&] {
        NDimParams nd{2, p, NormKind::euclidean, std::nullopt};
        const NDimWaveFunction psi = nd_state(nd);
        const NDimWaveFunction a = commutator_PP_direct(0, 1, psi, nd);
        const NDimWaveFunction b = commutator_PP_direct(1, 0, psi, nd);
        double worst = 0.0;
        for (const auto& pt : nd_points(2, 33))
            worst = std::max(worst, std::abs(a(pt) + b(pt)));
        return std::pair{worst, std::string("direct(i,j) + direct(j,i) = 0 exactly")};
    });

    R.run("ndim-pp-closure", 1e-6, true, [&] {
        double worst = 0.0;
        for (int dim : {2, 3}) {
            for (NormKind kind : {NormKind::l1, NormKind::euclidean}) {
                NDimParams nd{dim, p, kind, std::nullopt};
                const NDimWaveFunction psi = nd_state(nd);
                const NDimWaveFunction direct = commutator_PP_direct(0, 1, psi, nd);
                const NDimWaveFunction closed = commutator_PP_closed(0, 1, psi, nd);
                double scale = 0.0;
                std::vector<cplx> dv, cv;
                for (const auto& pt : nd_points(dim, 34)) {
                    dv.push_back(direct(pt));
                    cv.push_back(closed(pt));
                    scale = std::max(scale, std::abs(dv.back()));
                }
                for (std::size_t i = 0; i < dv.size(); ++i)
                    worst = std::max(worst, std::abs(dv[i] - cv[i]) / std::max(scale, 1e-300));
            }
        }
        return std::pair{worst, std::string("closed form vs double application, both norms, "
                                            "n = 2 and 3; relative to field scale")};
    });

    R.run("ndim-jacobi", 1e-7, true, [&] {
        NDimParams nd{2, p, NormKind::euclidean, std::nullopt};
        const NDimWaveFunction psi = nd_state(nd);
        const NDimWaveFunction res = jacobi_residual(0, 1, 0, psi, nd);
        double worst = 0.0;
        for (const auto& pt : nd_points(2, 35))
            worst = std::max(worst, std::abs(res(pt)));
        return std::pair{worst, std::string("cyclic commutator sum on test states")};
    });

    R.run("ndim-reduction", 1e-12, true, [&] {
        NDimParams nd{1, p, NormKind::l1, std::nullopt};
        const WaveFunction one = hermite_state(1, chart, len / 16.0, chart.midpoint());
        const NDimWaveFunction lifted{[one](const std::vector<double>& x) -> NDJet {
                                          const CJet j = one.eval_jet(x[0]);
                                          NDJet out(1);
                                          out.v = j.v;
                                          out.grad[0] = j.d1;
                                          out.hess[0] = j.d2;
                                          return out;
                                      },
                                      2};
        const WaveFunction p1 = apply_P(one, p);
        const NDimWaveFunction pn = apply_P_j(0, lifted, nd);
        const WaveFunction x1 = apply_X(one);
        const NDimWaveFunction xn = apply_X_i(0, lifted, nd);
        double worst = 0.0;
        std::mt19937_64 rng(36);
        std::uniform_real_distribution<double> xd(0.1 / p.tau, 50.0 / p.tau);
        for (int i = 0; i < 200; ++i) {
            const double x = xd(rng);
            const std::vector<double> pt{x};
            worst = std::max(worst, std::abs(pn(pt) - p1(x)));
            worst = std::max(worst, std::abs(xn(pt) - x1(x)));
        }
        return std::pair{worst, std::string("dim = 1 operators match the 1-dim module at "
                                            "x > 0")};
    });

    for (const auto& [name, tol] : cfg.tol_overrides)
        if (!R.seen.count(name)) throw ConfigError("unknown tolerance name: " + name);
    return R.results;
}

} // namespace maxlenqm
