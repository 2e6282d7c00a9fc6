#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "maxlenqm/states.hpp"
#include "maxlenqm/transforms.hpp"
#include "oracles.hpp"

using namespace maxlenqm;

namespace {
const DeformationParams P{0.1, 1.0, 1.0};
const ThetaChart chart_g(P);
const QuadratureGrid grid_g = build_grid(chart_g);
} // namespace

TEST_CASE("eigenstate modulus is the frozen amplitude everywhere") {
    CHECK(eigenstate_amplitude(P) == Catch::Approx(oracle::amplitude).epsilon(1e-15));
    const EigenState phi = eigenstate(0.37, P);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xd(-2.0, 11.0);
    for (int i = 0; i < 50; ++i) {
        const double x = xd(rng);
        CHECK(std::abs(phi.base(x)) ==
              Catch::Approx(eigenstate_amplitude(P)).epsilon(1e-12));
    }
    // unit deformed-measure norm by quadrature
    CHECK(norm(phi.base, grid_g) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenstate overlap by quadrature matches the frozen value") {
    const EigenState a = eigenstate(0.03, P);
    const EigenState b = eigenstate(0.011, P);
    const cplx ip = inner_product(b.base, a.base, grid_g);
    CHECK(ip.real() == Catch::Approx(oracle::overlap_re).epsilon(1e-10));
    CHECK(ip.imag() == Catch::Approx(oracle::overlap_im).epsilon(1e-10));
    // and the closed kernel reproduces the same complex number
    const cplx k = overlap_chart_kernel(0.03, 0.011, P);
    CHECK(k.real() == Catch::Approx(oracle::overlap_re).epsilon(1e-12));
    CHECK(k.imag() == Catch::Approx(oracle::overlap_im).epsilon(1e-12));
}

TEST_CASE("chart kernel tracks quadrature over random eta pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ed(-0.5, 0.5);
    for (int i = 0; i < 25; ++i) {
        const double eta = ed(rng), etap = ed(rng);
        const cplx ip =
            inner_product(eigenstate(etap, P).base, eigenstate(eta, P).base, grid_g);
        const cplx k = overlap_chart_kernel(eta, etap, P);
        CHECK(std::abs(ip - k) < 1e-9);
    }
}

TEST_CASE("conventional sinc kernel: landmarks and its deviation") {
    CHECK(overlap_closed_form(0.0, 0.0, P) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(overlap_closed_form(0.2, 0.2, P) == Catch::Approx(1.0).epsilon(1e-15));
    const double half = lattice_eta(1, P); // tau hbar sqrt3 / 2
    CHECK(half == Catch::Approx(0.5 * P.tau * P.hbar * sqrt3).epsilon(1e-15));
    CHECK(std::abs(overlap_closed_form(half, 0.0, P)) < 1e-15);
    // the actual quadrature overlap at that separation has modulus 2/pi
    const cplx ip = inner_product(eigenstate(0.0, P).base, eigenstate(half, P).base, grid_g);
    CHECK(std::abs(ip) == Catch::Approx(oracle::half_lattice_overlap).epsilon(1e-10));
    CHECK(std::abs(ip) == Catch::Approx(2.0 / pi).epsilon(1e-10));
}

TEST_CASE("orthogonality holds on the full-spacing lattice") {
    // spacing tau hbar sqrt3 = lattice_eta(2n)
    for (int m = -4; m <= 4; ++m)
        for (int n = m; n <= 4; ++n) {
            const cplx ip = inner_product(eigenstate(lattice_eta(2 * m, P), P).base,
                                          eigenstate(lattice_eta(2 * n, P), P).base, grid_g);
            const double expect = (m == n) ? 1.0 : 0.0;
            CHECK(std::abs(ip - expect) < 1e-9);
        }
}

TEST_CASE("kinetic energy of a lattice eigenstate") {
    CHECK(lattice_eta(3, P) == Catch::Approx(oracle::eta3).epsilon(1e-15));
    const double e = kinetic_energy(oracle::eta3, grid_g);
    CHECK(e == Catch::Approx(oracle::energy3).epsilon(1e-8));
    CHECK(e == Catch::Approx(oracle::eta3 * oracle::eta3 / (2.0 * P.mass)).epsilon(1e-8));
}

TEST_CASE("eigenvalue relation P phi = eta phi pointwise") {
    const double eta = 0.21;
    const EigenState phi = eigenstate(eta, P);
    const WaveFunction p_phi = apply_P(phi.base, P);
    for (double x : {-1.0, 0.0, 0.5, 5.0, 9.7}) {
        CHECK(std::abs(p_phi(x) - eta * phi.base(x)) < 1e-12);
    }
}

TEST_CASE("normalization and zero-norm rejection") {
    const WaveFunction raw = hermite_state(2, chart_g);
    const WaveFunction unit = normalize(raw, grid_g);
    CHECK(norm(unit, grid_g) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((normalize(constant_state(cplx{0.0, 0.0}), grid_g)), ZeroNormError);
    CHECK_THROWS_AS(hermite_state(-1, chart_g), ConfigError);
    CHECK_THROWS_AS(hermite_state(0, chart_g, -1.0, 0.0), ConfigError);
}

TEST_CASE("superposition is pointwise linear including jets") {
    const WaveFunction a = hermite_state(0, chart_g);
    const WaveFunction b = hermite_state(3, chart_g);
    const cplx ca{0.3, -0.2}, cb{1.1, 0.7};
    const WaveFunction s = superpose({{ca, a}, {cb, b}});
    CHECK(s.order == 2);
    for (double x : {0.7, 3.0, 6.2}) {
        const CJet ja = a.eval_jet(x), jb = b.eval_jet(x), js = s.eval_jet(x);
        CHECK(std::abs(js.v - (ca * ja.v + cb * jb.v)) < 1e-14);
        CHECK(std::abs(js.d1 - (ca * ja.d1 + cb * jb.d1)) < 1e-13);
        CHECK(std::abs(js.d2 - (ca * ja.d2 + cb * jb.d2)) < 1e-12);
    }
}

TEST_CASE("inner product is hermitian") {
    const WaveFunction a = normalize(hermite_state(1, chart_g), grid_g);
    const EigenState e = eigenstate(0.13, P);
    const cplx ab = inner_product(a, e.base, grid_g);
    const cplx ba = inner_product(e.base, a, grid_g);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-14);
}

TEST_CASE("hermite state jets against finite differences") {
    const WaveFunction psi = hermite_state(2, chart_g, chart_g.length() / 15.0,
                                           chart_g.midpoint() - chart_g.length() / 30.0);
    for (double x : {0.4, 2.0, 5.0, 8.3}) {
        const CJet j = psi.eval_jet(x);
        const cplx d1 = oracle::fd_first([&](double y) { return psi(y); }, x, 1e-4);
        const cplx d2 = oracle::fd_second([&](double y) { return psi(y); }, x, 1e-3);
        CHECK(std::abs(j.d1 - d1) < 1e-7 * std::max(1.0, std::abs(d1)));
        CHECK(std::abs(j.d2 - d2) < 1e-5 * std::max(1.0, std::abs(d2)));
    }
}
