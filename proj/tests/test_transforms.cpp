#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>

#include "maxlenqm/states.hpp"
#include "maxlenqm/transforms.hpp"
#include "oracles.hpp"

using namespace maxlenqm;

namespace {
const DeformationParams P{0.1, 1.0, 1.0};
const ThetaChart chart_g(P);
const QuadratureGrid grid_g = build_grid(chart_g);

WaveFunction narrow_state(int k) {
    return normalize(hermite_state(k, chart_g, chart_g.length() / 16.0, chart_g.midpoint()),
                     grid_g);
}
} // namespace

TEST_CASE("eta grid layout and validation") {
    const EtaGrid d = EtaGrid::defaults(P);
    CHECK(d.eta_max == Catch::Approx(40.0 * P.tau * P.hbar).epsilon(1e-15));
    CHECK(d.eta_step == Catch::Approx(P.tau * P.hbar * sqrt3 / 8.0).epsilon(1e-15));
    const std::vector<double> etas = d.etas();
    REQUIRE(etas.size() % 2 == 1);
    const std::size_t mid = etas.size() / 2;
    CHECK(etas[mid] == 0.0);
    for (std::size_t i = 0; i < etas.size(); ++i) {
        CHECK(etas[i] == Catch::Approx(-etas[etas.size() - 1 - i]).margin(1e-18));
        if (i) CHECK(etas[i] - etas[i - 1] == Catch::Approx(d.eta_step).epsilon(1e-12));
    }
    CHECK_THROWS_AS((EtaGrid{1.0, 0.0}.etas()), ConfigError);
    CHECK_THROWS_AS((EtaGrid{1.0, -0.2}.etas()), ConfigError);
    CHECK_THROWS_AS((EtaGrid{0.1, 0.2}.etas()), ConfigError);
}

TEST_CASE("forward transform matches the frozen sample") {
    const WaveFunction psi = normalize(hermite_state(0, chart_g), grid_g);
    const EtaGrid eg{2.0 * P.tau * P.hbar, 2.0 * P.tau * P.hbar};
    const QuasiMomentumSamples s = to_quasi_momentum(psi, eg, grid_g);
    REQUIRE(s.etas.size() == 3);
    CHECK(s.etas[2] == Catch::Approx(0.2).epsilon(1e-15));
    CHECK(s.values[2].real() == Catch::Approx(oracle::fwd_re).epsilon(1e-9));
    CHECK(s.values[2].imag() == Catch::Approx(oracle::fwd_im).epsilon(1e-9));
    // projecting on the eigenstate is the same operation
    const cplx proj = inner_product(eigenstate(0.2, P).base, psi, grid_g);
    CHECK(std::abs(s.values[2] - proj) < 1e-12);
}

TEST_CASE("round trip reproduces a well-resolved state") {
    const EtaGrid eg = EtaGrid::defaults(P);
    for (int k = 0; k <= 2; ++k) {
        const double err = roundtrip_error(narrow_state(k), eg, grid_g);
        CHECK(err < 1e-10);
    }
}

TEST_CASE("round-trip error decreases monotonically with the eta range") {
    const WaveFunction psi = narrow_state(0);
    double prev = std::numeric_limits<double>::infinity();
    for (double mult : {5.0, 10.0, 20.0, 40.0}) {
        const EtaGrid eg{mult * P.tau * P.hbar, P.tau * P.hbar * sqrt3 / 8.0};
        const double err = roundtrip_error(psi, eg, grid_g);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("spectral mass obeys the Plancherel constant") {
    const double f = parseval_factor(narrow_state(1), EtaGrid::defaults(P), grid_g);
    CHECK(f == Catch::Approx(sqrt3 * P.tau * P.hbar).epsilon(1e-10));
}

TEST_CASE("reconstruction carries exact jets") {
    const QuasiMomentumSamples s =
        to_quasi_momentum(narrow_state(1), EtaGrid::defaults(P), grid_g);
    const WaveFunction back = reconstruct(s, chart_g);
    CHECK(back.order == 2);
    for (double x : {1.0, 4.0, 7.5}) {
        CHECK(std::abs(back(x) - from_quasi_momentum(s, x, chart_g)) < 1e-14);
        const CJet j = back.eval_jet(x);
        const cplx d1 = oracle::fd_first([&](double y) { return back(y); }, x, 1e-4);
        const cplx d2 = oracle::fd_second([&](double y) { return back(y); }, x, 1e-3);
        CHECK(std::abs(j.d1 - d1) < 1e-6 * std::max(1.0, std::abs(d1)));
        CHECK(std::abs(j.d2 - d2) < 1e-4 * std::max(1.0, std::abs(d2)));
    }
}

TEST_CASE("position operator conjugated into the quasi representation") {
    const WaveFunction psi = narrow_state(0);
    const EtaGrid eg = EtaGrid::defaults(P);
    const QuasiMomentumSamples s = to_quasi_momentum(psi, eg, grid_g);
    const QuasiMomentumSamples lhs = apply_X_quasi(s, grid_g);
    const QuasiMomentumSamples rhs = to_quasi_momentum(apply_X(psi), eg, grid_g);
    REQUIRE(lhs.values.size() == rhs.values.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < lhs.values.size(); ++k) {
        num += std::norm(lhs.values[k] - rhs.values[k]);
        den += std::norm(rhs.values[k]);
    }
    CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("quasi-representation scalar product matches the position pairing") {
    const WaveFunction psi = narrow_state(0);
    const WaveFunction phi = normalize(
        hermite_state(0, chart_g, chart_g.length() / 14.0,
                      chart_g.midpoint() + chart_g.length() / 40.0),
        grid_g);
    const EtaGrid eg = EtaGrid::defaults(P);
    const QuasiMomentumSamples ps = to_quasi_momentum(psi, eg, grid_g);
    const QuasiMomentumSamples fs = to_quasi_momentum(phi, eg, grid_g);
    const cplx spq = scalar_product_quasi(ps, fs, grid_g);
    const cplx ip = inner_product(psi, phi, grid_g);
    CHECK(std::abs(ip) > 0.1);
    CHECK(std::abs(spq - P.tau * ip) < 1e-10 * std::abs(ip));
    // mismatched grids are rejected
    const QuasiMomentumSamples other =
        to_quasi_momentum(psi, EtaGrid{eg.eta_max, 2.0 * eg.eta_step}, grid_g);
    CHECK_THROWS_AS(scalar_product_quasi(ps, other, grid_g), ConfigError);
}

TEST_CASE("eigenstates transform to a Kronecker comb on the orthogonality lattice") {
    const double step = P.tau * P.hbar * sqrt3;
    const EtaGrid eg{5.0 * step, step};
    const EigenState phi = eigenstate(2.0 * step, P);
    const QuasiMomentumSamples s = to_quasi_momentum(phi.base, eg, grid_g);
    for (std::size_t k = 0; k < s.etas.size(); ++k) {
        const double expect = (std::abs(s.etas[k] - 2.0 * step) < 1e-12) ? 1.0 : 0.0;
        CHECK(std::abs(s.values[k] - expect) < 1e-8);
    }
    // a comb reconstructs to a plane wave, whose <X^2> has no finite value
    CHECK_THROWS_AS(apply_X_quasi(s, grid_g), DivergentMomentError);
}

TEST_CASE("forward transform is linear") {
    const WaveFunction a = narrow_state(0);
    const WaveFunction b = narrow_state(2);
    const cplx ca{0.6, 0.1}, cb{-0.2, 0.8};
    const EtaGrid eg{10.0 * P.tau * P.hbar, P.tau * P.hbar * sqrt3 / 4.0};
    const QuasiMomentumSamples sa = to_quasi_momentum(a, eg, grid_g);
    const QuasiMomentumSamples sb = to_quasi_momentum(b, eg, grid_g);
    const QuasiMomentumSamples ss = to_quasi_momentum(superpose({{ca, a}, {cb, b}}), eg, grid_g);
    for (std::size_t k = 0; k < ss.values.size(); ++k) {
        const cplx expect = ca * sa.values[k] + cb * sb.values[k];
        CHECK(std::abs(ss.values[k] - expect) < 1e-12);
    }
}
