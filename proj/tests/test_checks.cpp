#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>

#include "maxlenqm/checks.hpp"

using namespace maxlenqm;

namespace {
const CheckResult& find(const std::vector<CheckResult>& rs, const std::string& name) {
    const auto it = std::find_if(rs.begin(), rs.end(),
                                 [&](const CheckResult& r) { return r.name == name; });
    REQUIRE(it != rs.end());
    return *it;
}
} // namespace

TEST_CASE("default battery passes every scored invariant") {
    CheckConfig cfg;
    const std::vector<CheckResult> rs = run_invariant_checks(cfg);
    CHECK(rs.size() >= 30);
    for (const CheckResult& r : rs) {
        INFO(r.name << " value=" << r.value << " threshold=" << r.threshold
                    << " detail=" << r.detail);
        if (r.scored) {
            CHECK(r.pass);
            CHECK(std::isfinite(r.value));
        }
    }
    CHECK(all_scored_pass(rs));

    // landmark informational lines
    const CheckResult& conv = find(rs, "overlap-conventional-deviation");
    CHECK_FALSE(conv.scored);
    CHECK(conv.pass); // informational lines can never fail the run
    CHECK(conv.value > 0.05);

    const CheckResult& half = find(rs, "orthogonality-half-lattice-deviation");
    CHECK_FALSE(half.scored);
    CHECK(half.value == Catch::Approx(2.0 / 3.14159265358979323846).epsilon(1e-6));

    // a few scored landmarks are present
    for (const char* name : {"measure-mass", "overlap-kernel", "gup-margin",
                             "roundtrip-error", "ndim-pp-closure", "chart-jacobian"})
        CHECK(find(rs, name).scored);
}

TEST_CASE("battery passes at a strong deformation") {
    CheckConfig cfg;
    cfg.params.tau = 10.0;
    const std::vector<CheckResult> rs = run_invariant_checks(cfg);
    for (const CheckResult& r : rs) {
        INFO(r.name << " value=" << r.value << " threshold=" << r.threshold
                    << " detail=" << r.detail);
        if (r.scored) CHECK(r.pass);
    }
    CHECK(all_scored_pass(rs));
}

TEST_CASE("tolerance overrides tighten individual checks") {
    CheckConfig cfg;
    cfg.tol_overrides["measure-mass"] = 1e-300; // unattainably strict
    const std::vector<CheckResult> rs = run_invariant_checks(cfg);
    const CheckResult& mm = find(rs, "measure-mass");
    CHECK(mm.threshold == 1e-300);
    CHECK_FALSE(mm.pass);
    CHECK_FALSE(all_scored_pass(rs));
    // everything else still passes
    for (const CheckResult& r : rs)
        if (r.scored && r.name != "measure-mass") CHECK(r.pass);
}

TEST_CASE("override validation") {
    CheckConfig unknown;
    unknown.tol_overrides["no-such-check"] = 1.0;
    CHECK_THROWS_AS(run_invariant_checks(unknown), ConfigError);

    CheckConfig info;
    info.tol_overrides["overlap-conventional-deviation"] = 1.0;
    CHECK_THROWS_AS(run_invariant_checks(info), ConfigError);

    CheckConfig bad;
    bad.panels = 0;
    CHECK_THROWS_AS(run_invariant_checks(bad), ConfigError);
    bad.panels = 16;
    bad.order = 1;
    CHECK_THROWS_AS(run_invariant_checks(bad), ConfigError);
    bad.order = 8;
    bad.params.tau = -1.0;
    CHECK_THROWS_AS(run_invariant_checks(bad), ConfigError);
}
