// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsteer/complexity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace oam;

TEST_CASE("default parameters by hand")
{
    const ComplexityParams p;
    const HybridCost h = cost_hybrid(p);
    CHECK(h.coarse_aoa == 4096.0);
    CHECK(h.fine_aoa == 262144.0);
    CHECK(h.electronic == 7200.0);
    CHECK(h.mech_pitch_yaw == doctest::Approx(400.0));
    CHECK(h.mech_roll == doctest::Approx(100.0 / 3.0));
    CHECK(h.annealing == doctest::Approx(20 * std::log(1e-5) / std::log(0.9)));
    const double ratio = complexity_ratio(p);
    MESSAGE("ratio at defaults: " << ratio);
    CHECK(ratio >= 1.009);
    CHECK(ratio <= 1.026);
    CHECK(ratio == doctest::Approx(1 + 4096.0 / 262144.0).epsilon(0.01));
}

TEST_CASE("degenerate collapse")
{
    ComplexityParams p;
    p.p_coarse = p.p_fine;
    p.u_coarse = p.u_fine;
    p.psi_hat = p.gamma_hat = p.theta_star = 0.0;
    p.inner_iters = 0;
    CHECK(cost_hybrid(p).total() == 2.0 * 262144.0 + 8.0 * 9.0 * 100.0);
}

TEST_CASE("electronic term scaling and unit case")
{
    ComplexityParams p;
    const double base = cost_electronic(p).electronic;
    p.n_elements *= 2;
    CHECK(cost_electronic(p).electronic == 4.0 * base);

    ComplexityParams unit;
    unit.p_fine = unit.u_fine = unit.p_coarse = unit.u_coarse = 1;
    unit.p_data = unit.u_data = unit.n_elements = 1;
    CHECK(cost_electronic(unit).total() == 2.0);
}

TEST_CASE("sweep approaches 1 and stays in the 1.009-1.026 band")
{
    const auto rows = complexity_sweep({}, 8, 32, 4, 16);
    REQUIRE(rows.size() == 25 * 13);
    double lo = 1e9, hi = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const ComplexityRow &r = rows[i];
        CHECK(r.hybrid >= r.electronic);
        CHECK(r.ratio == r.hybrid / r.electronic);
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
        if (r.p_data > 4)
            CHECK(r.ratio < rows[i - 1].ratio);
        if (r.n_elements > 8)
            CHECK(r.ratio < rows[i - 13].ratio);
    }
    MESSAGE("sweep ratio range " << lo << " .. " << hi);
    CHECK(lo >= 1.009);
    CHECK(hi <= 1.026);
}

TEST_CASE("validation and export")
{
    ComplexityParams bad;
    bad.p_coarse = 9;
    CHECK_THROWS_AS(cost_hybrid(bad), std::domain_error);
    bad = {};
    bad.nu = 0.0;
    CHECK_THROWS_AS(cost_hybrid(bad), std::domain_error);
    CHECK_THROWS_AS(complexity_sweep({}, 5, 4, 1, 1), std::domain_error);

    std::ostringstream out;
    write_complexity_csv(out, complexity_sweep({}, 10, 10, 8, 8));
    CHECK(out.str().starts_with("N,P,cost_hybrid,cost_electronic,ratio\r\n10,8,"));
}
