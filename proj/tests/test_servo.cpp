// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsteer/geometry.hpp"
#include "oamsteer/servo.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace oam;

TEST_CASE("duty and angle")
{
    const ServoConfig s;
    CHECK(angle_from_duty(s.pulse_mid / s.period, s) == 0.0);
    CHECK(angle_from_duty(s.pulse_max / s.period, s) ==
          doctest::Approx(std::numbers::pi * (s.pulse_max - s.pulse_mid) / (s.pulse_max - s.pulse_min)));
    CHECK(duty_from_angle(0.0, s) == doctest::Approx(s.pulse_mid / s.period).epsilon(1e-15));
    CHECK(duty_from_angle(s.max_angle(), s) == doctest::Approx(s.pulse_max / s.period).epsilon(1e-15));
    CHECK(s.min_angle() == doctest::Approx(-std::numbers::pi / 2));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> any(s.min_angle(), s.max_angle());
    for (int i = 0; i < 1000; ++i)
    {
        const double a = any(rng);
        CHECK(std::abs(angle_from_duty(duty_from_angle(a, s), s) - a) <= 1e-12);
    }
    CHECK_THROWS_AS(angle_from_duty(0.5, s), std::domain_error);
    CHECK_THROWS_AS(duty_from_angle(2.0, s), std::domain_error);

    ServoConfig bad = s;
    bad.pulse_mid = bad.pulse_max;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("rotation quantization")
{
    const ServoConfig s;
    const Rotation zero = execute_rotation(0.0, s);
    CHECK(zero.achieved == 0.0);
    CHECK(zero.steps == 0);

    const Rotation sixty = execute_rotation(60 * deg_to_rad, s);
    CHECK(sixty.steps == 200);
    CHECK(sixty.achieved == doctest::Approx(60 * deg_to_rad).epsilon(1e-14));

    const Rotation odd = execute_rotation(60.1 * deg_to_rad, s);
    CHECK(std::abs(odd.achieved - 60.1 * deg_to_rad) <= 0.15 * deg_to_rad + 1e-15);

    for (double a = s.min_angle(); a <= s.max_angle(); a += 0.00123)
    {
        const Rotation r = execute_rotation(a, s);
        REQUIRE(std::abs(r.achieved - a) <= s.accuracy / 2 * (1 + 1e-12));
        REQUIRE(r.steps == std::lround(std::abs(r.achieved) / s.accuracy));
    }
    // Step count scales linearly with angle.
    for (double a = 1.0; a < 40.0; a += 3.7)
    {
        const long one = execute_rotation(a * deg_to_rad, s).steps;
        const long two = execute_rotation(2 * a * deg_to_rad, s).steps;
        CHECK(std::abs(two - 2 * one) <= 1);
    }
    CHECK_THROWS_AS(execute_rotation(2.0, s), std::domain_error);
}
