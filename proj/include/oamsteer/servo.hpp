// SPDX-License-Identifier: Apache-2.0
//
// PWM servo abstraction: duty cycle <-> angle, potentiometer quantization and a
// step count used by the complexity model. Dynamics are not modelled.

#pragma once

#include <numbers>

namespace oam
{
    struct ServoConfig
    {
        double period = 20e-3;    // K, seconds
        double pulse_min = 1e-3;  // p_s
        double pulse_mid = 1.5e-3; // p_0
        double pulse_max = 2e-3;  // p_e
        double accuracy = 0.3 * std::numbers::pi / 180.0; // nu, radians

        double min_angle() const; // pi (p_s - p_0) / (p_e - p_s)
        double max_angle() const; // pi (p_e - p_0) / (p_e - p_s)
        bool reachable(double angle) const;
        void validate() const; // std::domain_error on p_s < p_0 < p_e <= K or nu > 0 violations
    };

    // theta = pi / (p_e - p_s) * (D K - p_0). Increasing duty means increasing angle.
    double angle_from_duty(double duty, const ServoConfig &servo);
    double duty_from_angle(double angle, const ServoConfig &servo);

    struct Rotation
    {
        double achieved = 0.0; // radians, multiple of nu
        long steps = 0;        // |achieved| / nu
    };

    // Round-to-nearest quantization onto the potentiometer grid.
    // Throws std::domain_error for an unreachable target.
    Rotation execute_rotation(double target, const ServoConfig &servo);
}
