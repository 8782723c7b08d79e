// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/servo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oam
{
    double ServoConfig::min_angle() const
    {
        return std::numbers::pi * (pulse_min - pulse_mid) / (pulse_max - pulse_min);
    }

    double ServoConfig::max_angle() const
    {
        return std::numbers::pi * (pulse_max - pulse_mid) / (pulse_max - pulse_min);
    }

    bool ServoConfig::reachable(double angle) const
    {
        // A few ulps of slack so that the end points survive a duty round trip.
        const double slack = 1e-12 * (max_angle() - min_angle());
        return std::isfinite(angle) && angle >= min_angle() - slack && angle <= max_angle() + slack;
    }

    void ServoConfig::validate() const
    {
        if (!(pulse_min < pulse_mid && pulse_mid < pulse_max && pulse_max <= period))
            throw std::domain_error("servo pulses must satisfy p_s < p_0 < p_e <= K");
        if (!(pulse_min > 0.0))
            throw std::domain_error("servo pulse_min must be > 0");
        if (!(accuracy > 0.0) || !std::isfinite(accuracy))
            throw std::domain_error("servo accuracy must be > 0");
    }

    double angle_from_duty(double duty, const ServoConfig &servo)
    {
        servo.validate();
        const double pulse = duty * servo.period;
        const double slack = 1e-12 * servo.period;
        if (!std::isfinite(duty) || pulse < servo.pulse_min - slack || pulse > servo.pulse_max + slack)
            throw std::domain_error("duty cycle outside [p_s/K, p_e/K]");
        return std::numbers::pi / (servo.pulse_max - servo.pulse_min) * (pulse - servo.pulse_mid);
    }

    double duty_from_angle(double angle, const ServoConfig &servo)
    {
        servo.validate();
        if (!servo.reachable(angle))
            throw std::domain_error("angle outside the servo range");
        return (angle * (servo.pulse_max - servo.pulse_min) / std::numbers::pi + servo.pulse_mid) / servo.period;
    }

    Rotation execute_rotation(double target, const ServoConfig &servo)
    {
        servo.validate();
        if (!servo.reachable(target))
            throw std::domain_error("rotation target outside the servo range");
        const double q = std::round(target / servo.accuracy);
        Rotation out;
        out.achieved = q * servo.accuracy;
        out.steps = std::lround(std::abs(q));
        // Rounding can land one notch past the end stop.
        if (out.achieved > servo.max_angle())
        {
            out.achieved -= servo.accuracy;
            --out.steps;
        }
        else if (out.achieved < servo.min_angle())
        {
            out.achieved += servo.accuracy;
            --out.steps;
        }
        return out;
    }
}
