// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oam
{
    namespace
    {
        constexpr double half_pi = std::numbers::pi / 2.0;

        void require_open_half_pi(double angle, const char *name)
        {
            if (!std::isfinite(angle) || std::abs(angle) >= half_pi)
                throw std::domain_error(std::string(name) + " must lie in (-pi/2, pi/2)");
        }
    }

    double Pose::alpha() const
    {
        return alpha_from(psi, gamma);
    }

    void Pose::validate() const
    {
        require_open_half_pi(gamma, "gamma");
        require_open_half_pi(psi, "psi");
        if (!std::isfinite(roll))
            throw std::domain_error("roll must be finite");
    }

    double ArrayGeometry::element_angle(int m) const
    {
        return 2.0 * std::numbers::pi * m / n_elements + initial_angle;
    }

    void ArrayGeometry::validate() const
    {
        if (n_elements < 1)
            throw std::domain_error("n_elements must be >= 1");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw std::domain_error("radius must be > 0");
        if (!std::isfinite(initial_angle))
            throw std::domain_error("initial_angle must be finite");
    }

    Rot3 rotation_matrix(Axis axis, double angle)
    {
        const double c = std::cos(angle), s = std::sin(angle);
        Rot3 r;
        switch (axis)
        {
        case Axis::pitch:
            r << 1.0, 0.0, 0.0,
                0.0, c, -s,
                0.0, s, c;
            break;
        case Axis::yaw:
            r << c, 0.0, s,
                0.0, 1.0, 0.0,
                -s, 0.0, c;
            break;
        case Axis::roll:
            r << c, -s, 0.0,
                s, c, 0.0,
                0.0, 0.0, 1.0;
            break;
        }
        return r;
    }

    double alpha_from(double psi, double gamma)
    {
        require_open_half_pi(psi, "psi");
        require_open_half_pi(gamma, "gamma");
        // Clamp guards rounding just above 1 for tiny angles.
        return std::acos(std::min(1.0, std::cos(psi) * std::cos(gamma)));
    }

    double psi_from(double alpha, double gamma)
    {
        require_open_half_pi(gamma, "gamma");
        const double ca = std::cos(alpha), cg = std::cos(gamma);
        if (!std::isfinite(alpha) || ca > cg * (1.0 + 1e-15))
            throw std::domain_error("no pitch angle satisfies cos(alpha) = cos(psi) cos(gamma)");
        return std::acos(std::min(1.0, ca / cg));
    }

    double phi_azimuth(double gamma, double psi)
    {
        require_open_half_pi(gamma, "gamma");
        require_open_half_pi(psi, "psi");
        if (gamma == 0.0 && psi == 0.0)
            throw std::domain_error("azimuth is undefined for an aligned array");
        if (gamma == 0.0)
            return half_pi;

        // The arccos form of the azimuth has radicand 4 (sin^2 psi + sin^2 gamma cos^2 psi), so its arccos term
        // equals atan2(|sin gamma|, cos gamma sin psi); this form keeps precision near gamma = 0.
        const double angle = std::atan2(std::abs(std::sin(gamma)), std::cos(gamma) * std::sin(psi));
        return gamma > 0.0 ? half_pi + angle : half_pi - angle;
    }

    StageOrientation stage_orientation(const Pose &pose, const std::optional<Pose> &residual, Stage stage)
    {
        switch (stage)
        {
        case Stage::initial:
            return {pose.gamma, pose.psi, pose.roll};
        case Stage::after_pitch_yaw:
            if (!residual)
                throw std::invalid_argument("stage after_pitch_yaw needs a residual pose");
            return {residual->gamma, residual->psi, 0.0};
        case Stage::after_roll:
            if (!residual)
                throw std::invalid_argument("stage after_roll needs a residual pose");
            return {residual->gamma, residual->psi, residual->roll};
        }
        throw std::invalid_argument("unknown stage");
    }

    Vec3 rx_element_position(int m, const Pose &pose, const std::optional<Pose> &residual, Stage stage,
                             const ArrayGeometry &rx)
    {
        if (m < 0 || m >= rx.n_elements)
            throw std::out_of_range("receive element index out of range");
        const StageOrientation o = stage_orientation(pose, residual, stage);
        const double theta = rx.element_angle(m) + o.roll;
        const double ct = std::cos(theta), st = std::sin(theta);
        const double cg = std::cos(o.gamma), sg = std::sin(o.gamma);
        const double cp = std::cos(o.psi), sp = std::sin(o.psi);
        const double R = rx.radius;
        return {R * ct * cg + R * st * sp * sg,
                R * st * cp,
                R * st * sp * cg - R * ct * sg};
    }

    Vec3 tx_element_position(int n, const ArrayGeometry &tx)
    {
        if (n < 0 || n >= tx.n_elements)
            throw std::out_of_range("transmit element index out of range");
        const double phi = tx.element_angle(n);
        return {tx.radius * std::cos(phi), tx.radius * std::sin(phi), 0.0};
    }

    double distance(int n, int m, const Pose &pose, const std::optional<Pose> &residual, Stage stage,
                    const ArrayGeometry &tx, const ArrayGeometry &rx, double range, DistanceMethod method)
    {
        if (!(range > 0.0))
            throw std::domain_error("range must be > 0");
        const Vec3 t = tx_element_position(n, tx);
        const Vec3 q = rx_element_position(m, pose, residual, stage, rx);

        if (method == DistanceMethod::exact)
            return (q + Vec3(0.0, 0.0, range) - t).norm();

        // r + c - (a x_t + b y_t) / r, i.e. the closed form with R_r R_t / r cross terms
        return range + q.z() - (q.x() * t.x() + q.y() * t.y()) / range;
    }
}
