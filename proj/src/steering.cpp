// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/steering.hpp"

#include "oamsteer/csv.hpp"
#include "oamsteer/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace oam
{
    namespace
    {
        SteeringPhases tilt_phases(std::size_t p, double psi, double gamma, const LinkConfig &cfg)
        {
            const double kr = cfg.carriers.wavenumber(p) * cfg.rx.radius;
            const double a = std::sin(psi) * std::cos(gamma), b = std::sin(gamma);
            SteeringPhases out{p, Eigen::VectorXd(cfg.rx.n_elements)};
            for (int m = 0; m < cfg.rx.n_elements; ++m)
            {
                const double th = cfg.rx.element_angle(m);
                out.phases[m] = kr * (std::sin(th) * a - std::cos(th) * b);
            }
            return out;
        }

        Pose residual_state(const ResidualPose &residual, double roll)
        {
            return {residual.gamma_bar, residual.psi_bar, roll};
        }
    }

    SteeringPhases phases_eo(std::size_t p, double psi, double gamma, const LinkConfig &cfg)
    {
        return tilt_phases(p, psi, gamma, cfg);
    }

    SteeringPhases phases_e1(std::size_t p, const ResidualPose &residual, const LinkConfig &cfg)
    {
        return tilt_phases(p, residual.psi_bar, residual.gamma_bar, cfg);
    }

    SteeringPhases phases_e2(std::size_t p, const ResidualPose &residual, double theta_star, const LinkConfig &cfg)
    {
        const double scale = 2.0 * cfg.carriers.wavenumber(p) * cfg.rx.radius * std::sin(theta_star / 2.0);
        const double cg = std::cos(residual.gamma_bar), sg = std::sin(residual.gamma_bar);
        const double sp = std::sin(residual.psi_bar);
        SteeringPhases out{p, Eigen::VectorXd(cfg.rx.n_elements)};
        for (int m = 0; m < cfg.rx.n_elements; ++m)
        {
            const double x = theta_star / 2.0 + cfg.rx.element_angle(m);
            out.phases[m] = scale * (cg * std::cos(x) * sp + sg * std::sin(x));
        }
        return out;
    }

    SteeringPhases combined_e(std::size_t p, const ResidualPose &residual, double theta_star, const LinkConfig &cfg)
    {
        SteeringPhases out = phases_e1(p, residual, cfg);
        out.phases += phases_e2(p, residual, theta_star, cfg).phases;
        return out;
    }

    PitchYawOutcome mechanical_pitch_yaw(const Pose &pose, const MechanicalCommand &command, const LinkConfig &cfg,
                                         const ServoConfig &servo)
    {
        if (!servo.reachable(command.yaw_cmd) || !servo.reachable(command.pitch_cmd))
            throw std::domain_error("pitch/yaw command outside the servo range");
        PitchYawOutcome out;
        out.residual = {pose.gamma - command.yaw_cmd, pose.psi - command.pitch_cmd};
        const Pose rp = residual_state(out.residual, 0.0);
        rp.validate();
        out.channels = channel_matrices({pose, rp, Stage::after_pitch_yaw}, cfg);
        return out;
    }

    std::vector<ChannelMatrix> mechanical_roll(const ResidualPose &residual, double theta_star, const LinkConfig &cfg)
    {
        const Pose rp = residual_state(residual, theta_star);
        rp.validate();
        return channel_matrices({Pose{}, rp, Stage::after_roll}, cfg);
    }

    cdouble closed_form_diag(std::size_t p, int mode, double theta, const LinkConfig &cfg)
    {
        const int n = cfg.rx.n_elements;
        const double s = cfg.coupling(p);
        cdouble sum = 0.0;
        for (int delta = 1; delta <= n; ++delta)
        {
            const double x = 2.0 * std::numbers::pi * delta / n - theta;
            sum += std::polar(1.0, x * mode + s * std::cos(x));
        }
        return double(n) * cfg.eta(p) * sum;
    }

    cdouble effective_diag(std::size_t p, int mode, double theta, const LinkConfig &cfg)
    {
        const double shifted = cfg.rx.initial_angle - cfg.tx.initial_angle + theta;
        return std::polar(1.0, mode * shifted) * closed_form_diag(p, mode, shifted, cfg);
    }

    AoaEstimator aoa_with_error(double gamma_error, double psi_error)
    {
        return [=](const Pose &truth) {
            return Pose{truth.gamma + gamma_error, truth.psi + psi_error, truth.roll};
        };
    }

    HybridOutcome hybrid_with_roll(const Pose &pose, double theta_star, const LinkConfig &cfg,
                                   const ServoConfig &servo, const AoaEstimator &estimator, Ordering ordering)
    {
        pose.validate();
        if (pose.roll != 0.0)
            throw std::domain_error("hybrid steering expects a pose without roll");
        const Pose estimate = estimator ? estimator(pose) : pose;
        const Rotation yaw = execute_rotation(estimate.gamma, servo);
        const Rotation pitch = execute_rotation(estimate.psi, servo);
        const Rotation roll = execute_rotation(theta_star, servo);

        HybridOutcome out;
        out.command = {yaw.achieved, pitch.achieved, roll.achieved};
        out.pitch_yaw_steps = yaw.steps + pitch.steps;
        out.roll_steps = roll.steps;

        const PitchYawOutcome f1 = mechanical_pitch_yaw(pose, out.command, cfg, servo);
        out.residual = f1.residual;
        const std::vector<ChannelMatrix> rolled = mechanical_roll(out.residual, roll.achieved, cfg);

        const int n = cfg.rx.n_elements;
        const CMatrix spiral = partial_dft(cfg.modes, n).adjoint();
        for (std::size_t p = 0; p < rolled.size(); ++p)
        {
            out.phases.push_back(combined_e(p, out.residual, roll.achieved, cfg));
            if (ordering == Ordering::two_step)
            {
                out.effective.push_back(oam_effective(rolled[p], cfg.modes, out.phases.back()));
                continue;
            }
            // E1 is set up on the F1 channel before the roll, E2 is folded in afterwards.
            const CMatrix after_e1 = partial_dft(cfg.modes, n) * phases_e1(p, out.residual, cfg).weights().asDiagonal();
            const CMatrix after_e2 =
                after_e1 * phases_e2(p, out.residual, roll.achieved, cfg).weights().asDiagonal();
            out.effective.push_back({after_e2 * rolled[p].h * spiral});
        }
        return out;
    }

    HybridOutcome hybrid_pipeline(const Pose &pose, const LinkConfig &cfg, const SaParams &sa,
                                  const ServoConfig &servo, const AoaEstimator &estimator, Ordering ordering)
    {
        const SaResult roll = optimize_roll(cfg, sa);
        return hybrid_with_roll(pose, roll.theta_star, cfg, servo, estimator, ordering);
    }

    std::vector<OamMatrix> electronic_only(const Pose &pose, const LinkConfig &cfg)
    {
        pose.validate();
        std::vector<OamMatrix> out;
        const ChannelState state{pose, std::nullopt, Stage::initial};
        LinkConfig rolled = cfg;
        rolled.rx.initial_angle += pose.roll;
        for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
            out.push_back(
                oam_effective(channel_matrix(p, state, cfg), cfg.modes, phases_eo(p, pose.psi, pose.gamma, rolled)));
        return out;
    }

    std::vector<OamMatrix> aligned_effective(double theta, const LinkConfig &cfg)
    {
        std::vector<OamMatrix> out;
        for (const ChannelMatrix &h : mechanical_roll({}, theta, cfg))
            out.push_back(oam_effective(h, cfg.modes));
        return out;
    }

    void write_phase_csv(std::ostream &out, const std::vector<SteeringPhases> &phases, const LinkConfig &cfg)
    {
        CsvWriter csv(out);
        csv.header({"subcarrier_hz", "element_index", "phase_rad"});
        for (const SteeringPhases &s : phases)
            for (Eigen::Index m = 0; m < s.phases.size(); ++m)
                csv.row({format_number(cfg.carriers.frequencies.at(s.subcarrier)), format_number((long long)(m + 1)),
                         format_number(s.phases[m])});
    }
}
