// SPDX-License-Identifier: Apache-2.0
//
// Receive-side beam steering: electronic-only (EO), the mechanical pitch/yaw
// step F1 with its electronic trim E1, the mechanical roll F2 with its
// adjustment E2, and the full hybrid pipeline.

#pragma once

#include "oamsteer/channel.hpp"
#include "oamsteer/servo.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace oam
{
    struct SaParams;

    struct ResidualPose
    {
        double gamma_bar = 0.0; // gamma - gamma_hat
        double psi_bar = 0.0;   // psi - psi_hat
    };

    struct MechanicalCommand
    {
        double yaw_cmd = 0.0;   // gamma_hat
        double pitch_cmd = 0.0; // psi_hat
        double roll_cmd = 0.0;  // theta*
    };

    // W_m = k_p R_r (sin theta_m sin psi cos gamma - cos theta_m sin gamma)
    SteeringPhases phases_eo(std::size_t p, double psi, double gamma, const LinkConfig &cfg);

    // Same formula with the residual angles.
    SteeringPhases phases_e1(std::size_t p, const ResidualPose &residual, const LinkConfig &cfg);

    // 2 k_p R_r sin(theta*/2) (cos gb cos(theta*/2 + theta_m) sin pb + sin gb sin(theta*/2 + theta_m))
    SteeringPhases phases_e2(std::size_t p, const ResidualPose &residual, double theta_star, const LinkConfig &cfg);

    // phases_e1 + phases_e2
    SteeringPhases combined_e(std::size_t p, const ResidualPose &residual, double theta_star, const LinkConfig &cfg);

    struct PitchYawOutcome
    {
        ResidualPose residual;
        std::vector<ChannelMatrix> channels; // H_F1(p)
    };

    // Applies the command as given. Throws std::domain_error if a command lies
    // outside the servo range or leaves a residual with |angle| >= pi/2.
    PitchYawOutcome mechanical_pitch_yaw(const Pose &pose, const MechanicalCommand &command, const LinkConfig &cfg,
                                         const ServoConfig &servo = {});

    // H_F(p) after rolling the residual-misaligned array by theta_star.
    std::vector<ChannelMatrix> mechanical_roll(const ResidualPose &residual, double theta_star, const LinkConfig &cfg);

    // N eta(p) sum_{delta=1..N} exp(i (2 pi delta / N - theta) l + i S cos(2 pi delta / N - theta))
    cdouble closed_form_diag(std::size_t p, int mode, double theta, const LinkConfig &cfg);

    // Diagonal entry (u, u) of the aligned or fully steered effective matrix at roll theta.
    // With theta' = theta0 - phi0 + theta the despiralized double sum equals
    // exp(i l theta') * closed_form_diag(theta'); the two differ only by that phase.
    cdouble effective_diag(std::size_t p, int mode, double theta, const LinkConfig &cfg);

    // Estimated (gamma_hat, psi_hat) from the true pose.
    using AoaEstimator = std::function<Pose(const Pose &)>;

    // Truth plus a fixed additive error.
    AoaEstimator aoa_with_error(double gamma_error, double psi_error);

    enum class Ordering
    {
        four_step, // F1, E1, F2, E2
        two_step   // F = F2(F1), B_E = B_E2 (.) B_E1
    };

    struct HybridOutcome
    {
        std::vector<OamMatrix> effective;   // H_H^OAM(p)
        MechanicalCommand command;           // as physically achieved by the servo
        ResidualPose residual;
        std::vector<SteeringPhases> phases;  // combined W_bar + W_hat per subcarrier
        long pitch_yaw_steps = 0;
        long roll_steps = 0;
    };

    // F1 with servo-quantized (gamma_hat, psi_hat), roll angle from optimize_roll,
    // F2 with the servo-quantized roll, then E1 and E2. An empty estimator means
    // perfect angle-of-arrival estimates. The pose must carry no roll
    // (std::domain_error otherwise); roll is the quantity this pipeline chooses.
    HybridOutcome hybrid_pipeline(const Pose &pose, const LinkConfig &cfg, const SaParams &sa,
                                  const ServoConfig &servo = {}, const AoaEstimator &estimator = {},
                                  Ordering ordering = Ordering::two_step);

    // Same pipeline with the roll angle supplied instead of optimized.
    HybridOutcome hybrid_with_roll(const Pose &pose, double theta_star, const LinkConfig &cfg,
                                   const ServoConfig &servo = {}, const AoaEstimator &estimator = {},
                                   Ordering ordering = Ordering::two_step);

    // Electronic-only effective matrices at the given pose. A pose roll shifts
    // the element angles used by both the channel and the steering phases.
    std::vector<OamMatrix> electronic_only(const Pose &pose, const LinkConfig &cfg);

    // Perfectly aligned link rolled by theta, no steering.
    std::vector<OamMatrix> aligned_effective(double theta, const LinkConfig &cfg);

    // One row per (subcarrier, element): subcarrier_hz, element_index (1-based), phase_rad.
    void write_phase_csv(std::ostream &out, const std::vector<SteeringPhases> &phases, const LinkConfig &cfg);
}
