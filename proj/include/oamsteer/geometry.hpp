// SPDX-License-Identifier: Apache-2.0
//
// Coordinate-frame math for a transmit/receive pair of uniform circular arrays.
//
// Frames: the transmit UCA lies in the XOY plane of its own frame with the
// receive UCA centre at (0, 0, r). Receive elements are expressed in a frame
// parallel to the transmit frame and centred on the receive UCA; pitch (psi)
// rotates about X, yaw (gamma) about Y, roll (theta) about the receive boresight.
// Element indices are 0-based in code; index m here is element m+1 in the usual
// 1-based numbering, at angle 2*pi*m/N + initial_angle.

#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <optional>

namespace oam
{
    using Vec3 = Eigen::Vector3d;
    using Rot3 = Eigen::Matrix3d;

    inline constexpr double deg_to_rad = std::numbers::pi / 180.0;

    enum class Axis
    {
        pitch,
        yaw,
        roll
    };

    // Which rotation stage the receive array is in.
    //   initial          original misalignment (gamma, psi) plus pose roll
    //   after_pitch_yaw  residual (gamma_bar, psi_bar) after the first mechanical step
    //   after_roll       residual angles with the receive elements advanced by theta*
    enum class Stage
    {
        initial,
        after_pitch_yaw,
        after_roll
    };

    enum class DistanceMethod
    {
        exact,   // Euclidean norm between element positions
        farfield // first-order expansion in R/r, the basis of every closed form downstream
    };

    // Misalignment of the receive array. Angles in radians.
    struct Pose
    {
        double gamma = 0.0; // yaw, open interval (-pi/2, pi/2)
        double psi = 0.0;   // pitch, open interval (-pi/2, pi/2)
        double roll = 0.0;  // rotation about the receive boresight

        // Elevation of the transmit centre seen from the receive array, in [0, pi/2).
        double alpha() const;

        // Throws std::domain_error when |gamma| or |psi| is not below pi/2.
        void validate() const;
    };

    struct ArrayGeometry
    {
        int n_elements = 10;       // N
        double radius = 1.0;       // meters
        double initial_angle = 0.0; // angle of element 0, radians

        double element_angle(int m) const; // 0-based m
        void validate() const;
    };

    // Axis rotation matrices. Pitch and yaw follow the receive-frame conventions
    // above; roll is the in-plane rotation [[c,-s,0],[s,c,0],[0,0,1]].
    Rot3 rotation_matrix(Axis axis, double angle);

    // cos(alpha) = cos(psi) cos(gamma)
    double alpha_from(double psi, double gamma);

    // Non-negative pitch that reproduces alpha for the given yaw.
    double psi_from(double alpha, double gamma);

    // Azimuth of the transmit centre in the receive frame, in (0, pi).
    // At gamma == 0 the two branches meet at pi/2 and that value is returned;
    // gamma == psi == 0 has no azimuth and throws std::domain_error.
    double phi_azimuth(double gamma, double psi);

    // Orientation actually applied to the receive elements at a given stage.
    struct StageOrientation
    {
        double gamma = 0.0;
        double psi = 0.0;
        double roll = 0.0;
    };

    // initial uses `pose`; the later stages use `residual` (gamma_bar, psi_bar,
    // and for after_roll also residual.roll = theta*). Throws std::invalid_argument
    // if a later stage is requested without a residual.
    StageOrientation stage_orientation(const Pose &pose, const std::optional<Pose> &residual, Stage stage);

    // Receive element m in the frame centred on the receive array and parallel to
    // the transmit frame (closed-form expansion of R_Y(gamma) R_P(psi) x).
    Vec3 rx_element_position(int m, const Pose &pose, const std::optional<Pose> &residual, Stage stage,
                             const ArrayGeometry &rx);

    // Transmit element n in the transmit frame.
    Vec3 tx_element_position(int n, const ArrayGeometry &tx);

    // Transmit element n to receive element m. `range` is the centre-to-centre distance r.
    double distance(int n, int m, const Pose &pose, const std::optional<Pose> &residual, Stage stage,
                    const ArrayGeometry &tx, const ArrayGeometry &rx, double range,
                    DistanceMethod method = DistanceMethod::farfield);
}
