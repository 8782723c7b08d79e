// SPDX-License-Identifier: Apache-2.0
//
// Line-of-sight UCA channel, OAM (de)spiralization and the effective mode-domain
// channel. Rows of a channel matrix are receive elements, columns transmit elements.

#pragma once

#include "oamsteer/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace oam
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;

    inline constexpr double speed_of_light = 299792458.0;

    // Subcarrier frequencies, strictly positive and strictly increasing.
    struct CarrierGrid
    {
        std::vector<double> frequencies; // Hz

        static CarrierGrid uniform(double first_hz, double last_hz, std::size_t count);

        std::size_t size() const { return frequencies.size(); }
        double wavelength(std::size_t p) const;
        double wavenumber(std::size_t p) const; // k_p = 2 pi / lambda_p
        void validate() const;
    };

    struct LinkConfig
    {
        double range = 1.0;  // centre-to-centre distance r, meters
        ArrayGeometry tx;    // transmit UCA
        ArrayGeometry rx;    // receive UCA
        CarrierGrid carriers;
        std::vector<int> modes;     // OAM mode numbers, distinct modulo N
        double snr = 100.0;         // rho = E|s|^2 / sigma_z^2, linear
        std::optional<double> beta; // amplitude constant; unset means 2 k_1 r

        // Default link: N = 10, modes -4..4, P = 8 carriers over 3.9982-4.2387 GHz,
        // R_t = R_r = 20 lambda_1, r = 450 lambda_1, rho = 20 dB.
        static LinkConfig defaults();

        std::size_t n_elements() const { return static_cast<std::size_t>(rx.n_elements); }
        std::size_t n_modes() const { return modes.size(); }
        double beta_value() const;
        double coupling(std::size_t p) const; // S_{k_p} = k_p R_r R_t / r
        cdouble eta(std::size_t p) const;     // beta exp(-i k_p r) / (2 k_p r N)

        // Throws std::domain_error on an invariant violation. A range below
        // 10 (R_t + R_r) only triggers `far_field_ok() == false`.
        void validate() const;
        bool far_field_ok() const;
    };

    struct ChannelMatrix
    {
        std::size_t subcarrier = 0;
        CMatrix h; // N x N
    };

    struct OamMatrix
    {
        CMatrix h; // U x U, (u, v) = mode u received from mode v
    };

    // Per-element receive phases W_m for one subcarrier, unwrapped radians.
    struct SteeringPhases
    {
        std::size_t subcarrier = 0;
        Eigen::VectorXd phases;

        CVector weights() const; // exp(i W_m)
        SteeringPhases operator-() const;
    };

    // Identifies which geometry a channel evaluation refers to.
    struct ChannelState
    {
        Pose pose;
        std::optional<Pose> residual; // gamma_bar, psi_bar, roll = theta*
        Stage stage = Stage::initial;
    };

    cdouble channel_coeff(std::size_t p, int m, int n, const ChannelState &state, const LinkConfig &cfg,
                          DistanceMethod method = DistanceMethod::farfield);

    ChannelMatrix channel_matrix(std::size_t p, const ChannelState &state, const LinkConfig &cfg,
                                 DistanceMethod method = DistanceMethod::farfield);

    std::vector<ChannelMatrix> channel_matrices(const ChannelState &state, const LinkConfig &cfg,
                                                DistanceMethod method = DistanceMethod::farfield);

    // Row with entries exp(-i 2 pi mode j / N) / sqrt(N), j = 0..N-1.
    CVector dft_vector(int mode, int n_elements);

    // U x N despiralization matrix. Throws std::invalid_argument on duplicate
    // modes (modulo N) or U > N.
    CMatrix partial_dft(std::span<const int> modes, int n_elements);

    // (F_U (.) B) H F_U^H with B the broadcast of exp(i W); no steering means B = 1.
    OamMatrix oam_effective(const ChannelMatrix &channel, std::span<const int> modes,
                            const std::optional<SteeringPhases> &steering = std::nullopt);

    // (F_U (.) B)(H F_U^H s + z), z ~ CN(0, sigma^2 I_N). Deterministic for a given seed.
    CVector simulate_reception(const CVector &symbols, const ChannelMatrix &channel, std::span<const int> modes,
                               const std::optional<SteeringPhases> &steering, double noise_sigma,
                               std::uint64_t rng_seed);
}
