// SPDX-License-Identifier: Apache-2.0
//
// SINR, SIR and capacity of an effective OAM matrix, plus the small-coupling
// asymptotics of the electronic-only SIR.

#pragma once

#include "oamsteer/channel.hpp"

#include <limits>
#include <span>
#include <vector>

namespace oam
{
    // Returned by sir() when a row carries no interference at all.
    inline constexpr double sir_unbounded = std::numeric_limits<double>::max();

    // rho |h(u,u)|^2 / (rho sum_{v != u} |h(u,v)|^2 + 1), noise power normalized to 1.
    double sinr(const OamMatrix &effective, std::size_t u, double rho);

    // |h(u,u)|^2 / sum_{v != u} |h(u,v)|^2, or sir_unbounded.
    double sir(const OamMatrix &effective, std::size_t u);

    // (1/P) sum_p sum_u log2(1 + SINR(p, u))
    double capacity(std::span<const OamMatrix> effectives, double rho);

    struct ModePair
    {
        std::size_t u = 0, v = 0; // indices into the mode list
        int t = 0;                // l_u - l_v
        int tau = 0;
        int tau_bar = 0;
        int chi = 0;
        bool coupled = true; // false when no integer j solves 2 j = t (mod N)
    };

    // tau = min(|l_u|, N - |l_u|). With j solving 2 j = t (mod N), tau_bar and
    // chi are the circular magnitudes of j and l_v + j; for odd t and even N
    // there is no solution and the leading-order coupling vanishes.
    ModePair make_mode_pair(std::span<const int> modes, int n_elements, std::size_t u, std::size_t v);

    struct AsymptoticTerms
    {
        double signal = 0.0;       // |h(u,u)|, leading order in S
        double interference = 0.0; // |h(u,v)|, leading order in S
    };

    // Small-S leading terms for a tilt of `angle` about one axis (yaw or pitch),
    // the other angle zero. `eta_scale` is |eta(p)|.
    AsymptoticTerms sir_asymptotic(const ModePair &pair, int n_elements, double angle, double s, double eta_scale);

    // signal^2 / sum_{v != u} interference^2 from the leading terms.
    double sir_asymptotic_ratio(std::span<const int> modes, int n_elements, std::size_t u, double angle, double s);

    enum class TiltAxis
    {
        yaw,
        pitch
    };

    // Electronic-only SIR of mode index u for a single tilt, evaluated from the
    // steered double sum in 113-bit floating point. Double precision cannot
    // resolve the interference at small S (terms of order S^8 against unit summands).
    double sir_eo_extended(std::span<const int> modes, int n_elements, std::size_t u, TiltAxis axis, double angle,
                           double s);

    enum class SirModel
    {
        exact,
        asymptotic
    };

    struct MonotonicityReport
    {
        bool decreasing = true;
        double worst_increase = 0.0; // largest relative adjacent increase, 0 if none
        std::vector<double> values;
    };

    // SIR over an increasing angle grid in (0, pi/2). Adjacent values may not
    // rise by more than 1e-12 relative.
    MonotonicityReport check_monotonicity(TiltAxis axis, std::span<const int> modes, int n_elements, std::size_t u,
                                          double s, std::span<const double> grid, SirModel model = SirModel::exact);
}
