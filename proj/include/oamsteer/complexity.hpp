// SPDX-License-Identifier: Apache-2.0
//
// Order-level operation counts for hybrid versus electronic-only steering.
// Every big-O term is evaluated with a unit constant.

#pragma once

#include <iosfwd>
#include <numbers>
#include <vector>

namespace oam
{
    struct ComplexityParams
    {
        int p_data = 8, u_data = 9;     // P, U
        int p_coarse = 4, u_coarse = 4; // coarse AoA grid
        int p_fine = 8, u_fine = 8;     // fine AoA grid
        int n_elements = 10;
        int inner_iters = 20; // J
        double cooling = 0.9;
        double t_init = 100.0; // also the T_max of the annealing term
        double t_min = 1e-3;
        double psi_hat = 60.0 * std::numbers::pi / 180.0;
        double gamma_hat = 60.0 * std::numbers::pi / 180.0;
        double theta_star = 10.0 * std::numbers::pi / 180.0;
        double nu = 0.3 * std::numbers::pi / 180.0;

        void validate() const;
    };

    struct HybridCost
    {
        double coarse_aoa = 0.0;      // Pbar^3 Ubar^3
        double mech_pitch_yaw = 0.0;  // (psi_hat + gamma_hat) / nu
        double annealing = 0.0;       // J log_zeta(T_min / T_init)
        double mech_roll = 0.0;       // theta* / nu
        double fine_aoa = 0.0;        // Ptilde^3 Utilde^3
        double electronic = 0.0;      // P U N^2

        double total() const;
    };

    struct ElectronicCost
    {
        double fine_aoa = 0.0;
        double electronic = 0.0;

        double total() const;
    };

    HybridCost cost_hybrid(const ComplexityParams &params);
    ElectronicCost cost_electronic(const ComplexityParams &params);
    double complexity_ratio(const ComplexityParams &params);

    struct ComplexityRow
    {
        int n_elements = 0;
        int p_data = 0;
        double hybrid = 0.0;
        double electronic = 0.0;
        double ratio = 0.0;
    };

    // Every (N, P) combination from the inclusive ranges, N outer.
    std::vector<ComplexityRow> complexity_sweep(const ComplexityParams &base, int n_first, int n_last, int p_first,
                                                int p_last);

    void write_complexity_csv(std::ostream &out, const std::vector<ComplexityRow> &rows);
}
