// SPDX-License-Identifier: Apache-2.0
//
// Simulated annealing over the roll angle theta in [-pi/N, pi/N] and an
// exhaustive grid oracle.

#pragma once

#include "oamsteer/channel.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace oam
{
    struct SaParams
    {
        double t_init = 100.0;
        double t_min = 1e-3;
        double cooling = 0.9; // zeta
        int inner_iters = 20; // J
        // Perturbation magnitude is uniform on (0, step_scale * (T / T_init)^step_exponent]
        // with a random sign. Unset step_scale means (pi/N)/10.
        std::optional<double> step_scale;
        double step_exponent = 1.5;
        std::uint64_t rng_seed = 0;

        int outer_iterations() const; // ceil(log(t_min/t_init) / log(cooling))
        double step_for(int n_elements) const;
        void validate() const;
    };

    struct SaTraceRow
    {
        int outer_iter = 0; // 1-based
        double temperature = 0.0;
        double best_theta = 0.0;
        double best_capacity = 0.0;
        int accepted = 0;
    };

    struct SaResult
    {
        double theta_star = 0.0;
        double best_capacity = 0.0;
        std::vector<SaTraceRow> trace;
    };

    struct GridResult
    {
        double theta = 0.0;
        double capacity = 0.0;
    };

    // (1/P) sum_p sum_u log2(1 + rho |h_H(u,u)|^2) with the interference-free diagonal.
    double capacity_objective(double theta, const LinkConfig &cfg);

    SaResult optimize_roll(const LinkConfig &cfg, const SaParams &sa);

    // Uniform grid of `resolution` points over [-pi/N, pi/N] including both ends.
    // Ties keep the first point.
    GridResult grid_search_roll(const LinkConfig &cfg, int resolution);

    // Last 1-based outer iteration whose best capacity improved by at least tol (0 if none).
    int stabilization_iteration(const std::vector<SaTraceRow> &trace, double tol = 1e-6);

    void write_trace_csv(std::ostream &out, const std::vector<SaTraceRow> &trace);
}
