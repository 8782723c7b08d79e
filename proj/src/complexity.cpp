// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/complexity.hpp"

#include "oamsteer/csv.hpp"

#include <cmath>
#include <stdexcept>

namespace oam
{
    namespace
    {
        double cube(double x)
        {
            return x * x * x;
        }
    }

    void ComplexityParams::validate() const
    {
        if (p_data < 1 || u_data < 1 || p_coarse < 1 || u_coarse < 1 || p_fine < 1 || u_fine < 1 || n_elements < 1)
            throw std::domain_error("complexity counts must be positive");
        if (p_coarse > p_fine || u_coarse > u_fine)
            throw std::domain_error("coarse AoA grid must not exceed the fine grid");
        if (inner_iters < 0)
            throw std::domain_error("inner_iters must be >= 0");
        if (!(cooling > 0.0 && cooling < 1.0) || !(t_min > 0.0) || !(t_init > 0.0) || t_min > t_init)
            throw std::domain_error("annealing schedule out of domain");
        if (!(nu > 0.0))
            throw std::domain_error("nu must be > 0");
    }

    double HybridCost::total() const
    {
        return coarse_aoa + mech_pitch_yaw + annealing + mech_roll + fine_aoa + electronic;
    }

    double ElectronicCost::total() const
    {
        return fine_aoa + electronic;
    }

    HybridCost cost_hybrid(const ComplexityParams &params)
    {
        params.validate();
        HybridCost c;
        c.coarse_aoa = cube(params.p_coarse) * cube(params.u_coarse);
        c.mech_pitch_yaw = (std::abs(params.psi_hat) + std::abs(params.gamma_hat)) / params.nu;
        c.annealing = params.inner_iters * std::log(params.t_min / params.t_init) / std::log(params.cooling);
        c.mech_roll = std::abs(params.theta_star) / params.nu;
        const ElectronicCost e = cost_electronic(params);
        c.fine_aoa = e.fine_aoa;
        c.electronic = e.electronic;
        return c;
    }

    ElectronicCost cost_electronic(const ComplexityParams &params)
    {
        params.validate();
        ElectronicCost c;
        c.fine_aoa = cube(params.p_fine) * cube(params.u_fine);
        c.electronic = double(params.p_data) * params.u_data * double(params.n_elements) * params.n_elements;
        return c;
    }

    double complexity_ratio(const ComplexityParams &params)
    {
        return cost_hybrid(params).total() / cost_electronic(params).total();
    }

    std::vector<ComplexityRow> complexity_sweep(const ComplexityParams &base, int n_first, int n_last, int p_first,
                                                int p_last)
    {
        if (n_first > n_last || p_first > p_last)
            throw std::domain_error("empty complexity sweep");
        std::vector<ComplexityRow> rows;
        for (int n = n_first; n <= n_last; ++n)
            for (int p = p_first; p <= p_last; ++p)
            {
                ComplexityParams q = base;
                q.n_elements = n;
                q.p_data = p;
                const double h = cost_hybrid(q).total(), e = cost_electronic(q).total();
                rows.push_back({n, p, h, e, h / e});
            }
        return rows;
    }

    void write_complexity_csv(std::ostream &out, const std::vector<ComplexityRow> &rows)
    {
        CsvWriter csv(out);
        csv.header({"N", "P", "cost_hybrid", "cost_electronic", "ratio"});
        for (const ComplexityRow &r : rows)
            csv.row({format_number((long long)r.n_elements), format_number((long long)r.p_data), format_number(r.hybrid),
                     format_number(r.electronic), format_number(r.ratio)});
    }
}
