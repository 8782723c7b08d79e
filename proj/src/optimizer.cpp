// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/optimizer.hpp"

#include "oamsteer/csv.hpp"
#include "oamsteer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace oam
{
    int SaParams::outer_iterations() const
    {
        validate();
        return int(std::ceil(std::log(t_min / t_init) / std::log(cooling) - 1e-12));
    }

    double SaParams::step_for(int n_elements) const
    {
        return step_scale ? *step_scale : std::numbers::pi / n_elements / 10.0;
    }

    void SaParams::validate() const
    {
        if (!(t_init > 0.0) || !(t_min > 0.0) || !(t_min < t_init))
            throw std::domain_error("annealing needs 0 < t_min < t_init");
        if (!(cooling > 0.0 && cooling < 1.0))
            throw std::domain_error("cooling must lie in (0, 1)");
        if (inner_iters < 1)
            throw std::domain_error("inner_iters must be >= 1");
        if (step_scale && !(*step_scale > 0.0))
            throw std::domain_error("step_scale must be > 0");
        if (!(step_exponent >= 0.0) || !std::isfinite(step_exponent))
            throw std::domain_error("step_exponent must be >= 0");
    }

    double capacity_objective(double theta, const LinkConfig &cfg)
    {
        double total = 0.0;
        for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
            for (int mode : cfg.modes)
                total += std::log2(1.0 + cfg.snr * std::norm(effective_diag(p, mode, theta, cfg)));
        return total / double(cfg.carriers.size());
    }

    SaResult optimize_roll(const LinkConfig &cfg, const SaParams &sa)
    {
        const int outer = sa.outer_iterations();
        const double limit = std::numbers::pi / cfg.rx.n_elements;
        const double step = sa.step_for(cfg.rx.n_elements);

        std::mt19937_64 rng(sa.rng_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        double theta = 0.0;
        double current = capacity_objective(theta, cfg);
        SaResult out;
        out.trace.reserve(std::size_t(outer));

        for (int it = 0; it < outer; ++it)
        {
            const double temperature = sa.t_init * std::pow(sa.cooling, it);
            double best_theta = theta, best = current;
            int accepted = 0;
            for (int j = 0; j < sa.inner_iters; ++j)
            {
                // 1 - U[0,1) lies in (0, 1], so e is never exactly zero.
                double e = step * std::pow(temperature / sa.t_init, sa.step_exponent) * (1.0 - unit(rng));
                if (unit(rng) < 0.5)
                    e = -e;
                double candidate = std::abs(theta + e) <= limit ? theta + e : theta - e;
                candidate = std::clamp(candidate, -limit, limit);

                const double value = capacity_objective(candidate, cfg);
                const double draw = unit(rng);
                if (value > current || draw < std::exp((value - current) / temperature))
                {
                    ++accepted;
                    theta = candidate;
                    current = value;
                    if (current > best)
                    {
                        best = current;
                        best_theta = theta;
                    }
                }
            }
            if (accepted > 0)
            {
                theta = best_theta;
                current = best;
            }
            out.trace.push_back({it + 1, temperature, best_theta, best, accepted});
        }
        out.theta_star = out.trace.back().best_theta;
        out.best_capacity = out.trace.back().best_capacity;
        return out;
    }

    GridResult grid_search_roll(const LinkConfig &cfg, int resolution)
    {
        if (resolution < 2)
            throw std::domain_error("grid resolution must be >= 2");
        const double limit = std::numbers::pi / cfg.rx.n_elements;
        GridResult best{-limit, capacity_objective(-limit, cfg)};
        for (int i = 1; i < resolution; ++i)
        {
            const double theta = -limit + 2.0 * limit * i / (resolution - 1);
            const double value = capacity_objective(theta, cfg);
            if (value > best.capacity)
                best = {theta, value};
        }
        return best;
    }

    int stabilization_iteration(const std::vector<SaTraceRow> &trace, double tol)
    {
        int last = 0;
        for (std::size_t i = 1; i < trace.size(); ++i)
            if (trace[i].best_capacity - trace[i - 1].best_capacity >= tol)
                last = trace[i].outer_iter;
        return last;
    }

    void write_trace_csv(std::ostream &out, const std::vector<SaTraceRow> &trace)
    {
        CsvWriter csv(out);
        csv.header({"outer_iter", "temperature", "best_theta_rad", "best_capacity_bps_hz", "accepted"});
        for (const SaTraceRow &r : trace)
            csv.row({format_number((long long)r.outer_iter), format_number(r.temperature), format_number(r.best_theta),
                     format_number(r.best_capacity), format_number((long long)r.accepted)});
    }
}
