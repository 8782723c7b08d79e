// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/metrics.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace oam
{
    namespace
    {
        using quad = boost::multiprecision::float128;

        void check_row(const OamMatrix &effective, std::size_t u)
        {
            if (effective.h.rows() != effective.h.cols())
                throw std::invalid_argument("effective matrix must be square");
            if (u >= std::size_t(effective.h.rows()))
                throw std::out_of_range("mode index out of range");
        }

        double interference_power(const OamMatrix &effective, std::size_t u)
        {
            double sum = 0.0;
            for (Eigen::Index v = 0; v < effective.h.cols(); ++v)
                if (v != Eigen::Index(u))
                    sum += std::norm(effective.h(Eigen::Index(u), v));
            return sum;
        }

        int circular(int x, int n)
        {
            const int r = ((x % n) + n) % n;
            return std::min(r, n - r);
        }

        double factorial(int k)
        {
            return std::tgamma(k + 1.0);
        }

        void check_modes(std::span<const int> modes, int n_elements, std::size_t u)
        {
            if (n_elements < 1)
                throw std::domain_error("n_elements must be >= 1");
            if (u >= modes.size())
                throw std::out_of_range("mode index out of range");
        }
    }

    double sinr(const OamMatrix &effective, std::size_t u, double rho)
    {
        check_row(effective, u);
        if (!(rho > 0.0))
            throw std::domain_error("rho must be > 0");
        const double signal = std::norm(effective.h(Eigen::Index(u), Eigen::Index(u)));
        return rho * signal / (rho * interference_power(effective, u) + 1.0);
    }

    double sir(const OamMatrix &effective, std::size_t u)
    {
        check_row(effective, u);
        const double interference = interference_power(effective, u);
        if (interference == 0.0)
            return sir_unbounded;
        return std::norm(effective.h(Eigen::Index(u), Eigen::Index(u))) / interference;
    }

    double capacity(std::span<const OamMatrix> effectives, double rho)
    {
        if (effectives.empty())
            throw std::invalid_argument("capacity needs at least one subcarrier");
        double total = 0.0;
        for (const OamMatrix &h : effectives)
            for (Eigen::Index u = 0; u < h.h.rows(); ++u)
                total += std::log2(1.0 + sinr(h, std::size_t(u), rho));
        return total / double(effectives.size());
    }

    ModePair make_mode_pair(std::span<const int> modes, int n_elements, std::size_t u, std::size_t v)
    {
        check_modes(modes, n_elements, u);
        check_modes(modes, n_elements, v);
        ModePair pair;
        pair.u = u;
        pair.v = v;
        pair.t = modes[u] - modes[v];
        pair.tau = circular(modes[u], n_elements);

        int j = 0;
        if (pair.t % 2 == 0)
            j = pair.t / 2;
        else if (n_elements % 2 == 1)
            j = (pair.t + n_elements) / 2;
        else
        {
            pair.coupled = false;
            return pair;
        }
        pair.tau_bar = circular(j, n_elements);
        pair.chi = circular(modes[v] + j, n_elements);
        return pair;
    }

    AsymptoticTerms sir_asymptotic(const ModePair &pair, int n_elements, double angle, double s, double eta_scale)
    {
        const double n2 = double(n_elements) * n_elements;
        const double c = std::cos(angle);
        AsymptoticTerms out;
        out.signal = eta_scale * n2 / std::pow(2.0, pair.tau) * std::pow(s * (1.0 + c) / 2.0, pair.tau) /
                     factorial(pair.tau);
        if (pair.u == pair.v || !pair.coupled)
            return out;
        const int order = pair.tau_bar + pair.chi;
        out.interference = eta_scale * n2 / std::pow(4.0, order) * std::pow(s, order) *
                           std::pow(1.0 - c, pair.tau_bar) * std::pow(1.0 + c, pair.chi) /
                           (factorial(pair.tau_bar) * factorial(pair.chi));
        return out;
    }

    double sir_asymptotic_ratio(std::span<const int> modes, int n_elements, std::size_t u, double angle, double s)
    {
        check_modes(modes, n_elements, u);
        double signal = 0.0, interference = 0.0;
        for (std::size_t v = 0; v < modes.size(); ++v)
        {
            const AsymptoticTerms terms = sir_asymptotic(make_mode_pair(modes, n_elements, u, v), n_elements, angle, s, 1.0);
            if (v == u)
                signal = terms.signal;
            else
                interference += terms.interference * terms.interference;
        }
        return interference == 0.0 ? sir_unbounded : signal * signal / interference;
    }

    double sir_eo_extended(std::span<const int> modes, int n_elements, std::size_t u, TiltAxis axis, double angle,
                           double s)
    {
        check_modes(modes, n_elements, u);
        const int n = n_elements;
        const quad pi = boost::math::constants::pi<quad>();
        const quad sq = s;
        const quad a = angle;
        const quad cg = axis == TiltAxis::yaw ? cos(a) : quad(1);
        const quad cp = axis == TiltAxis::pitch ? cos(a) : quad(1);
        // The sin(psi) sin(gamma) cross term vanishes for a single-axis tilt.

        std::vector<quad> ct(n), st(n);
        for (int m = 0; m < n; ++m)
        {
            const quad th = 2 * pi * m / n;
            ct[m] = cos(th);
            st[m] = sin(th);
        }
        // exp(i 2 pi j / N) for the despiralization weights
        const std::vector<quad> &wr = ct, &wi = st;

        // After EO steering the linear k R_r term is gone; what is left is
        // exp(i S (cos th_m cos ph_n cos g + sin th_m sin ph_n cos p)).
        std::vector<quad> er(n * n), ei(n * n);
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k)
            {
                const quad ph = sq * (ct[m] * ct[k] * cg + st[m] * st[k] * cp);
                er[m * n + k] = cos(ph);
                ei[m * n + k] = sin(ph);
            }

        auto power = [&](int lu, int lv) {
            quad re = 0, im = 0;
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                {
                    const int j = (((-lu * m + lv * k) % n) + n) % n;
                    re += wr[j] * er[m * n + k] - wi[j] * ei[m * n + k];
                    im += wr[j] * ei[m * n + k] + wi[j] * er[m * n + k];
                }
            return re * re + im * im;
        };

        const quad signal = power(modes[u], modes[u]);
        quad interference = 0;
        for (std::size_t v = 0; v < modes.size(); ++v)
            if (v != u)
                interference += power(modes[u], modes[v]);
        if (interference == 0)
            return sir_unbounded;
        return static_cast<double>(signal / interference);
    }

    MonotonicityReport check_monotonicity(TiltAxis axis, std::span<const int> modes, int n_elements, std::size_t u,
                                          double s, std::span<const double> grid, SirModel model)
    {
        MonotonicityReport out;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            if (!(grid[i] > 0.0 && grid[i] < std::numbers::pi / 2.0))
                throw std::domain_error("monotonicity grid must lie in (0, pi/2)");
            if (i > 0 && !(grid[i] > grid[i - 1]))
                throw std::domain_error("monotonicity grid must be strictly increasing");
            out.values.push_back(model == SirModel::exact
                                     ? sir_eo_extended(modes, n_elements, u, axis, grid[i], s)
                                     : sir_asymptotic_ratio(modes, n_elements, u, grid[i], s));
        }
        for (std::size_t i = 1; i < out.values.size(); ++i)
        {
            const double rise = (out.values[i] - out.values[i - 1]) / out.values[i - 1];
            if (rise > 1e-12)
            {
                out.decreasing = false;
                out.worst_increase = std::max(out.worst_increase, rise);
            }
        }
        return out;
    }
}
