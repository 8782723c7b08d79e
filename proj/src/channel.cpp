// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace oam
{
    using namespace std::complex_literals;

    CarrierGrid CarrierGrid::uniform(double first_hz, double last_hz, std::size_t count)
    {
        if (count == 0)
            throw std::domain_error("carrier grid needs at least one subcarrier");
        CarrierGrid g;
        g.frequencies.resize(count);
        for (std::size_t p = 0; p < count; ++p)
            g.frequencies[p] = count == 1 ? first_hz : first_hz + (last_hz - first_hz) * double(p) / double(count - 1);
        g.validate();
        return g;
    }

    double CarrierGrid::wavelength(std::size_t p) const
    {
        return speed_of_light / frequencies.at(p);
    }

    double CarrierGrid::wavenumber(std::size_t p) const
    {
        return 2.0 * std::numbers::pi * frequencies.at(p) / speed_of_light;
    }

    void CarrierGrid::validate() const
    {
        if (frequencies.empty())
            throw std::domain_error("carrier grid needs at least one subcarrier");
        for (std::size_t p = 0; p < frequencies.size(); ++p)
        {
            if (!(frequencies[p] > 0.0) || !std::isfinite(frequencies[p]))
                throw std::domain_error("carrier frequencies must be positive");
            if (p > 0 && !(frequencies[p] > frequencies[p - 1]))
                throw std::domain_error("carrier frequencies must be strictly increasing");
        }
    }

    LinkConfig LinkConfig::defaults()
    {
        LinkConfig cfg;
        cfg.carriers = CarrierGrid::uniform(3.9982e9, 4.2387e9, 8);
        const double lambda1 = cfg.carriers.wavelength(0);
        cfg.tx = ArrayGeometry{10, 20.0 * lambda1, 0.0};
        cfg.rx = ArrayGeometry{10, 20.0 * lambda1, 0.0};
        cfg.range = 450.0 * lambda1;
        cfg.modes = {-4, -3, -2, -1, 0, 1, 2, 3, 4};
        cfg.snr = 100.0;
        return cfg;
    }

    double LinkConfig::beta_value() const
    {
        return beta ? *beta : 2.0 * carriers.wavenumber(0) * range;
    }

    double LinkConfig::coupling(std::size_t p) const
    {
        return carriers.wavenumber(p) * rx.radius * tx.radius / range;
    }

    cdouble LinkConfig::eta(std::size_t p) const
    {
        const double k = carriers.wavenumber(p);
        return beta_value() / (2.0 * k * range * double(n_elements())) * std::exp(-1i * k * range);
    }

    void LinkConfig::validate() const
    {
        tx.validate();
        rx.validate();
        carriers.validate();
        if (tx.n_elements != rx.n_elements)
            throw std::domain_error("transmit and receive arrays must have the same element count");
        if (!(range > 0.0) || !std::isfinite(range))
            throw std::domain_error("range must be > 0");
        if (!(snr > 0.0) || !std::isfinite(snr))
            throw std::domain_error("snr must be > 0");
        if (beta && (!(*beta > 0.0) || !std::isfinite(*beta)))
            throw std::domain_error("beta must be > 0");
        if (modes.empty())
            throw std::domain_error("at least one mode is required");
        if (modes.size() > n_elements())
            throw std::domain_error("more modes than array elements");
        const int n = rx.n_elements;
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i + 1; j < modes.size(); ++j)
                if (((modes[i] - modes[j]) % n + n) % n == 0)
                    throw std::domain_error("modes must be distinct modulo N");
    }

    bool LinkConfig::far_field_ok() const
    {
        return range >= 10.0 * (tx.radius + rx.radius);
    }

    CVector SteeringPhases::weights() const
    {
        CVector w(phases.size());
        for (Eigen::Index m = 0; m < phases.size(); ++m)
            w[m] = std::polar(1.0, phases[m]);
        return w;
    }

    SteeringPhases SteeringPhases::operator-() const
    {
        return {subcarrier, -phases};
    }

    cdouble channel_coeff(std::size_t p, int m, int n, const ChannelState &state, const LinkConfig &cfg,
                          DistanceMethod method)
    {
        const double k = cfg.carriers.wavenumber(p);
        const double d = distance(n, m, state.pose, state.residual, state.stage, cfg.tx, cfg.rx, cfg.range, method);
        const double beta = cfg.beta_value();
        // Far-field amplitude keeps only 2 k r in the denominator.
        const double amplitude = method == DistanceMethod::farfield ? beta / (2.0 * k * cfg.range)
                                                                    : beta / (2.0 * k * d);
        return std::polar(amplitude, -k * d);
    }

    ChannelMatrix channel_matrix(std::size_t p, const ChannelState &state, const LinkConfig &cfg,
                                 DistanceMethod method)
    {
        const int n_el = cfg.rx.n_elements;
        ChannelMatrix out{p, CMatrix(n_el, n_el)};
        for (int m = 0; m < n_el; ++m)
            for (int n = 0; n < n_el; ++n)
                out.h(m, n) = channel_coeff(p, m, n, state, cfg, method);
        return out;
    }

    std::vector<ChannelMatrix> channel_matrices(const ChannelState &state, const LinkConfig &cfg,
                                                DistanceMethod method)
    {
        std::vector<ChannelMatrix> out;
        out.reserve(cfg.carriers.size());
        for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
            out.push_back(channel_matrix(p, state, cfg, method));
        return out;
    }

    CVector dft_vector(int mode, int n_elements)
    {
        if (n_elements < 1)
            throw std::domain_error("n_elements must be >= 1");
        CVector f(n_elements);
        const double scale = 1.0 / std::sqrt(double(n_elements));
        for (int j = 0; j < n_elements; ++j)
        {
            // Reduce mode * j modulo N first so that l and l + N give bit-identical rows.
            const long long r = ((static_cast<long long>(mode) * j) % n_elements + n_elements) % n_elements;
            f[j] = std::polar(scale, -2.0 * std::numbers::pi * double(r) / n_elements);
        }
        return f;
    }

    CMatrix partial_dft(std::span<const int> modes, int n_elements)
    {
        if (modes.size() > static_cast<std::size_t>(n_elements))
            throw std::invalid_argument("more modes than array elements");
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i + 1; j < modes.size(); ++j)
                if (((modes[i] - modes[j]) % n_elements + n_elements) % n_elements == 0)
                    throw std::invalid_argument("duplicate OAM mode (modulo N)");

        CMatrix f(modes.size(), n_elements);
        for (std::size_t u = 0; u < modes.size(); ++u)
            f.row(Eigen::Index(u)) = dft_vector(modes[u], n_elements).transpose();
        return f;
    }

    namespace
    {
        CMatrix steered_dft(std::span<const int> modes, int n_elements, const std::optional<SteeringPhases> &steering)
        {
            CMatrix f = partial_dft(modes, n_elements);
            if (steering)
            {
                if (steering->phases.size() != n_elements)
                    throw std::invalid_argument("steering phase vector length differs from N");
                f = f * steering->weights().asDiagonal();
            }
            return f;
        }
    }

    OamMatrix oam_effective(const ChannelMatrix &channel, std::span<const int> modes,
                            const std::optional<SteeringPhases> &steering)
    {
        const auto n_el = channel.h.rows();
        if (channel.h.cols() != n_el)
            throw std::invalid_argument("channel matrix must be square");
        const CMatrix f = steered_dft(modes, int(n_el), steering);
        return {f * channel.h * partial_dft(modes, int(n_el)).adjoint()};
    }

    CVector simulate_reception(const CVector &symbols, const ChannelMatrix &channel, std::span<const int> modes,
                               const std::optional<SteeringPhases> &steering, double noise_sigma,
                               std::uint64_t rng_seed)
    {
        const auto n_el = channel.h.rows();
        if (symbols.size() != Eigen::Index(modes.size()))
            throw std::invalid_argument("symbol vector length differs from the mode count");
        if (noise_sigma < 0.0)
            throw std::invalid_argument("noise sigma must be >= 0");

        const CMatrix spiral = partial_dft(modes, int(n_el)).adjoint();
        CVector received = channel.h * (spiral * symbols);
        if (noise_sigma > 0.0)
        {
            std::mt19937_64 rng(rng_seed);
            std::normal_distribution<double> gauss(0.0, noise_sigma / std::sqrt(2.0));
            for (Eigen::Index m = 0; m < n_el; ++m)
            {
                const double re = gauss(rng);
                const double im = gauss(rng);
                received[m] += cdouble(re, im);
            }
        }
        return steered_dft(modes, int(n_el), steering) * received;
    }
}
