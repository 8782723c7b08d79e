// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: flat key-value scenario files, the named experiments and
// their CSV + manifest output.
//
// Config syntax: one `key = value` per line, `#` starts a comment, dotted keys
// group related settings. Unknown or repeated keys are errors. Angles are given
// in degrees, lengths in units of the first-subcarrier wavelength. `auto`
// selects the per-experiment default where a key allows it.

#pragma once

#include "oamsteer/channel.hpp"
#include "oamsteer/optimizer.hpp"
#include "oamsteer/servo.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oam
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    const std::vector<std::string> &experiment_names();

    struct SweepSpec
    {
        std::string axis = "auto"; // yaw, pitch, both or auto
        std::optional<double> start_deg, stop_deg;
        std::optional<int> count;
    };

    struct ExperimentSpec
    {
        std::string name; // empty until chosen by the caller

        // scenario
        int n_elements = 10;
        double tx_radius_lambda = 20.0;
        double rx_radius_lambda = 20.0;
        double range_lambda = 450.0;
        double tx_initial_angle_deg = 0.0;
        double rx_initial_angle_deg = 0.0;
        std::vector<int> modes{-4, -3, -2, -1, 0, 1, 2, 3, 4};
        double freq_first_hz = 3.9982e9;
        double freq_last_hz = 4.2387e9;
        std::optional<int> subcarriers; // auto: 6 for sweep-yaw, sweep-pitch, roll-profile; else 8
        double snr_db = 20.0;
        std::optional<double> beta;

        double gamma_deg = 0.0;
        double psi_deg = 0.0;

        SaParams sa;
        double servo_period_s = 20e-3;
        double servo_pulse_min_s = 1e-3;
        double servo_pulse_mid_s = 1.5e-3;
        double servo_pulse_max_s = 2e-3;
        double servo_accuracy_deg = 0.3;
        double aoa_gamma_error_deg = 0.0;
        double aoa_psi_error_deg = 0.0;

        SweepSpec sweep;
        double snr_start_db = 0.0, snr_stop_db = 30.0, snr_step_db = 2.0;

        double mono_coupling = 0.01;
        double mono_start_deg = 1.0, mono_stop_deg = 89.0;
        int mono_count = 50;

        int cx_n_first = 8, cx_n_last = 32, cx_p_first = 4, cx_p_last = 16;
        int cx_p_coarse = 4, cx_u_coarse = 4, cx_p_fine = 8, cx_u_fine = 8;
        double cx_psi_hat_deg = 60.0, cx_gamma_hat_deg = 60.0, cx_theta_star_deg = 10.0;

        // Resolved link for this experiment. Throws ConfigError naming the key.
        LinkConfig link() const;
        ServoConfig servo() const;
        int resolved_subcarriers() const;
        std::vector<double> snr_grid_db() const;
        std::vector<double> sweep_grid_deg() const;
        std::string sweep_axis() const;

        // Throws ConfigError naming the first offending key.
        void validate() const;
    };

    // Parse a config. Missing keys keep their defaults. Errors carry the line
    // number (syntax) or the key (domain).
    ExperimentSpec parse_config(std::string_view text);

    // Every key, in a fixed order, one per line.
    std::string serialize(const ExperimentSpec &spec);

    struct RunOptions
    {
        std::filesystem::path out_dir = ".";
        int workers = 1;
        std::string code_version;
    };

    struct RunResult
    {
        std::vector<std::filesystem::path> files;
        double wall_seconds = 0.0;
    };

    // Runs the named experiment. Throws ConfigError for an invalid spec and
    // std::runtime_error for output failures.
    RunResult run(const ExperimentSpec &spec, const RunOptions &options);

    // Evaluates fn(0..count-1) on at most `workers` threads and returns results
    // in index order. The exception of the lowest failing index is rethrown.
    template <typename T>
    std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)> &fn);

    // Count of strict local maxima of a periodic sequence.
    int count_periodic_maxima(const std::vector<double> &values, double tolerance = 1e-12);
}

#include "oamsteer/detail/parallel_map.hpp"
