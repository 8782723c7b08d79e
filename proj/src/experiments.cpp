// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/experiments.hpp"

#include "oamsteer/complexity.hpp"
#include "oamsteer/csv.hpp"
#include "oamsteer/metrics.hpp"
#include "oamsteer/steering.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace oam
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        double to_double(std::string_view v)
        {
            double x = 0.0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
                throw std::invalid_argument("expected a finite number, got '" + std::string(v) + "'");
            return x;
        }

        template <typename I>
        I to_integer(std::string_view v)
        {
            I x = 0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
            return x;
        }

        std::vector<int> to_int_list(std::string_view v)
        {
            std::vector<int> out;
            while (true)
            {
                const auto comma = v.find(',');
                out.push_back(to_integer<int>(trim(v.substr(0, comma))));
                if (comma == std::string_view::npos)
                    break;
                v.remove_prefix(comma + 1);
            }
            return out;
        }

        std::string int_list(const std::vector<int> &xs)
        {
            std::string out;
            for (std::size_t i = 0; i < xs.size(); ++i)
                out += (i ? "," : "") + std::to_string(xs[i]);
            return out;
        }

        std::string num(double x)
        {
            return format_number(x);
        }

        std::string num(long long x)
        {
            return format_number(x);
        }

        template <typename T>
        std::string maybe(const std::optional<T> &x)
        {
            if (!x)
                return "auto";
            if constexpr (std::is_floating_point_v<T>)
                return num(double(*x));
            else
                return num((long long)*x);
        }

        struct Field
        {
            const char *key;
            std::function<std::string(const ExperimentSpec &)> get;
            std::function<void(ExperimentSpec &, std::string_view)> set;
        };

#define OAM_DOUBLE(key, member)                                                                                        \
    Field                                                                                                              \
    {                                                                                                                  \
        key, [](const ExperimentSpec &s) { return num(s.member); },                                                    \
            [](ExperimentSpec &s, std::string_view v) { s.member = to_double(v); }                                     \
    }
#define OAM_INT(key, member)                                                                                           \
    Field                                                                                                              \
    {                                                                                                                  \
        key, [](const ExperimentSpec &s) { return num((long long)s.member); },                                         \
            [](ExperimentSpec &s, std::string_view v) { s.member = to_integer<int>(v); }                               \
    }

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = {
                {"experiment", [](const ExperimentSpec &s) { return s.name.empty() ? std::string("auto") : s.name; },
                 [](ExperimentSpec &s, std::string_view v) { s.name = v == "auto" ? std::string() : std::string(v); }},
                OAM_INT("scenario.n_elements", n_elements),
                OAM_DOUBLE("scenario.tx_radius_lambda", tx_radius_lambda),
                OAM_DOUBLE("scenario.rx_radius_lambda", rx_radius_lambda),
                OAM_DOUBLE("scenario.range_lambda", range_lambda),
                OAM_DOUBLE("scenario.tx_initial_angle_deg", tx_initial_angle_deg),
                OAM_DOUBLE("scenario.rx_initial_angle_deg", rx_initial_angle_deg),
                {"scenario.modes", [](const ExperimentSpec &s) { return int_list(s.modes); },
                 [](ExperimentSpec &s, std::string_view v) { s.modes = to_int_list(v); }},
                OAM_DOUBLE("scenario.freq_first_hz", freq_first_hz),
                OAM_DOUBLE("scenario.freq_last_hz", freq_last_hz),
                {"scenario.subcarriers", [](const ExperimentSpec &s) { return maybe(s.subcarriers); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.subcarriers = v == "auto" ? std::nullopt : std::optional<int>(to_integer<int>(v));
                 }},
                OAM_DOUBLE("scenario.snr_db", snr_db),
                {"scenario.beta", [](const ExperimentSpec &s) { return maybe(s.beta); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.beta = v == "auto" ? std::nullopt : std::optional<double>(to_double(v));
                 }},
                OAM_DOUBLE("pose.gamma_deg", gamma_deg),
                OAM_DOUBLE("pose.psi_deg", psi_deg),
                OAM_DOUBLE("sa.t_init", sa.t_init),
                OAM_DOUBLE("sa.t_min", sa.t_min),
                OAM_DOUBLE("sa.cooling", sa.cooling),
                OAM_INT("sa.inner_iters", sa.inner_iters),
                {"sa.step_scale_rad", [](const ExperimentSpec &s) { return maybe(s.sa.step_scale); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.sa.step_scale = v == "auto" ? std::nullopt : std::optional<double>(to_double(v));
                 }},
                OAM_DOUBLE("sa.step_exponent", sa.step_exponent),
                {"sa.seed", [](const ExperimentSpec &s) { return std::to_string(s.sa.rng_seed); },
                 [](ExperimentSpec &s, std::string_view v) { s.sa.rng_seed = to_integer<std::uint64_t>(v); }},
                OAM_DOUBLE("servo.period_s", servo_period_s),
                OAM_DOUBLE("servo.pulse_min_s", servo_pulse_min_s),
                OAM_DOUBLE("servo.pulse_mid_s", servo_pulse_mid_s),
                OAM_DOUBLE("servo.pulse_max_s", servo_pulse_max_s),
                OAM_DOUBLE("servo.accuracy_deg", servo_accuracy_deg),
                OAM_DOUBLE("aoa.gamma_error_deg", aoa_gamma_error_deg),
                OAM_DOUBLE("aoa.psi_error_deg", aoa_psi_error_deg),
                {"sweep.axis", [](const ExperimentSpec &s) { return s.sweep.axis; },
                 [](ExperimentSpec &s, std::string_view v) { s.sweep.axis = std::string(v); }},
                {"sweep.start_deg", [](const ExperimentSpec &s) { return maybe(s.sweep.start_deg); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.sweep.start_deg = v == "auto" ? std::nullopt : std::optional<double>(to_double(v));
                 }},
                {"sweep.stop_deg", [](const ExperimentSpec &s) { return maybe(s.sweep.stop_deg); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.sweep.stop_deg = v == "auto" ? std::nullopt : std::optional<double>(to_double(v));
                 }},
                {"sweep.count", [](const ExperimentSpec &s) { return maybe(s.sweep.count); },
                 [](ExperimentSpec &s, std::string_view v) {
                     s.sweep.count = v == "auto" ? std::nullopt : std::optional<int>(to_integer<int>(v));
                 }},
                OAM_DOUBLE("snr.start_db", snr_start_db),
                OAM_DOUBLE("snr.stop_db", snr_stop_db),
                OAM_DOUBLE("snr.step_db", snr_step_db),
                OAM_DOUBLE("monotonicity.coupling", mono_coupling),
                OAM_DOUBLE("monotonicity.start_deg", mono_start_deg),
                OAM_DOUBLE("monotonicity.stop_deg", mono_stop_deg),
                OAM_INT("monotonicity.count", mono_count),
                OAM_INT("complexity.n_first", cx_n_first),
                OAM_INT("complexity.n_last", cx_n_last),
                OAM_INT("complexity.p_first", cx_p_first),
                OAM_INT("complexity.p_last", cx_p_last),
                OAM_INT("complexity.p_coarse", cx_p_coarse),
                OAM_INT("complexity.u_coarse", cx_u_coarse),
                OAM_INT("complexity.p_fine", cx_p_fine),
                OAM_INT("complexity.u_fine", cx_u_fine),
                OAM_DOUBLE("complexity.psi_hat_deg", cx_psi_hat_deg),
                OAM_DOUBLE("complexity.gamma_hat_deg", cx_gamma_hat_deg),
                OAM_DOUBLE("complexity.theta_star_deg", cx_theta_star_deg),
            };
            return table;
        }

#undef OAM_DOUBLE
#undef OAM_INT

        void require(bool ok, const char *key, const std::string &what)
        {
            if (!ok)
                throw ConfigError(std::string(key) + ": " + what);
        }

        bool tilt_ok(double deg)
        {
            return std::abs(deg) < 90.0;
        }

        bool is_angle_sweep(const std::string &name)
        {
            return name == "sweep-yaw" || name == "sweep-pitch";
        }
    }

    const std::vector<std::string> &experiment_names()
    {
        static const std::vector<std::string> names = {"sweep-yaw",      "sweep-pitch", "roll-profile", "hybrid-compare",
                                                       "sa-trace",       "monotonicity", "complexity"};
        return names;
    }

    int ExperimentSpec::resolved_subcarriers() const
    {
        if (subcarriers)
            return *subcarriers;
        return is_angle_sweep(name) || name == "roll-profile" ? 6 : 8;
    }

    LinkConfig ExperimentSpec::link() const
    {
        validate();
        LinkConfig cfg;
        cfg.carriers = CarrierGrid::uniform(freq_first_hz, freq_last_hz, std::size_t(resolved_subcarriers()));
        const double lambda1 = cfg.carriers.wavelength(0);
        cfg.tx = {n_elements, tx_radius_lambda * lambda1, tx_initial_angle_deg * deg_to_rad};
        cfg.rx = {n_elements, rx_radius_lambda * lambda1, rx_initial_angle_deg * deg_to_rad};
        cfg.range = range_lambda * lambda1;
        cfg.modes = modes;
        cfg.snr = std::pow(10.0, snr_db / 10.0);
        cfg.beta = beta;
        cfg.validate();
        return cfg;
    }

    ServoConfig ExperimentSpec::servo() const
    {
        return {servo_period_s, servo_pulse_min_s, servo_pulse_mid_s, servo_pulse_max_s,
                servo_accuracy_deg * deg_to_rad};
    }

    std::vector<double> ExperimentSpec::snr_grid_db() const
    {
        std::vector<double> out;
        const int steps = int(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9));
        for (int i = 0; i <= steps; ++i)
            out.push_back(snr_start_db + i * snr_step_db);
        return out;
    }

    std::string ExperimentSpec::sweep_axis() const
    {
        if (name == "sweep-yaw")
            return "yaw";
        if (name == "sweep-pitch")
            return "pitch";
        if (name == "roll-profile")
            return "roll";
        return sweep.axis == "auto" ? "both" : sweep.axis;
    }

    std::vector<double> ExperimentSpec::sweep_grid_deg() const
    {
        double start = 0.0, stop = 85.0;
        int count = 18;
        if (name == "roll-profile")
        {
            start = -180.0;
            stop = 180.0;
            count = 3601;
        }
        else if (name == "hybrid-compare")
        {
            stop = 60.0;
            count = 3;
        }
        start = sweep.start_deg.value_or(start);
        stop = sweep.stop_deg.value_or(stop);
        count = sweep.count.value_or(count);
        std::vector<double> out;
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
        return out;
    }

    void ExperimentSpec::validate() const
    {
        const auto &names = experiment_names();
        require(name.empty() || std::find(names.begin(), names.end(), name) != names.end(), "experiment",
                "unknown experiment '" + name + "'");
        require(n_elements >= 1, "scenario.n_elements", "must be >= 1");
        require(tx_radius_lambda > 0.0, "scenario.tx_radius_lambda", "must be > 0");
        require(rx_radius_lambda > 0.0, "scenario.rx_radius_lambda", "must be > 0");
        require(range_lambda > 0.0, "scenario.range_lambda", "must be > 0");
        require(!modes.empty(), "scenario.modes", "at least one mode is required");
        require(modes.size() <= std::size_t(n_elements), "scenario.modes", "more modes than elements");
        {
            std::set<int> residues;
            for (int l : modes)
                residues.insert(((l % n_elements) + n_elements) % n_elements);
            require(residues.size() == modes.size(), "scenario.modes", "modes must be distinct modulo N");
        }
        require(freq_first_hz > 0.0, "scenario.freq_first_hz", "must be > 0");
        require(!subcarriers || *subcarriers >= 1, "scenario.subcarriers", "must be >= 1");
        require(resolved_subcarriers() == 1 || freq_last_hz > freq_first_hz, "scenario.freq_last_hz",
                "must exceed scenario.freq_first_hz");
        require(!beta || *beta > 0.0, "scenario.beta", "must be > 0");
        require(tilt_ok(gamma_deg), "pose.gamma_deg", "must lie in (-90, 90)");
        require(tilt_ok(psi_deg), "pose.psi_deg", "must lie in (-90, 90)");

        require(sa.t_init > 0.0, "sa.t_init", "must be > 0");
        require(sa.t_min > 0.0 && sa.t_min < sa.t_init, "sa.t_min", "must lie in (0, sa.t_init)");
        require(sa.cooling > 0.0 && sa.cooling < 1.0, "sa.cooling", "must lie in (0, 1)");
        require(sa.inner_iters >= 1, "sa.inner_iters", "must be >= 1");
        require(!sa.step_scale || *sa.step_scale > 0.0, "sa.step_scale_rad", "must be > 0");
        require(sa.step_exponent >= 0.0, "sa.step_exponent", "must be >= 0");

        require(servo_pulse_min_s > 0.0, "servo.pulse_min_s", "must be > 0");
        require(servo_pulse_mid_s > servo_pulse_min_s, "servo.pulse_mid_s", "must exceed servo.pulse_min_s");
        require(servo_pulse_max_s > servo_pulse_mid_s, "servo.pulse_max_s", "must exceed servo.pulse_mid_s");
        require(servo_period_s >= servo_pulse_max_s, "servo.period_s", "must be >= servo.pulse_max_s");
        require(servo_accuracy_deg > 0.0, "servo.accuracy_deg", "must be > 0");
        require(tilt_ok(gamma_deg + aoa_gamma_error_deg), "aoa.gamma_error_deg", "estimate leaves (-90, 90)");
        require(tilt_ok(psi_deg + aoa_psi_error_deg), "aoa.psi_error_deg", "estimate leaves (-90, 90)");

        require(sweep.axis == "auto" || sweep.axis == "yaw" || sweep.axis == "pitch" || sweep.axis == "both",
                "sweep.axis", "must be yaw, pitch, both or auto");
        require(sweep.axis == "auto" || name == "hybrid-compare" || name.empty(), "sweep.axis",
                "only hybrid-compare takes an axis");
        require(!sweep.count || *sweep.count >= 1, "sweep.count", "must be >= 1");
        if (name != "roll-profile")
        {
            require(!sweep.start_deg || tilt_ok(*sweep.start_deg), "sweep.start_deg", "must lie in (-90, 90)");
            require(!sweep.stop_deg || tilt_ok(*sweep.stop_deg), "sweep.stop_deg", "must lie in (-90, 90)");
        }

        require(snr_step_db > 0.0, "snr.step_db", "must be > 0");
        require(snr_stop_db >= snr_start_db, "snr.stop_db", "must be >= snr.start_db");

        require(mono_coupling > 0.0, "monotonicity.coupling", "must be > 0");
        require(mono_start_deg > 0.0 && mono_start_deg < 90.0, "monotonicity.start_deg", "must lie in (0, 90)");
        require(mono_stop_deg > mono_start_deg && mono_stop_deg < 90.0, "monotonicity.stop_deg",
                "must lie in (monotonicity.start_deg, 90)");
        require(mono_count >= 1, "monotonicity.count", "must be >= 1");

        require(cx_n_first >= 1, "complexity.n_first", "must be >= 1");
        require(cx_n_last >= cx_n_first, "complexity.n_last", "must be >= complexity.n_first");
        require(cx_p_first >= 1, "complexity.p_first", "must be >= 1");
        require(cx_p_last >= cx_p_first, "complexity.p_last", "must be >= complexity.p_first");
        require(cx_p_coarse >= 1, "complexity.p_coarse", "must be >= 1");
        require(cx_u_coarse >= 1, "complexity.u_coarse", "must be >= 1");
        require(cx_p_fine >= cx_p_coarse, "complexity.p_fine", "must be >= complexity.p_coarse");
        require(cx_u_fine >= cx_u_coarse, "complexity.u_fine", "must be >= complexity.u_coarse");
    }

    ExperimentSpec parse_config(std::string_view text)
    {
        ExperimentSpec spec;
        std::set<std::string> seen;
        int line_no = 0;
        while (!text.empty())
        {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;

            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");

            const auto &table = fields();
            const auto it = std::find_if(table.begin(), table.end(), [&](const Field &f) { return key == f.key; });
            if (it == table.end())
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            if (!seen.insert(key).second)
                throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
            try
            {
                it->set(spec, value);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
            }
        }
        spec.validate();
        return spec;
    }

    std::string serialize(const ExperimentSpec &spec)
    {
        std::string out;
        for (const Field &f : fields())
            out += std::string(f.key) + " = " + f.get(spec) + "\n";
        return out;
    }

    int count_periodic_maxima(const std::vector<double> &values, double tolerance)
    {
        const std::size_t n = values.size();
        if (n < 3)
            return 0;
        int count = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double prev = values[(i + n - 1) % n], next = values[(i + 1) % n];
            if (values[i] > prev + tolerance && values[i] > next + tolerance)
                ++count;
        }
        return count;
    }

    namespace
    {
        using Rows = std::vector<std::vector<std::string>>;

        struct Output
        {
            std::string file;
            std::vector<std::string> header;
            Rows rows;
        };

        void write_csv(const std::filesystem::path &path, const Output &o)
        {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + path.string());
            for (std::size_t i = 0; i < o.header.size(); ++i)
                f << (i ? "," : "") << csv_quote(o.header[i]);
            f << "\r\n";
            CsvWriter csv(f);
            for (const auto &row : o.rows)
                csv.row(row);
            if (!f)
                throw std::runtime_error("write failed for " + path.string());
        }

        std::vector<Output> run_tilt_sweep(const ExperimentSpec &spec, const RunOptions &opt, TiltAxis axis)
        {
            const LinkConfig cfg = spec.link();
            const std::vector<double> angles = spec.sweep_grid_deg();
            const std::vector<double> snrs = spec.snr_grid_db();
            const std::vector<OamMatrix> aligned = aligned_effective(0.0, cfg);

            const auto blocks = parallel_map<Rows>(angles.size(), opt.workers, [&](std::size_t i) {
                const double a = angles[i] * deg_to_rad;
                const Pose pose = axis == TiltAxis::yaw ? Pose{a, 0.0, 0.0} : Pose{0.0, a, 0.0};
                const std::vector<OamMatrix> eo = electronic_only(pose, cfg);
                Rows rows;
                for (double snr : snrs)
                {
                    const double rho = std::pow(10.0, snr / 10.0);
                    rows.push_back({num(angles[i]), num(snr), "electronic", num(capacity(eo, rho))});
                    rows.push_back({num(angles[i]), num(snr), "aligned", num(capacity(aligned, rho))});
                }
                return rows;
            });
            Output o{spec.name + ".csv", {"angle_deg", "snr_db", "scheme", "capacity_bps_hz"}, {}};
            for (const auto &b : blocks)
                o.rows.insert(o.rows.end(), b.begin(), b.end());
            return {o};
        }

        std::vector<Output> run_roll_profile(const ExperimentSpec &spec, const RunOptions &opt)
        {
            const LinkConfig cfg = spec.link();
            const std::vector<double> thetas = spec.sweep_grid_deg();
            const auto values = parallel_map<double>(thetas.size(), opt.workers, [&](std::size_t i) {
                return capacity_objective(thetas[i] * deg_to_rad, cfg);
            });
            Output o{spec.name + ".csv", {"theta_deg", "capacity_bps_hz"}, {}};
            for (std::size_t i = 0; i < thetas.size(); ++i)
                o.rows.push_back({num(thetas[i]), num(values[i])});
            return {o};
        }

        std::vector<Output> run_hybrid_compare(const ExperimentSpec &spec, const RunOptions &opt)
        {
            const LinkConfig base = spec.link();
            const ServoConfig servo = spec.servo();
            const std::vector<double> angles = spec.sweep_grid_deg();
            const std::vector<double> snrs = spec.snr_grid_db();
            const std::string axis = spec.sweep_axis();
            const AoaEstimator estimator =
                aoa_with_error(spec.aoa_gamma_error_deg * deg_to_rad, spec.aoa_psi_error_deg * deg_to_rad);

            auto link_at = [&](double snr_db) {
                LinkConfig cfg = base;
                cfg.snr = std::pow(10.0, snr_db / 10.0);
                return cfg;
            };
            // The roll objective depends on the SNR only, not on the pose.
            const auto thetas = parallel_map<double>(snrs.size(), opt.workers, [&](std::size_t j) {
                return optimize_roll(link_at(snrs[j]), spec.sa).theta_star;
            });

            const auto blocks = parallel_map<Rows>(angles.size(), opt.workers, [&](std::size_t i) {
                const double a = angles[i] * deg_to_rad;
                const Pose pose{axis == "pitch" ? 0.0 : a, axis == "yaw" ? 0.0 : a, 0.0};
                const std::vector<OamMatrix> eo = electronic_only(pose, base);
                Rows rows;
                for (std::size_t j = 0; j < snrs.size(); ++j)
                {
                    const LinkConfig cfg = link_at(snrs[j]);
                    const HybridOutcome h = hybrid_with_roll(pose, thetas[j], cfg, servo, estimator);
                    const std::vector<OamMatrix> perfect = aligned_effective(h.command.roll_cmd, cfg);
                    rows.push_back({num(pose.gamma / deg_to_rad), num(pose.psi / deg_to_rad), num(snrs[j]),
                                    num(h.command.roll_cmd / deg_to_rad), num(capacity(h.effective, cfg.snr)),
                                    num(capacity(eo, cfg.snr)), num(capacity(perfect, cfg.snr))});
                }
                return rows;
            });
            Output o{spec.name + ".csv",
                     {"gamma_deg", "psi_deg", "snr_db", "theta_star_deg", "hybrid_bps_hz", "electronic_bps_hz",
                      "perfect_bps_hz"},
                     {}};
            for (const auto &b : blocks)
                o.rows.insert(o.rows.end(), b.begin(), b.end());
            return {o};
        }

        std::vector<Output> run_sa_trace(const ExperimentSpec &spec)
        {
            const SaResult r = optimize_roll(spec.link(), spec.sa);
            Output o{spec.name + ".csv", {"outer_iter", "temperature", "best_theta_rad", "best_capacity_bps_hz", "accepted"},
                     {}};
            for (const SaTraceRow &t : r.trace)
                o.rows.push_back({num((long long)t.outer_iter), num(t.temperature), num(t.best_theta),
                                  num(t.best_capacity), num((long long)t.accepted)});
            return {o};
        }

        std::vector<Output> run_monotonicity(const ExperimentSpec &spec, const RunOptions &opt)
        {
            spec.validate();
            std::vector<double> grid;
            for (int i = 0; i < spec.mono_count; ++i)
                grid.push_back((spec.mono_count == 1
                                    ? spec.mono_start_deg
                                    : spec.mono_start_deg + (spec.mono_stop_deg - spec.mono_start_deg) * i /
                                                                (spec.mono_count - 1)) *
                               deg_to_rad);
            const std::size_t u_count = spec.modes.size();
            struct Job
            {
                MonotonicityReport exact, asymptotic;
            };
            const auto jobs = parallel_map<Job>(2 * u_count, opt.workers, [&](std::size_t k) {
                const TiltAxis axis = k < u_count ? TiltAxis::yaw : TiltAxis::pitch;
                const std::size_t u = k % u_count;
                return Job{check_monotonicity(axis, spec.modes, spec.n_elements, u, spec.mono_coupling, grid),
                           check_monotonicity(axis, spec.modes, spec.n_elements, u, spec.mono_coupling, grid,
                                              SirModel::asymptotic)};
            });
            Output values{spec.name + ".csv", {"axis", "mode", "angle_deg", "sir_exact", "sir_asymptotic"}, {}};
            Output summary{spec.name + "_summary.csv",
                           {"axis", "mode", "exact_decreasing", "exact_worst_increase", "asymptotic_decreasing"},
                           {}};
            for (std::size_t k = 0; k < jobs.size(); ++k)
            {
                const std::string axis = k < u_count ? "yaw" : "pitch";
                const std::string mode = num((long long)spec.modes[k % u_count]);
                for (std::size_t i = 0; i < grid.size(); ++i)
                    values.rows.push_back({axis, mode, num(grid[i] / deg_to_rad), num(jobs[k].exact.values[i]),
                                           num(jobs[k].asymptotic.values[i])});
                summary.rows.push_back({axis, mode, jobs[k].exact.decreasing ? "true" : "false",
                                        num(jobs[k].exact.worst_increase),
                                        jobs[k].asymptotic.decreasing ? "true" : "false"});
            }
            return {values, summary};
        }

        std::vector<Output> run_complexity(const ExperimentSpec &spec)
        {
            spec.validate();
            ComplexityParams q;
            q.u_data = int(spec.modes.size());
            q.p_coarse = spec.cx_p_coarse;
            q.u_coarse = spec.cx_u_coarse;
            q.p_fine = spec.cx_p_fine;
            q.u_fine = spec.cx_u_fine;
            q.inner_iters = spec.sa.inner_iters;
            q.cooling = spec.sa.cooling;
            q.t_init = spec.sa.t_init;
            q.t_min = spec.sa.t_min;
            q.psi_hat = spec.cx_psi_hat_deg * deg_to_rad;
            q.gamma_hat = spec.cx_gamma_hat_deg * deg_to_rad;
            q.theta_star = spec.cx_theta_star_deg * deg_to_rad;
            q.nu = spec.servo_accuracy_deg * deg_to_rad;
            Output o{spec.name + ".csv", {"N", "P", "cost_hybrid", "cost_electronic", "ratio"}, {}};
            for (const ComplexityRow &r :
                 complexity_sweep(q, spec.cx_n_first, spec.cx_n_last, spec.cx_p_first, spec.cx_p_last))
                o.rows.push_back({num((long long)r.n_elements), num((long long)r.p_data), num(r.hybrid),
                                  num(r.electronic), num(r.ratio)});
            return {o};
        }
    }

    RunResult run(const ExperimentSpec &spec, const RunOptions &options)
    {
        spec.validate();
        if (spec.name.empty())
            throw ConfigError("experiment: no experiment selected");
        if (options.workers < 1)
            throw ConfigError("workers: must be >= 1");

        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Output> outputs;
        if (spec.name == "sweep-yaw")
            outputs = run_tilt_sweep(spec, options, TiltAxis::yaw);
        else if (spec.name == "sweep-pitch")
            outputs = run_tilt_sweep(spec, options, TiltAxis::pitch);
        else if (spec.name == "roll-profile")
            outputs = run_roll_profile(spec, options);
        else if (spec.name == "hybrid-compare")
            outputs = run_hybrid_compare(spec, options);
        else if (spec.name == "sa-trace")
            outputs = run_sa_trace(spec);
        else if (spec.name == "monotonicity")
            outputs = run_monotonicity(spec, options);
        else
            outputs = run_complexity(spec);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::error_code ec;
        std::filesystem::create_directories(options.out_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create " + options.out_dir.string() + ": " + ec.message());

        RunResult result;
        result.wall_seconds = wall;
        for (const Output &o : outputs)
        {
            result.files.push_back(options.out_dir / o.file);
            write_csv(result.files.back(), o);
        }

        const auto manifest = options.out_dir / "manifest.txt";
        std::ofstream m(manifest, std::ios::binary);
        if (!m)
            throw std::runtime_error("cannot write " + manifest.string());
        m << "# experiment: " << spec.name << "\n";
        m << "# code_version: " << options.code_version << "\n";
        m << "# seed: " << spec.sa.rng_seed << "\n";
        m << "# workers: " << options.workers << "\n";
        m << "# wall_time_s: " << num(wall) << "\n";
        for (const Output &o : outputs)
            m << "# output: " << o.file << "\n";
        m << serialize(spec);
        if (!m)
            throw std::runtime_error("write failed for " + manifest.string());
        result.files.push_back(manifest);
        return result;
    }
}
