// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsteer/optimizer.hpp"
#include "oamsteer/steering.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace oam;
using namespace std::complex_literals;

namespace
{
    constexpr double pi = std::numbers::pi;
    constexpr double deg = deg_to_rad;

    double offdiag_db(const CMatrix &h)
    {
        const double diag = h.diagonal().squaredNorm();
        return 10.0 * std::log10((h.squaredNorm() - diag) / diag);
    }

    // Rotation-matrix brute force of the rolled, residual-tilted receive array.
    CMatrix brute_force_rolled(std::size_t p, const Pose &residual, const LinkConfig &cfg)
    {
        const int n = cfg.rx.n_elements;
        const double k = cfg.carriers.wavenumber(p);
        const Rot3 rot = rotation_matrix(Axis::yaw, residual.gamma) * rotation_matrix(Axis::pitch, residual.psi) *
                         rotation_matrix(Axis::roll, residual.roll);
        CMatrix h(n, n);
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j)
            {
                const double th = 2 * pi * m / n, ph = 2 * pi * j / n;
                const Vec3 q = rot * Vec3(cfg.rx.radius * std::cos(th), cfg.rx.radius * std::sin(th), 0) +
                               Vec3(0, 0, cfg.range);
                const double d = (q - Vec3(cfg.tx.radius * std::cos(ph), cfg.tx.radius * std::sin(ph), 0)).norm();
                h(m, j) = cfg.beta_value() / (2 * k * d) * std::exp(-1i * k * d);
            }
        return h;
    }
}

TEST_CASE("electronic-only phases")
{
    const LinkConfig cfg = LinkConfig::defaults();
    CHECK(phases_eo(0, 0.0, 0.0, cfg).phases.cwiseAbs().maxCoeff() == 0.0);
    const double g = 25 * deg;
    const SteeringPhases w = phases_eo(3, 0.0, g, cfg);
    for (int m = 0; m < 10; ++m)
        CHECK(w.phases[m] == doctest::Approx(-cfg.carriers.wavenumber(3) * cfg.rx.radius * std::cos(2 * pi * m / 10) *
                                             std::sin(g)));
}

TEST_CASE("EO steering removes the linear k R term entrywise")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const double gamma = 30 * deg, psi = 20 * deg;
    for (std::size_t p : {0u, 5u})
    {
        const ChannelMatrix h = channel_matrix(p, {{gamma, psi, 0}}, cfg);
        const CMatrix steered = h.h.array().colwise() * phases_eo(p, psi, gamma, cfg).weights().array();
        const double s = cfg.coupling(p), amp = cfg.beta_value() / (2 * cfg.carriers.wavenumber(p) * cfg.range);
        for (int m = 0; m < 10; ++m)
            for (int n = 0; n < 10; ++n)
            {
                const double th = 2 * pi * m / 10, ph = 2 * pi * n / 10;
                const double phase = s * (std::cos(th) * std::cos(ph) * std::cos(gamma) +
                                          std::sin(th) * std::cos(ph) * std::sin(psi) * std::sin(gamma) +
                                          std::sin(th) * std::sin(ph) * std::cos(psi));
                const cdouble expected = amp * std::exp(-1i * cfg.carriers.wavenumber(p) * cfg.range + 1i * phase);
                CHECK(std::abs(steered(m, n) - expected) <= 1e-10 * amp);
            }
    }
}

TEST_CASE("E1, E2 and their combination")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const ResidualPose zero{};
    CHECK(phases_e1(0, zero, cfg).phases.cwiseAbs().maxCoeff() == 0.0);
    CHECK(phases_e2(0, zero, 0.2, cfg).phases.cwiseAbs().maxCoeff() == 0.0);
    const ResidualPose r{0.2 * deg, -0.3 * deg};
    CHECK(phases_e2(0, r, 0.0, cfg).phases.cwiseAbs().maxCoeff() == 0.0);
    CHECK(phases_e1(4, r, cfg).phases == phases_eo(4, r.psi_bar, r.gamma_bar, cfg).phases);
    CHECK(combined_e(4, r, 0.0, cfg).phases == phases_e1(4, r, cfg).phases);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> small(-0.3 * deg, 0.3 * deg), roll(-pi / 10, pi / 10);
    for (int i = 0; i < 50; ++i)
    {
        const ResidualPose q{small(rng), small(rng)};
        const double t = roll(rng);
        const Eigen::VectorXd sum = phases_e1(2, q, cfg).phases + phases_e2(2, q, t, cfg).phases;
        CHECK((combined_e(2, q, t, cfg).phases - sum).cwiseAbs().maxCoeff() == 0.0);

        // E1 + E2 equals the tilt phase evaluated at the rolled element angles.
        LinkConfig rolled = cfg;
        rolled.rx.initial_angle += t;
        CHECK((sum - phases_e1(2, q, rolled).phases).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("mechanical pitch and yaw")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const Pose pose{35 * deg, -20 * deg, 0};
    const PitchYawOutcome perfect = mechanical_pitch_yaw(pose, {pose.gamma, pose.psi, 0}, cfg);
    CHECK(perfect.residual.gamma_bar == 0.0);
    CHECK(perfect.residual.psi_bar == 0.0);
    const auto aligned = channel_matrices({}, cfg);
    for (std::size_t p = 0; p < aligned.size(); ++p)
        CHECK((perfect.channels[p].h - aligned[p].h).cwiseAbs().maxCoeff() == 0.0);

    const PitchYawOutcome null = mechanical_pitch_yaw(pose, {}, cfg);
    const auto original = channel_matrices({pose}, cfg);
    for (std::size_t p = 0; p < original.size(); ++p)
        CHECK((null.channels[p].h - original[p].h).cwiseAbs().maxCoeff() == 0.0);

    const ServoConfig servo;
    const Pose big{60 * deg, 60 * deg, 0};
    const MechanicalCommand cmd{execute_rotation(big.gamma, servo).achieved, execute_rotation(big.psi, servo).achieved, 0};
    const PitchYawOutcome q = mechanical_pitch_yaw(big, cmd, cfg, servo);
    CHECK(std::abs(q.residual.gamma_bar) <= 0.3 * deg);
    CHECK(std::abs(q.residual.psi_bar) <= 0.3 * deg);

    CHECK_THROWS_AS(mechanical_pitch_yaw(pose, {2.0, 0, 0}, cfg), std::domain_error);
}

TEST_CASE("mechanical roll")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const ResidualPose r{0.25 * deg, -0.15 * deg};
    const Pose pose{40 * deg, 30 * deg, 0};
    const PitchYawOutcome f1 = mechanical_pitch_yaw(pose, {pose.gamma - r.gamma_bar, pose.psi - r.psi_bar, 0}, cfg);
    const auto unrolled = mechanical_roll(f1.residual, 0.0, cfg);
    for (std::size_t p = 0; p < unrolled.size(); ++p)
        CHECK((unrolled[p].h - f1.channels[p].h).cwiseAbs().maxCoeff() <= 1e-12);

    // A roll by one element spacing relabels receive rows when aligned.
    const auto base = mechanical_roll({}, 0.0, cfg);
    const auto step = mechanical_roll({}, 2 * pi / 10, cfg);
    for (std::size_t p = 0; p < base.size(); ++p)
        for (int m = 0; m < 10; ++m)
            CHECK((step[p].h.row(m) - base[p].h.row((m + 1) % 10)).cwiseAbs().maxCoeff() <= 1e-10);

    const Pose residual{r.gamma_bar, r.psi_bar, 0.1};
    for (std::size_t p : {0u, 7u})
    {
        const CMatrix oracle = brute_force_rolled(p, residual, cfg);
        const CMatrix exact = channel_matrix(p, {Pose{}, residual, Stage::after_roll}, cfg, DistanceMethod::exact).h;
        CHECK((exact - oracle).cwiseAbs().maxCoeff() <= 1e-10 * oracle.cwiseAbs().maxCoeff());
        const auto ff = mechanical_roll(r, 0.1, cfg);
        CHECK((ff[p].h - channel_matrix(p, {Pose{}, residual, Stage::after_roll}, cfg).h).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("closed-form roll diagonal")
{
    const LinkConfig cfg = LinkConfig::defaults();
    for (int l : cfg.modes)
        for (double t : {-0.9, -0.2, 0.0, 0.05, 0.31})
        {
            const cdouble a = closed_form_diag(1, l, t, cfg), b = closed_form_diag(1, l, t + 2 * pi / 10, cfg);
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(a) + 1e-14);
            // Shifting the mode by N only rotates the phase by exp(-i N theta).
            const cdouble shifted = closed_form_diag(1, l + 10, t, cfg);
            CHECK(std::abs(shifted - std::polar(1.0, -10 * t) * a) <= 1e-12 * std::abs(a) + 1e-14);
        }
}

TEST_CASE("closed-form diagonal and matrix product agree (single reconciliation point)")
{
    for (double rx0 : {0.0, 0.13})
    {
        LinkConfig cfg = LinkConfig::defaults();
        cfg.rx.initial_angle = rx0;
        cfg.tx.initial_angle = 0.05;
        for (double theta : {0.0, 0.1445, -0.3, 1.0})
            for (std::size_t p = 0; p < cfg.carriers.size(); p += 3)
            {
                const CMatrix h = oam_effective(mechanical_roll({}, theta, cfg)[p], cfg.modes).h;
                const double scale = 100.0 * std::abs(cfg.eta(p));
                for (std::size_t u = 0; u < cfg.modes.size(); ++u)
                {
                    CHECK(std::abs(h(u, u) - effective_diag(p, cfg.modes[u], theta, cfg)) <= 1e-11 * scale);
                    // Magnitudes agree with the raw closed form at the shifted angle.
                    const double shifted = rx0 - 0.05 + theta;
                    CHECK(std::abs(std::abs(h(u, u)) - std::abs(closed_form_diag(p, cfg.modes[u], shifted, cfg))) <=
                          1e-11 * scale);
                }
            }
    }
    const LinkConfig cfg = LinkConfig::defaults();
    const CMatrix h = oam_effective(channel_matrix(0, {}, cfg), cfg.modes).h;
    for (std::size_t u = 0; u < cfg.modes.size(); ++u)
        CHECK(std::abs(h(u, u) - closed_form_diag(0, cfg.modes[u], 0.0, cfg)) <= 1e-11 * 100 * std::abs(cfg.eta(0)));
}

TEST_CASE("E1 and hybrid suppression bounds")
{
    const LinkConfig cfg = LinkConfig::defaults();
    double worst_e1 = -1e9, worst_h = -1e9;
    for (double gb : {-0.3, -0.1, 0.0, 0.2, 0.3})
        for (double pb : {-0.3, 0.0, 0.15, 0.3})
        {
            const ResidualPose r{gb * deg, pb * deg};
            const Pose pose{60 * deg, 60 * deg, 0};
            const PitchYawOutcome f1 = mechanical_pitch_yaw(pose, {pose.gamma - r.gamma_bar, pose.psi - r.psi_bar, 0}, cfg);
            for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
                worst_e1 = std::max(worst_e1, offdiag_db(oam_effective(f1.channels[p], cfg.modes, phases_e1(p, r, cfg)).h));
            for (double t : {-pi / 10, -0.1445, 0.0, 0.07, pi / 10})
            {
                const auto rolled = mechanical_roll(r, t, cfg);
                for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
                    worst_h = std::max(worst_h, offdiag_db(oam_effective(rolled[p], cfg.modes, combined_e(p, r, t, cfg)).h));
            }
        }
    MESSAGE("worst off-diagonal power: E1 " << worst_e1 << " dB, hybrid " << worst_h << " dB");
    CHECK(worst_e1 <= -40.0);
    CHECK(worst_h <= -40.0);
}

TEST_CASE("hybrid diagonal versus the small-residual closed form")
{
    // After steering, the phase left on pair (m, n) differs from the aligned one by
    // S [cos t cos f (cos gb - 1) + sin t cos f sin pb sin gb + sin t sin f (cos pb - 1)],
    // so the diagonal error is bounded by |eta| times the sum of those magnitudes.
    const LinkConfig cfg = LinkConfig::defaults();
    double worst_small = 0.0, worst_full = 0.0;
    for (double gb : {-0.3, -0.15, -0.1, 0.0, 0.15, 0.3})
        for (double pb : {-0.3, -0.15, 0.0, 0.1, 0.15, 0.3})
            for (double t : {-pi / 10, -0.1445, 0.0, 0.07, pi / 10})
            {
                const ResidualPose r{gb * deg, pb * deg};
                const auto rolled = mechanical_roll(r, t, cfg);
                for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
                {
                    const CMatrix h = oam_effective(rolled[p], cfg.modes, combined_e(p, r, t, cfg)).h;
                    double bound = 0.0;
                    for (int m = 0; m < 10; ++m)
                        for (int n = 0; n < 10; ++n)
                        {
                            const double th = 2 * pi * m / 10 + t, ph = 2 * pi * n / 10;
                            bound += std::abs(std::cos(th) * std::cos(ph) * (std::cos(r.gamma_bar) - 1) +
                                              std::sin(th) * std::cos(ph) * std::sin(r.psi_bar) * std::sin(r.gamma_bar) +
                                              std::sin(th) * std::sin(ph) * (std::cos(r.psi_bar) - 1));
                        }
                    bound *= cfg.coupling(p) * std::abs(cfg.eta(p));
                    for (std::size_t u = 0; u < cfg.modes.size(); ++u)
                    {
                        const cdouble eq = effective_diag(p, cfg.modes[u], t, cfg);
                        const double err = std::abs(h(u, u) - eq);
                        CHECK(err <= bound * (1 + 1e-6) + 1e-11 * 100 * std::abs(cfg.eta(p)));
                        const double rel = err / std::abs(eq);
                        worst_full = std::max(worst_full, rel);
                        if (std::abs(gb) <= 0.15 && std::abs(pb) <= 0.15)
                            worst_small = std::max(worst_small, rel);
                    }
                }
            }
    MESSAGE("diagonal relative error: residuals <= 0.15 deg " << worst_small << ", <= 0.3 deg " << worst_full);
    CHECK(worst_small <= 1e-3);
    // Second-order residual terms reach about 2.2e-3 at 0.3 deg; frozen as a regression bound.
    CHECK(worst_full <= 2.5e-3);
}

TEST_CASE("steering inverse")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const SteeringPhases w = phases_eo(1, 0.4, -0.2, cfg);
    const CMatrix f = partial_dft(cfg.modes, 10);
    const CMatrix back = (f * w.weights().asDiagonal()) * (-w).weights().asDiagonal();
    CHECK((back - f).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hybrid pipeline")
{
    const LinkConfig cfg = LinkConfig::defaults();
    const SaParams sa;
    const HybridOutcome aligned = hybrid_pipeline({}, cfg, sa);
    CHECK(aligned.command.yaw_cmd == 0.0);
    CHECK(aligned.command.pitch_cmd == 0.0);
    CHECK(std::abs(aligned.command.roll_cmd) <= pi / 10);
    const auto reference = aligned_effective(aligned.command.roll_cmd, cfg);
    for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
        CHECK((aligned.effective[p].h - reference[p].h).cwiseAbs().maxCoeff() <= 1e-12);

    const Pose big{60 * deg, 60 * deg, 0};
    for (const AoaEstimator &est : {AoaEstimator{}, aoa_with_error(0.15 * deg, -0.3 * deg)})
    {
        const HybridOutcome two = hybrid_with_roll(big, 0.1445, cfg, {}, est, Ordering::two_step);
        const HybridOutcome four = hybrid_with_roll(big, 0.1445, cfg, {}, est, Ordering::four_step);
        for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
        {
            CHECK((two.effective[p].h - four.effective[p].h).cwiseAbs().maxCoeff() <= 1e-12);
            for (std::size_t u = 0; u < cfg.modes.size(); ++u)
            {
                const cdouble eq = effective_diag(p, cfg.modes[u], two.command.roll_cmd, cfg);
                CHECK(std::abs(two.effective[p].h(u, u) - eq) <= 2.5e-3 * std::abs(eq));
            }
        }
        CHECK(two.pitch_yaw_steps > 300);
        CHECK(two.roll_steps == std::lround(std::abs(two.command.roll_cmd) / (0.3 * deg)));
    }
}

TEST_CASE("pose roll in the pipelines")
{
    const LinkConfig cfg = LinkConfig::defaults();
    // Electronic-only steering with a rolled pose equals the unrolled pose on a rotated array.
    LinkConfig shifted = cfg;
    shifted.rx.initial_angle += 0.4;
    const auto rolled = electronic_only({20 * deg, 10 * deg, 0.4}, cfg);
    const auto moved = electronic_only({20 * deg, 10 * deg, 0.0}, shifted);
    for (std::size_t p = 0; p < rolled.size(); ++p)
        CHECK((rolled[p].h - moved[p].h).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(offdiag_db(rolled[0].h) < offdiag_db(electronic_only({20 * deg, 10 * deg, 0.0}, cfg)[0].h) + 1e-9);
    CHECK_THROWS_AS(hybrid_with_roll({20 * deg, 10 * deg, 0.1}, 0.1, cfg), std::domain_error);
}

TEST_CASE("phase schedule export")
{
    const LinkConfig cfg = LinkConfig::defaults();
    std::vector<SteeringPhases> phases;
    for (std::size_t p = 0; p < cfg.carriers.size(); ++p)
        phases.push_back(combined_e(p, {0.1 * deg, 0.2 * deg}, 0.1, cfg));
    std::ostringstream out;
    write_phase_csv(out, phases, cfg);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "subcarrier_hz,element_index,phase_rad\r");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 80);
}
