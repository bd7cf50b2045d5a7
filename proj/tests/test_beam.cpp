#include "dmdplace/beam.hpp"
#include "dmdplace/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dmdplace;

namespace {

ModeSet single_mode(double freq_hz, double zeta, double amplitude) {
    ModeSet set;
    set.modes = {{1.8751, amplitude, freq_hz, zeta}};
    return set;
}

// Random mode sets with increasing frequencies, small damping.
ModeSet random_mode_set(std::mt19937_64& rng, int n_modes) {
    std::uniform_real_distribution<double> amp(0.1, 1.0);
    std::uniform_real_distribution<double> zeta(0.005, 0.3);
    std::uniform_real_distribution<double> gap(2.0, 8.0);
    const ModeSet table = default_mode_table();

    ModeSet set;
    double  f = 2.0 + gap(rng);
    for (int i = 0; i < n_modes; ++i) {
        set.modes.push_back({table.modes[static_cast<std::size_t>(i)].lambda_const,
                             amp(rng), f, zeta(rng)});
        f += gap(rng) * 3.0;
    }
    return set;
}

}  // namespace

TEST_CASE("mode shape vanishes at the clamped root") {
    const ModeSet table = default_mode_table();
    for (const ModeSpec& mode : table.modes) {
        CHECK(mode_shape(mode, 0.0) == 0.0);
    }
}

TEST_CASE("mode shape at the tip matches the closed form") {
    const ModeSet table = default_mode_table();
    // Direct numeric evaluation of the clamped-free closed form at
    // lambda = 1.8751 gives 1.999994026344684.
    CHECK(mode_shape(table.modes[0], 1.0) == doctest::Approx(1.999994026344684).epsilon(1e-12));
    CHECK(std::abs(mode_shape(table.modes[0], 1.0) - 2.0) < 1e-4);
}

TEST_CASE("mode shape slope vanishes at the clamped root") {
    const ModeSet table = default_mode_table();
    for (const ModeSpec& mode : table.modes) {
        const double h     = 1e-7;
        const double slope = (mode_shape(mode, h) - mode_shape(mode, 0.0)) / h;
        // second-order behavior near zero: slope of O(h)
        CHECK(std::abs(slope) < 1e-4);
    }
}

TEST_CASE("modal frequencies follow the damped-to-natural conversion") {
    SUBCASE("negligible damping leaves omega = 2 pi f") {
        ModeSet set = single_mode(1.0, 1e-12, 1.0);
        const auto freqs = modal_frequencies(set);
        CHECK(freqs[0].first == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
        CHECK(freqs[0].second == 1.0);
    }
    SUBCASE("demo table row 1") {
        const auto freqs = modal_frequencies(default_mode_table());
        CHECK(freqs[0].first == doctest::Approx(22.494928174231696).epsilon(1e-12));
    }
    SUBCASE("demo table row 10") {
        const auto freqs = modal_frequencies(default_mode_table());
        CHECK(freqs[9].second == doctest::Approx(903.47));
        CHECK(freqs.size() == 10);
    }
}

TEST_CASE("zero amplitudes produce the zero matrix") {
    ModeSet set = default_mode_table();
    for (ModeSpec& m : set.modes) {
        m.amplitude = 0.0;
    }
    const SnapshotData data = simulate(set, 11, 1.0 / 4000.0, 0.05);
    CHECK(data.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single nearly undamped mode is periodic at 1/f") {
    const double f    = 3.58;
    const double dt   = 1.0 / 4000.0;
    const SnapshotData data = simulate(single_mode(f, 1e-9, 0.8), 11, dt, 2.0);
    const Vector tip = data.values.row(data.n_nodes() - 1).transpose();

    // autocorrelation peak over one-period lags
    const Index lag_lo = static_cast<Index>(0.5 / (f * dt));
    const Index lag_hi = static_cast<Index>(1.5 / (f * dt));
    Index  best_lag = lag_lo;
    double best     = -1e300;
    for (Index lag = lag_lo; lag <= lag_hi; ++lag) {
        double acc = 0.0;
        for (Index k = 0; k + lag < tip.size(); ++k) {
            acc += tip(k) * tip(k + lag);
        }
        acc /= static_cast<double>(tip.size() - lag);  // unbiased estimate
        if (acc > best) {
            best     = acc;
            best_lag = lag;
        }
    }
    CHECK(std::abs(static_cast<double>(best_lag) * dt - 1.0 / f) <= 2.0 * dt);
}

TEST_CASE("full demo table puts the dominant spectral peak at 3.58 Hz") {
    const SnapshotData data = simulate(default_mode_table(), 51, 1.0 / 4000.0, 2.0);
    const Vector tip  = data.values.row(data.n_nodes() - 1).transpose();
    const double peak = dominant_frequency(tip.transpose(), data.dt);
    CHECK(peak == doctest::Approx(3.58).epsilon(0.01));
}

TEST_CASE("simulate rejects invalid sampling and meshes") {
    const ModeSet table = default_mode_table();
    CHECK_THROWS_AS(simulate(table, 11, 1.0 / 1000.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(simulate(table, 1, 1.0 / 4000.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(simulate(table, 11, 1.0 / 4000.0, 2.5e-4), std::invalid_argument);
}

TEST_CASE("mode set invariants are enforced") {
    ModeSet set = default_mode_table();
    set.modes[3].freq_hz = set.modes[2].freq_hz;  // not increasing
    CHECK_THROWS_AS(set.validate(), std::invalid_argument);

    set                = default_mode_table();
    set.modes[0].zeta  = 1.0;
    CHECK_THROWS_AS(set.validate(), std::invalid_argument);

    set                     = default_mode_table();
    set.modes[5].amplitude  = -0.1;
    CHECK_THROWS_AS(set.validate(), std::invalid_argument);
}

TEST_CASE("superposition of disjoint mode subsets") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 100; ++trial) {
        const ModeSet both = random_mode_set(rng, 6);
        ModeSet a, b;
        for (std::size_t i = 0; i < both.modes.size(); ++i) {
            (i % 2 == 0 ? a : b).modes.push_back(both.modes[i]);
        }
        const double dt      = 1.0 / (4.0 * both.modes.back().freq_hz);
        const double t_final = 0.05;
        const SnapshotData sum  = simulate(both, 9, dt, t_final);
        const SnapshotData s_a  = simulate(a, 9, dt, t_final);
        const SnapshotData s_b  = simulate(b, 9, dt, t_final);
        const double       err  = (sum.values - s_a.values - s_b.values).cwiseAbs().maxCoeff();
        const double       norm = sum.values.cwiseAbs().maxCoeff();
        CHECK(err <= 1e-12 * std::max(norm, 1.0));
    }
}

TEST_CASE("isolated modes respect the decay envelope") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const ModeSet set = random_mode_set(rng, 1);
        const ModeSpec& m = set.modes[0];
        const double dt   = 1.0 / (6.0 * m.freq_hz);
        const SnapshotData data = simulate(set, 7, dt, 40.0 * dt);

        const double omega = 2.0 * std::numbers::pi * m.freq_hz /
                             std::sqrt(1.0 - m.zeta * m.zeta);
        const double phi_tip = std::abs(mode_shape(m, 1.0));
        for (Index k = 0; k < data.n_t(); ++k) {
            const double t        = static_cast<double>(k) * dt;
            const double envelope = m.amplitude * phi_tip * std::exp(-m.zeta * omega * t);
            CHECK(std::abs(data.values(data.n_nodes() - 1, k)) <= envelope + 1e-12);
        }
    }
}

TEST_CASE("root row is identically zero") {
    const SnapshotData data = simulate(default_mode_table(), 21, 1.0 / 4000.0, 0.1);
    CHECK(data.values.row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("damped signals front-load their energy") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const ModeSet set = random_mode_set(rng, 3);
        const double  dt  = 1.0 / (5.0 * set.modes.back().freq_hz);
        const SnapshotData data = simulate(set, 7, dt, 400.0 * dt);
        const Index half = data.n_t() / 2;
        const double front = data.values.leftCols(half).squaredNorm();
        const double back  = data.values.rightCols(data.n_t() - half).squaredNorm();
        CHECK(front >= back);
    }
}

TEST_CASE("uniform mesh spans the clamped root to the tip") {
    const Vector mesh = uniform_mesh(51, 1.0);
    CHECK(mesh(0) == 0.0);
    CHECK(mesh(50) == 1.0);
    for (Index i = 1; i < mesh.size(); ++i) {
        CHECK(mesh(i) > mesh(i - 1));
    }
}
