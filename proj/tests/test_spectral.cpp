#include "dmdplace/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dmdplace;

namespace {

Vector sine(double amplitude, double freq_hz, double dt, Index n, double phase = 0.0) {
    Vector x(n);
    for (Index k = 0; k < n; ++k) {
        x(k) = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                        static_cast<double>(k) * dt +
                                    phase);
    }
    return x;
}

}  // namespace

TEST_CASE("welch psd of the zero signal is zero") {
    const Vector      x = Vector::Zero(512);
    const PsdEstimate est = welch_psd(x, 0.01);
    CHECK(est.integrated_variance == 0.0);
    CHECK(est.psd.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("welch psd of a unit sine integrates to a^2/2") {
    const double a  = 1.7;
    const double dt = 1.0 / 500.0;
    const Vector x  = sine(a, 25.0, dt, 4096);
    const PsdEstimate est = welch_psd(x, dt);
    CHECK(est.integrated_variance == doctest::Approx(a * a / 2.0).epsilon(0.02));
}

TEST_CASE("integrated psd is Parseval-consistent on random multi-sines") {
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> amp(0.1, 2.0);
    std::uniform_real_distribution<double> freq(5.0, 180.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    const double dt = 1.0 / 400.0;
    const Index  n  = 4096;
    for (int trial = 0; trial < 100; ++trial) {
        // tones separated by >= 4 Hz so beat envelopes average out within
        // each Welch segment
        std::vector<double> tones;
        while (tones.size() < 4) {
            const double f  = freq(rng);
            bool         ok = true;
            for (double g : tones) {
                ok = ok && std::abs(f - g) >= 4.0;
            }
            if (ok) {
                tones.push_back(f);
            }
        }
        Vector x = Vector::Zero(n);
        for (double f : tones) {
            x += sine(amp(rng), f, dt, n, phase(rng));
        }
        const PsdEstimate est = welch_psd(x, dt);
        const double      mean_square = x.squaredNorm() / static_cast<double>(n);
        CHECK(est.integrated_variance ==
              doctest::Approx(mean_square).epsilon(0.02));
    }
}

TEST_CASE("dominant frequency locates a pure tone to sub-bin accuracy") {
    const double dt = 1.0 / 4000.0;
    const Vector x  = sine(1.0, 3.58, dt, 8000);
    const double f  = dominant_frequency(x.transpose(), dt);
    CHECK(f == doctest::Approx(3.58).epsilon(1e-4));
}

TEST_CASE("dominant frequency rejects degenerate records") {
    CHECK_THROWS_AS(dominant_frequency(Matrix::Zero(2, 64), 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(dominant_frequency(Matrix::Constant(1, 256, 3.0), 0.01),
                    std::invalid_argument);
}

TEST_CASE("magnitude spectrum peaks at the tone frequency") {
    const double dt = 1.0 / 256.0;
    const Vector x  = sine(2.0, 32.0, dt, 1024);
    const MagnitudeSpectrum spec = magnitude_spectrum(x, dt);
    Index peak = 0;
    for (Index k = 1; k < spec.magnitude.size(); ++k) {
        if (spec.magnitude(k) > spec.magnitude(peak)) {
            peak = k;
        }
    }
    CHECK(spec.freq_hz(peak) == doctest::Approx(32.0).epsilon(0.01));
}
