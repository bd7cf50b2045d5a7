#include "dmdplace/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dmdplace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXcd fft_forward(const Vector& x) {
    Eigen::FFT<double>   fft;
    std::vector<double>  in(x.data(), x.data() + x.size());
    std::vector<Complex> out;
    fft.fwd(out, in);
    return Eigen::Map<const Eigen::VectorXcd>(out.data(),
                                              static_cast<Index>(out.size()));
}

// Averaged Hann-tapered power at a continuous frequency f (Hz).
double tapered_power_at(const Eigen::Ref<const Matrix>& signals, double dt,
                        const Vector& window, double f) {
    const Index n_t   = signals.cols();
    double      total = 0.0;
    for (Index c = 0; c < signals.rows(); ++c) {
        Complex acc(0.0, 0.0);
        for (Index k = 0; k < n_t; ++k) {
            const double phase = -kTwoPi * f * static_cast<double>(k) * dt;
            acc += window(k) * signals(c, k) * Complex(std::cos(phase), std::sin(phase));
        }
        total += std::norm(acc);
    }
    return total;
}

}  // namespace

Vector hann_window(Index n) {
    if (n < 1) {
        throw std::invalid_argument("hann_window: empty window");
    }
    Vector w(n);
    if (n == 1) {
        w(0) = 1.0;
        return w;
    }
    for (Index k = 0; k < n; ++k) {
        w(k) = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) /
                                    static_cast<double>(n - 1));
    }
    return w;
}

PsdEstimate welch_psd(const Eigen::Ref<const Vector>& x, double dt,
                      int segments) {
    const Index n = x.size();
    if (n < 2) {
        throw std::invalid_argument("welch_psd: need at least 2 samples");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("welch_psd: dt must be positive");
    }
    if (segments < 1) {
        segments = 1;
    }

    // Half-overlapping segments: n >= seg_len * (segments + 1) / 2.
    Index seg_len = (2 * n) / (segments + 1);
    while (segments > 1 && seg_len < 8) {
        --segments;
        seg_len = (2 * n) / (segments + 1);
    }
    seg_len = std::min(seg_len, n);
    const Index hop = segments > 1 ? seg_len / 2 : seg_len;

    const Vector window     = hann_window(seg_len);
    const double window_pow = window.squaredNorm();
    const double fs         = 1.0 / dt;
    const Index  n_bins     = seg_len / 2 + 1;

    Vector psd = Vector::Zero(n_bins);
    Index  used = 0;
    for (Index s = 0; s < segments; ++s) {
        const Index start = s * hop;
        if (start + seg_len > n) {
            break;
        }
        const Vector           seg = window.cwiseProduct(x.segment(start, seg_len));
        const Eigen::VectorXcd X   = fft_forward(seg);
        for (Index k = 0; k < n_bins; ++k) {
            double p = std::norm(X(k)) / (fs * window_pow);
            const bool interior = k > 0 && !(seg_len % 2 == 0 && k == n_bins - 1);
            if (interior) {
                p *= 2.0;  // fold the negative-frequency half
            }
            psd(k) += p;
        }
        ++used;
    }
    if (used == 0) {
        throw std::invalid_argument("welch_psd: record too short for segmentation");
    }
    psd /= static_cast<double>(used);

    PsdEstimate est;
    est.df      = fs / static_cast<double>(seg_len);
    est.psd     = psd;
    est.freq_hz = Vector::LinSpaced(n_bins, 0.0, est.df * static_cast<double>(n_bins - 1));
    est.integrated_variance = psd.sum() * est.df;
    return est;
}

MagnitudeSpectrum magnitude_spectrum(const Eigen::Ref<const Vector>& x,
                                     double dt) {
    const Index n = x.size();
    if (n < 2) {
        throw std::invalid_argument("magnitude_spectrum: need at least 2 samples");
    }
    const Eigen::VectorXcd X      = fft_forward(x);
    const Index            n_bins = n / 2 + 1;

    MagnitudeSpectrum spec;
    spec.magnitude.resize(n_bins);
    for (Index k = 0; k < n_bins; ++k) {
        spec.magnitude(k) = std::abs(X(k)) / static_cast<double>(n);
    }
    const double df = 1.0 / (dt * static_cast<double>(n));
    spec.freq_hz = Vector::LinSpaced(n_bins, 0.0, df * static_cast<double>(n_bins - 1));
    return spec;
}

double dominant_frequency(const Eigen::Ref<const Matrix>& signals, double dt) {
    const Index n_ch = signals.rows();
    const Index n_t  = signals.cols();
    if (n_ch < 1 || n_t < 4) {
        throw std::invalid_argument("dominant_frequency: need at least 4 samples");
    }
    if (signals.cwiseAbs().maxCoeff() == 0.0) {
        throw std::invalid_argument("dominant_frequency: signal is identically zero");
    }

    // Coarse scan: averaged periodogram on a 4x zero-padded grid.
    const Index  n_pad = 4 * n_t;
    const Vector window = hann_window(n_t);
    Vector       power  = Vector::Zero(n_pad / 2 + 1);
    for (Index c = 0; c < n_ch; ++c) {
        Vector padded = Vector::Zero(n_pad);
        padded.head(n_t) = window.cwiseProduct(signals.row(c).transpose());
        const Eigen::VectorXcd X = fft_forward(padded);
        for (Index k = 0; k < power.size(); ++k) {
            power(k) += std::norm(X(k));
        }
    }

    // Exclude the DC lobe of the Hann taper (two padded bins per raw bin).
    const Index first = std::min<Index>(2 * 4, power.size() - 1);
    Index       peak  = first;
    for (Index k = first; k < power.size(); ++k) {
        if (power(k) > power(peak)) {
            peak = k;
        }
    }
    const double df_pad = 1.0 / (dt * static_cast<double>(n_pad));
    // A constant record leaks at most ~7e-4 of its DC power into any
    // positive-frequency bin (first Hann sidelobe); a genuine oscillation
    // carries its maximum there.
    if (power(peak) == 0.0 || power(peak) < 1e-2 * power.maxCoeff()) {
        throw std::invalid_argument("dominant_frequency: no oscillatory peak found");
    }

    // Golden-section refinement of the continuous-frequency tapered power
    // within one padded bin of the coarse peak.
    double lo = std::max(0.0, df_pad * static_cast<double>(peak - 1));
    double hi = std::min(0.5 / dt, df_pad * static_cast<double>(peak + 1));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo);
    double b = lo + gr * (hi - lo);
    double fa = tapered_power_at(signals, dt, window, a);
    double fb = tapered_power_at(signals, dt, window, b);
    for (int it = 0; it < 60 && (hi - lo) > 1e-9 / (dt * static_cast<double>(n_t)); ++it) {
        if (fa < fb) {
            lo = a;
            a  = b;
            fa = fb;
            b  = lo + gr * (hi - lo);
            fb = tapered_power_at(signals, dt, window, b);
        } else {
            hi = b;
            b  = a;
            fb = fa;
            a  = hi - gr * (hi - lo);
            fa = tapered_power_at(signals, dt, window, a);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace dmdplace
