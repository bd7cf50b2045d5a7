#pragma once

#include "dmdplace/types.hpp"

namespace dmdplace {

Vector hann_window(Index n);

/// One-sided power spectral density estimate.
struct PsdEstimate {
    Vector freq_hz;
    Vector psd;                  // power per Hz
    double df                  = 0.0;
    double integrated_variance = 0.0;  // sum(psd) * df
};

/// Averaged periodogram with Hann taper over `segments` half-overlapping
/// segments (fewer when the record is short). Normalized so the integrated
/// PSD matches the mean-square signal power.
PsdEstimate welch_psd(const Eigen::Ref<const Vector>& x, double dt,
                      int segments = 8);

/// One-sided magnitude spectrum |X(f)| of the full record, for plotting.
struct MagnitudeSpectrum {
    Vector freq_hz;
    Vector magnitude;
};
MagnitudeSpectrum magnitude_spectrum(const Eigen::Ref<const Vector>& x,
                                     double dt);

/// Frequency (Hz) of the dominant oscillatory peak shared by the rows of
/// `signals`. Locates the peak bin of the averaged zero-padded periodogram,
/// then refines it on the continuous-frequency Hann-tapered spectrum.
/// Throws std::invalid_argument when the data is identically zero or has no
/// positive-frequency content (constant signal).
double dominant_frequency(const Eigen::Ref<const Matrix>& signals, double dt);

}  // namespace dmdplace
