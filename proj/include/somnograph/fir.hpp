#pragma once

#include <Eigen/Dense>
#include <optional>

#include "somnograph/error.hpp"
#include "somnograph/spectral.hpp"

namespace somnograph {

// Linear-phase FIR filter: odd tap count, coefficients symmetric about the
// center. Sum of taps is 1 for low-pass designs and 0 for band-pass ones.
struct FirFilter {
  Eigen::VectorXd taps;
  std::optional<double> cutoff_low_hz;  // absent for low-pass
  double cutoff_high_hz = 0.0;
  double design_rate_hz = 0.0;
};

// Hamming-windowed sinc low-pass. Tap count is the smallest odd integer
// >= 3.3 * rate / transition; the response sits at -6 dB at the cutoff.
FirFilter design_lowpass(double cutoff_hz, double transition_hz, double rate_hz);

// Difference of two windowed-sinc low-passes over one of the canonical
// bands. Default transition width 2 Hz keeps the narrow bands selective.
FirFilter design_bandpass(const FrequencyBand& band, double rate_hz,
                          double transition_hz = 2.0);
FirFilter design_bandpass(const std::string& band_name, double rate_hz,
                          double transition_hz = 2.0);

// Magnitude of the tap vector's frequency response at f (DTFT sum).
double fir_magnitude(const Eigen::VectorXd& taps, double freq_hz, double rate_hz);

// Forward-backward application: squared magnitude response, zero net phase.
// The signal is mirror-extended by (taps-1) samples on both ends before
// filtering and trimmed back afterwards.
Eigen::VectorXd filtfilt(const FirFilter& filter, const Eigen::VectorXd& signal);

// Integer-ratio decimation keeping every (from/to)-th sample from index 0.
// The caller is responsible for having low-passed below to_hz/2 first.
Eigen::VectorXd downsample(const Eigen::VectorXd& signal, double from_hz, double to_hz);

}  // namespace somnograph
