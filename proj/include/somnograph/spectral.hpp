#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "somnograph/error.hpp"

namespace somnograph {

struct FrequencyBand {
  std::string name;
  double low_hz = 0.0;
  double high_hz = 0.0;
};

// delta, theta, alpha, sigma, beta: contiguous tiling of 0.5-30 Hz.
const std::array<FrequencyBand, 5>& canonical_bands();
const FrequencyBand& band_by_name(const std::string& name);

struct PowerSpectrum {
  Eigen::VectorXd freqs_hz;
  Eigen::VectorXd power;  // one-sided density, units^2 / Hz
  double resolution_hz = 0.0;
};

// Welch estimate: 2 s Hamming windows, 50% overlap, per-segment mean
// removal, averaged one-sided periodograms. Requires at least one full
// window of signal.
PowerSpectrum welch_psd(const Eigen::VectorXd& signal, double rate_hz);

// Rectangle-rule integral of the density over low <= f < high.
double band_power(const PowerSpectrum& psd, double low_hz, double high_hz);
inline double band_power(const PowerSpectrum& psd, const FrequencyBand& band) {
  return band_power(psd, band.low_hz, band.high_hz);
}

}  // namespace somnograph
