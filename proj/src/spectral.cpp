#include "somnograph/spectral.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <vector>

namespace somnograph {

const std::array<FrequencyBand, 5>& canonical_bands() {
  static const std::array<FrequencyBand, 5> bands = {{{"delta", 0.5, 4.5},
                                                      {"theta", 4.5, 8.5},
                                                      {"alpha", 8.5, 11.5},
                                                      {"sigma", 11.5, 15.5},
                                                      {"beta", 15.5, 30.0}}};
  return bands;
}

const FrequencyBand& band_by_name(const std::string& name) {
  for (const auto& b : canonical_bands())
    if (b.name == name) return b;
  throw ArgumentError("unknown frequency band '" + name + "'");
}

PowerSpectrum welch_psd(const Eigen::VectorXd& signal, double rate_hz) {
  if (!(rate_hz > 0.0)) throw ArgumentError("welch_psd: rate must be positive");
  const Eigen::Index nperseg = static_cast<Eigen::Index>(std::lround(2.0 * rate_hz));
  if (signal.size() < nperseg)
    throw ArgumentError("welch_psd: signal shorter than one 2 s window (" +
                        std::to_string(signal.size()) + " < " + std::to_string(nperseg) +
                        ")");
  const Eigen::Index step = nperseg / 2;  // 50% overlap
  const Eigen::Index n_segments = 1 + (signal.size() - nperseg) / step;
  const Eigen::Index n_bins = nperseg / 2 + 1;

  Eigen::VectorXd window(nperseg);
  for (Eigen::Index i = 0; i < nperseg; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (nperseg - 1));
  const double window_norm = window.squaredNorm();

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq_data;
  std::vector<double> segment(static_cast<std::size_t>(nperseg));

  Eigen::VectorXd accum = Eigen::VectorXd::Zero(n_bins);
  for (Eigen::Index s = 0; s < n_segments; ++s) {
    const Eigen::Index start = s * step;
    const double mean = signal.segment(start, nperseg).mean();
    for (Eigen::Index i = 0; i < nperseg; ++i)
      segment[static_cast<std::size_t>(i)] = (signal[start + i] - mean) * window[i];
    fft.fwd(freq_data, segment);
    for (Eigen::Index k = 0; k < n_bins; ++k)
      accum[k] += std::norm(freq_data[static_cast<std::size_t>(k)]);
  }

  PowerSpectrum out;
  out.resolution_hz = rate_hz / static_cast<double>(nperseg);
  out.freqs_hz.resize(n_bins);
  out.power.resize(n_bins);
  const double scale = 1.0 / (static_cast<double>(n_segments) * rate_hz * window_norm);
  for (Eigen::Index k = 0; k < n_bins; ++k) {
    out.freqs_hz[k] = static_cast<double>(k) * out.resolution_hz;
    double p = accum[k] * scale;
    if (k != 0 && k != nperseg / 2) p *= 2.0;  // fold negative frequencies
    out.power[k] = p;
  }
  return out;
}

double band_power(const PowerSpectrum& psd, double low_hz, double high_hz) {
  if (!(high_hz > low_hz)) throw ArgumentError("band_power: empty band");
  double total = 0.0;
  for (Eigen::Index k = 0; k < psd.freqs_hz.size(); ++k) {
    const double f = psd.freqs_hz[k];
    if (f >= low_hz && f < high_hz) total += psd.power[k] * psd.resolution_hz;
  }
  return total;
}

}  // namespace somnograph
