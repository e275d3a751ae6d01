#include "somnograph/fir.hpp"

#include <cmath>

namespace somnograph {

namespace {

Eigen::Index odd_tap_count(double rate_hz, double transition_hz) {
  const double raw = 3.3 * rate_hz / transition_hz;
  auto n = static_cast<Eigen::Index>(std::ceil(raw));
  if (n % 2 == 0) ++n;
  return n;
}

// Hamming-windowed sinc, normalized to unit DC gain.
Eigen::VectorXd windowed_sinc(double cutoff_hz, double rate_hz, Eigen::Index n_taps) {
  const Eigen::Index mid = (n_taps - 1) / 2;
  const double fc = cutoff_hz / rate_hz;  // normalized cutoff in cycles/sample
  Eigen::VectorXd taps(n_taps);
  for (Eigen::Index i = 0; i < n_taps; ++i) {
    const double m = static_cast<double>(i - mid);
    const double sinc = (i == mid) ? 2.0 * fc : std::sin(2.0 * M_PI * fc * m) / (M_PI * m);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) / (n_taps - 1));
    taps[i] = sinc * window;
  }
  taps /= taps.sum();
  return taps;
}

// Causal FIR pass: y[i] = sum_u h[u] x[i-u], zero initial state.
Eigen::VectorXd causal_filter(const Eigen::VectorXd& taps, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  const Eigen::Index k = taps.size();
  const Eigen::VectorXd rev = taps.reverse();
  Eigen::VectorXd y(n);
  const Eigen::Index head = std::min(k - 1, n);
  for (Eigen::Index i = 0; i < head; ++i) {
    double acc = 0.0;
    for (Eigen::Index u = 0; u <= i; ++u) acc += taps[u] * x[i - u];
    y[i] = acc;
  }
  for (Eigen::Index i = k - 1; i < n; ++i) y[i] = rev.dot(x.segment(i - k + 1, k));
  return y;
}

}  // namespace

FirFilter design_lowpass(double cutoff_hz, double transition_hz, double rate_hz) {
  if (!(rate_hz > 0.0)) throw ArgumentError("design_lowpass: rate must be positive");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= rate_hz / 2.0)
    throw ArgumentError("design_lowpass: cutoff must lie in (0, Nyquist)");
  if (!(transition_hz > 0.0))
    throw ArgumentError("design_lowpass: transition width must be positive");
  FirFilter f;
  f.taps = windowed_sinc(cutoff_hz, rate_hz, odd_tap_count(rate_hz, transition_hz));
  f.cutoff_high_hz = cutoff_hz;
  f.design_rate_hz = rate_hz;
  return f;
}

FirFilter design_bandpass(const FrequencyBand& band, double rate_hz, double transition_hz) {
  if (!(rate_hz > 0.0)) throw ArgumentError("design_bandpass: rate must be positive");
  if (band.high_hz >= rate_hz / 2.0)
    throw ArgumentError("design_bandpass: band edge at or above Nyquist");
  const Eigen::Index n_taps = odd_tap_count(rate_hz, transition_hz);
  FirFilter f;
  f.taps = windowed_sinc(band.high_hz, rate_hz, n_taps) -
           windowed_sinc(band.low_hz, rate_hz, n_taps);
  f.cutoff_low_hz = band.low_hz;
  f.cutoff_high_hz = band.high_hz;
  f.design_rate_hz = rate_hz;
  return f;
}

FirFilter design_bandpass(const std::string& band_name, double rate_hz,
                          double transition_hz) {
  return design_bandpass(band_by_name(band_name), rate_hz, transition_hz);
}

double fir_magnitude(const Eigen::VectorXd& taps, double freq_hz, double rate_hz) {
  const double w = 2.0 * M_PI * freq_hz / rate_hz;
  double re = 0.0, im = 0.0;
  for (Eigen::Index i = 0; i < taps.size(); ++i) {
    re += taps[i] * std::cos(w * static_cast<double>(i));
    im -= taps[i] * std::sin(w * static_cast<double>(i));
  }
  return std::hypot(re, im);
}

Eigen::VectorXd filtfilt(const FirFilter& filter, const Eigen::VectorXd& signal) {
  const Eigen::Index n = signal.size();
  const Eigen::Index k = filter.taps.size();
  if (n <= k)
    throw ArgumentError("filtfilt: signal length " + std::to_string(n) +
                        " must exceed tap count " + std::to_string(k));
  const Eigen::Index pad = k - 1;

  // Mirror extension about the first/last samples (edge sample not repeated).
  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) ext[i] = signal[pad - i];
  ext.segment(pad, n) = signal;
  for (Eigen::Index i = 0; i < pad; ++i) ext[pad + n + i] = signal[n - 2 - i];

  Eigen::VectorXd forward = causal_filter(filter.taps, ext);
  Eigen::VectorXd backward = causal_filter(filter.taps, forward.reverse());
  return backward.reverse().segment(pad, n);
}

Eigen::VectorXd downsample(const Eigen::VectorXd& signal, double from_hz, double to_hz) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0))
    throw ArgumentError("downsample: rates must be positive");
  const double ratio = from_hz / to_hz;
  const auto int_ratio = static_cast<Eigen::Index>(std::lround(ratio));
  if (std::abs(ratio - static_cast<double>(int_ratio)) > 1e-9 || int_ratio < 1)
    throw ArgumentError("downsample: non-integer ratio " + std::to_string(from_hz) + "/" +
                        std::to_string(to_hz));
  if (int_ratio == 1) return signal;
  const Eigen::Index out_n = (signal.size() + int_ratio - 1) / int_ratio;
  Eigen::VectorXd out(out_n);
  for (Eigen::Index i = 0; i < out_n; ++i) out[i] = signal[i * int_ratio];
  return out;
}

}  // namespace somnograph
