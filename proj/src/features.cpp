#include "somnograph/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "somnograph/sleep_stage.hpp"

namespace somnograph {

namespace {

double quantile75(Eigen::VectorXd values) {
  std::sort(values.data(), values.data() + values.size());
  const double pos = 0.75 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  const auto hi = static_cast<Eigen::Index>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

// Entropy of the PSD restricted to 0.5-30 Hz, normalized by log(#bins).
double spectral_entropy(const PowerSpectrum& psd) {
  double total = 0.0;
  int n_bins = 0;
  for (Eigen::Index k = 0; k < psd.freqs_hz.size(); ++k) {
    if (psd.freqs_hz[k] >= 0.5 && psd.freqs_hz[k] < 30.0) {
      total += psd.power[k];
      ++n_bins;
    }
  }
  if (total <= 0.0 || n_bins < 2) return 0.0;
  double h = 0.0;
  for (Eigen::Index k = 0; k < psd.freqs_hz.size(); ++k) {
    if (psd.freqs_hz[k] >= 0.5 && psd.freqs_hz[k] < 30.0) {
      const double q = psd.power[k] / total;
      if (q > 0.0) h -= q * std::log(q);
    }
  }
  return h / std::log(static_cast<double>(n_bins));
}

}  // namespace

const std::vector<std::string>& feature_names_per_channel() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    const auto& bands = canonical_bands();
    for (const auto& b : bands) n.push_back("power_" + b.name);
    for (const auto& b : bands) n.push_back("relpower_" + b.name);
    for (std::size_t i = 0; i < bands.size(); ++i)
      for (std::size_t j = i + 1; j < bands.size(); ++j)
        n.push_back("ratio_" + bands[i].name + "_" + bands[j].name);
    n.insert(n.end(), {"spectral_entropy", "mean", "variance", "skewness", "kurtosis",
                       "quantile75"});
    return n;
  }();
  return names;
}

std::vector<std::string> feature_names(const std::vector<std::string>& channel_labels) {
  std::vector<std::string> out;
  out.reserve(channel_labels.size() * feature_names_per_channel().size());
  for (const auto& ch : channel_labels)
    for (const auto& f : feature_names_per_channel()) out.push_back(ch + "/" + f);
  return out;
}

FeatureVector extract_epoch_features(const Epoch& epoch,
                                     const std::vector<std::string>& channel_labels,
                                     double rate_hz) {
  const Eigen::Index n_channels = epoch.eeg_eog.rows() + epoch.emg.rows();
  if (static_cast<Eigen::Index>(channel_labels.size()) != n_channels)
    throw ArgumentError("extract_epoch_features: label count != channel count");

  FeatureVector fv;
  fv.values.resize(n_channels * kFeaturesPerChannel);
  fv.names = feature_names(channel_labels);
  fv.degenerate_channels.assign(static_cast<std::size_t>(n_channels), false);

  const auto& bands = canonical_bands();
  for (Eigen::Index c = 0; c < n_channels; ++c) {
    const Eigen::VectorXd signal =
        c < epoch.eeg_eog.rows() ? epoch.eeg_eog.row(c).transpose()
                                 : epoch.emg.row(c - epoch.eeg_eog.rows()).transpose();
    const PowerSpectrum psd = welch_psd(signal, rate_hz);

    Eigen::VectorXd powers(static_cast<Eigen::Index>(bands.size()));
    for (std::size_t b = 0; b < bands.size(); ++b)
      powers[static_cast<Eigen::Index>(b)] = band_power(psd, bands[b]);
    const double total = powers.sum();
    const bool degenerate = !(total > 0.0);
    fv.degenerate_channels[static_cast<std::size_t>(c)] = degenerate;

    Eigen::Index at = c * kFeaturesPerChannel;
    for (Eigen::Index b = 0; b < powers.size(); ++b) fv.values[at++] = powers[b];
    for (Eigen::Index b = 0; b < powers.size(); ++b)
      fv.values[at++] = degenerate ? 0.0 : powers[b] / total;
    for (Eigen::Index i = 0; i < powers.size(); ++i)
      for (Eigen::Index j = i + 1; j < powers.size(); ++j)
        fv.values[at++] =
            (degenerate || powers[j] <= 0.0) ? 0.0 : powers[i] / powers[j];
    fv.values[at++] = degenerate ? 0.0 : spectral_entropy(psd);

    const double mean = signal.mean();
    const Eigen::ArrayXd centered = signal.array() - mean;
    const double m2 = centered.square().mean();
    const double m3 = centered.cube().mean();
    const double m4 = centered.square().square().mean();
    fv.values[at++] = mean;
    fv.values[at++] = m2;
    fv.values[at++] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    fv.values[at++] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    fv.values[at++] = quantile75(signal);
  }

  for (Eigen::Index i = 0; i < fv.values.size(); ++i)
    if (!std::isfinite(fv.values[i]))
      throw NumericError("extract_epoch_features: non-finite feature " + fv.names[i]);
  return fv;
}

void write_features_csv(const std::string& path, const std::vector<FeatureVector>& rows,
                        const std::vector<std::optional<SleepStage>>& labels,
                        const std::vector<std::string>& header_names) {
  if (labels.size() != rows.size())
    throw ArgumentError("write_features_csv: label count != row count");
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write features CSV '" + path + "'");
  out.precision(17);
  for (const auto& name : header_names) out << name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& fv = rows[r];
    for (Eigen::Index i = 0; i < fv.values.size(); ++i) out << fv.values[i] << ',';
    if (labels[r]) out << stage_name(*labels[r]);
    out << '\n';
  }
}

}  // namespace somnograph
