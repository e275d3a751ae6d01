#include "somnograph/epoching.hpp"

#include <cmath>

namespace somnograph {

namespace {

constexpr double kDegenerateStd = 1e-12;

std::vector<Epoch> preprocess_impl(const Record& record, const PreprocessOptions& opts,
                                   bool standardize) {
  record.validate();
  if (record.channels.empty()) throw ArgumentError("preprocess: record has no channels");
  for (const auto& ch : record.channels)
    if (ch.modality == Modality::Other)
      throw ArgumentError("preprocess: OTHER-modality channel '" + ch.label +
                          "' must be dropped first");

  // filter -> downsample, per channel, grouped EEG/EOG before EMG
  std::vector<Eigen::VectorXd> eeg_signals, emg_signals;
  for (std::size_t i = 0; i < record.channels.size(); ++i) {
    const auto& ch = record.channels[i];
    const FirFilter lowpass =
        design_lowpass(opts.lowpass_cutoff_hz, opts.lowpass_transition_hz,
                       ch.sampling_rate_hz);
    Eigen::VectorXd filtered = filtfilt(lowpass, record.signals[i]);
    Eigen::VectorXd resampled = downsample(filtered, ch.sampling_rate_hz,
                                           opts.target_rate_hz);
    if (opts.keep_band) {
      const FirFilter bandpass = design_bandpass(*opts.keep_band, opts.target_rate_hz);
      resampled = filtfilt(bandpass, resampled);
    }
    (ch.modality == Modality::Emg ? emg_signals : eeg_signals)
        .push_back(std::move(resampled));
  }

  const auto samples_per_epoch =
      static_cast<Eigen::Index>(std::lround(opts.target_rate_hz * kEpochSeconds));
  const Eigen::Index n_epochs = record.n_epochs();

  std::vector<Epoch> epochs;
  epochs.reserve(static_cast<std::size_t>(n_epochs));
  for (Eigen::Index t = 0; t < n_epochs; ++t) {
    Epoch e;
    e.subject_id = record.subject_id;
    e.index = t;
    if (record.hypnogram) e.label = (*record.hypnogram)[static_cast<std::size_t>(t)];
    e.eeg_eog.resize(static_cast<Eigen::Index>(eeg_signals.size()), samples_per_epoch);
    for (std::size_t c = 0; c < eeg_signals.size(); ++c)
      e.eeg_eog.row(static_cast<Eigen::Index>(c)) =
          eeg_signals[c].segment(t * samples_per_epoch, samples_per_epoch).transpose();
    e.emg.resize(static_cast<Eigen::Index>(emg_signals.size()), samples_per_epoch);
    for (std::size_t c = 0; c < emg_signals.size(); ++c)
      e.emg.row(static_cast<Eigen::Index>(c)) =
          emg_signals[c].segment(t * samples_per_epoch, samples_per_epoch).transpose();
    if (standardize) {
      standardize_rows(e.eeg_eog);
      standardize_rows(e.emg);
    }
    epochs.push_back(std::move(e));
  }
  return epochs;
}

}  // namespace

void standardize_rows(EpochMatrix& data) {
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    auto row = data.row(r);
    const double mean = row.mean();
    const double var = (row.array() - mean).square().sum() / row.size();
    const double sd = std::sqrt(var);
    if (sd < kDegenerateStd) {
      row.setZero();
    } else {
      row = (row.array() - mean) / sd;
    }
  }
}

Epoch standardize_epoch(Epoch epoch) {
  standardize_rows(epoch.eeg_eog);
  standardize_rows(epoch.emg);
  return epoch;
}

EpochMatrix ContextWindow::eeg_eog(Eigen::Index slot) const {
  const Epoch* e = slots.at(static_cast<std::size_t>(slot));
  if (e == nullptr) return EpochMatrix::Zero(eeg_rows, cols);
  return e->eeg_eog;
}

EpochMatrix ContextWindow::emg(Eigen::Index slot) const {
  const Epoch* e = slots.at(static_cast<std::size_t>(slot));
  if (e == nullptr) return EpochMatrix::Zero(emg_rows, cols);
  return e->emg;
}

ContextWindow build_context(const std::vector<Epoch>& epochs_of_record, Eigen::Index t,
                            Eigen::Index k) {
  const auto n = static_cast<Eigen::Index>(epochs_of_record.size());
  if (t < 0 || t >= n) throw ArgumentError("build_context: center index out of range");
  if (k < 0) throw ArgumentError("build_context: k must be non-negative");
  ContextWindow window;
  window.half_width = k;
  const Epoch& center = epochs_of_record[static_cast<std::size_t>(t)];
  window.eeg_rows = center.eeg_eog.rows();
  window.emg_rows = center.emg.rows();
  window.cols = center.eeg_eog.cols() > 0 ? center.eeg_eog.cols() : center.emg.cols();
  window.center_label = center.label;
  window.slots.reserve(static_cast<std::size_t>(2 * k + 1));
  for (Eigen::Index j = t - k; j <= t + k; ++j)
    window.slots.push_back(j >= 0 && j < n ? &epochs_of_record[static_cast<std::size_t>(j)]
                                           : nullptr);
  return window;
}

std::vector<Epoch> preprocess_record(const Record& record, const PreprocessOptions& opts) {
  return preprocess_impl(record, opts, true);
}

std::vector<Epoch> preprocess_record_raw(const Record& record,
                                         const PreprocessOptions& opts) {
  return preprocess_impl(record, opts, false);
}

std::vector<std::string> grouped_channel_labels(const Record& record) {
  std::vector<std::string> labels;
  for (const auto& ch : record.channels)
    if (ch.modality != Modality::Emg) labels.push_back(ch.label);
  for (const auto& ch : record.channels)
    if (ch.modality == Modality::Emg) labels.push_back(ch.label);
  return labels;
}

}  // namespace somnograph
