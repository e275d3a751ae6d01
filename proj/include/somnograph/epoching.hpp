#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "somnograph/fir.hpp"
#include "somnograph/record.hpp"

namespace somnograph {

using EpochMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One standardized 30 s segment, split by modality group: EEG and EOG
// channels share a pipeline, EMG channels get their own.
struct Epoch {
  EpochMatrix eeg_eog;  // C x T
  EpochMatrix emg;      // C' x T (zero rows when absent)
  std::optional<SleepStage> label;
  std::string subject_id;
  Eigen::Index index = 0;
};

// Per channel: subtract the mean, divide by the population std. Channels
// with std below 1e-12 are zeroed instead of raising (electrode loss must
// not abort a night).
void standardize_rows(EpochMatrix& data);
Epoch standardize_epoch(Epoch epoch);

// Ordered window S_t^k of 2k+1 epoch tensors centered on the epoch being
// classified. Out-of-range slots are all-zero tensors of the same shape.
struct ContextWindow {
  std::vector<const Epoch*> slots;  // nullptr = zero padding
  Eigen::Index eeg_rows = 0, emg_rows = 0, cols = 0;
  std::optional<SleepStage> center_label;
  Eigen::Index half_width = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(slots.size()); }
  bool is_padding(Eigen::Index slot) const { return slots[slot] == nullptr; }
  // Materialized slot contents (zeros where padded).
  EpochMatrix eeg_eog(Eigen::Index slot) const;
  EpochMatrix emg(Eigen::Index slot) const;
};

ContextWindow build_context(const std::vector<Epoch>& epochs_of_record, Eigen::Index t,
                            Eigen::Index k);

struct PreprocessOptions {
  double lowpass_cutoff_hz = 30.0;
  double lowpass_transition_hz = 7.0;
  double target_rate_hz = 128.0;
  // Applied after the low-pass/downsample stage, before epoching; used by
  // the occlusion probe.
  std::optional<FrequencyBand> keep_band;
};

// Order is fixed: filter -> downsample -> epoch -> standardize.
// OTHER-modality channels must have been dropped beforehand.
std::vector<Epoch> preprocess_record(const Record& record, const PreprocessOptions& opts);

// Same stages without the final standardization; feature extraction runs on
// these raw filtered epochs.
std::vector<Epoch> preprocess_record_raw(const Record& record,
                                         const PreprocessOptions& opts);

// EEG/EOG labels first, then EMG labels, matching the Epoch row layout.
std::vector<std::string> grouped_channel_labels(const Record& record);

}  // namespace somnograph
