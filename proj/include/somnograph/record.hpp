#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "somnograph/sleep_stage.hpp"

namespace somnograph {

enum class Modality { Eeg, Eog, Emg, Other };

const char* modality_name(Modality m);

// Label prefix rules: a label starting with "EEG", "EOG" or "EMG"
// (case-insensitive, leading spaces ignored) maps to that modality,
// everything else to Other.
Modality modality_from_label(const std::string& label);

struct ChannelInfo {
  std::string label;
  Modality modality = Modality::Other;
  std::string physical_unit = "uV";
  double sampling_rate_hz = 0.0;
};

inline constexpr double kEpochSeconds = 30.0;

// A night of multichannel signal. Channel buffers all span the same
// duration; the hypnogram, when present, has one stage per 30 s epoch.
struct Record {
  std::string subject_id;
  std::vector<ChannelInfo> channels;
  std::vector<Eigen::VectorXd> signals;
  std::optional<Hypnogram> hypnogram;

  double duration_seconds() const;
  Eigen::Index n_epochs() const;

  // Throws ArgumentError when channel durations disagree or the hypnogram
  // length does not match floor(duration / 30 s).
  void validate() const;

  // Keeps only EEG/EOG/EMG channels. Dropped labels are reported back.
  std::vector<std::string> drop_other_channels();
};

}  // namespace somnograph
