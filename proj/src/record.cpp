#include "somnograph/record.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace somnograph {

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::Eeg: return "EEG";
    case Modality::Eog: return "EOG";
    case Modality::Emg: return "EMG";
    case Modality::Other: return "OTHER";
  }
  return "OTHER";
}

Modality modality_from_label(const std::string& label) {
  std::size_t start = label.find_first_not_of(' ');
  if (start == std::string::npos) return Modality::Other;
  std::string head = label.substr(start, 3);
  std::transform(head.begin(), head.end(), head.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (head == "EEG") return Modality::Eeg;
  if (head == "EOG") return Modality::Eog;
  if (head == "EMG") return Modality::Emg;
  return Modality::Other;
}

double Record::duration_seconds() const {
  if (channels.empty()) return 0.0;
  return static_cast<double>(signals[0].size()) / channels[0].sampling_rate_hz;
}

Eigen::Index Record::n_epochs() const {
  return static_cast<Eigen::Index>(std::floor(duration_seconds() / kEpochSeconds));
}

void Record::validate() const {
  if (channels.size() != signals.size())
    throw ArgumentError("record: channel/signal count mismatch");
  for (const auto& ch : channels)
    if (!(ch.sampling_rate_hz > 0.0))
      throw ArgumentError("record: channel '" + ch.label + "' has non-positive rate");
  const double duration = duration_seconds();
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double d = static_cast<double>(signals[i].size()) / channels[i].sampling_rate_hz;
    if (std::abs(d - duration) > 1e-9)
      throw ArgumentError("record: channel '" + channels[i].label +
                          "' spans a different duration");
  }
  if (hypnogram) {
    if (static_cast<Eigen::Index>(hypnogram->size()) != n_epochs())
      throw ArgumentError("record: hypnogram length " + std::to_string(hypnogram->size()) +
                          " != epoch count " + std::to_string(n_epochs()));
  }
}

std::vector<std::string> Record::drop_other_channels() {
  std::vector<std::string> dropped;
  std::vector<ChannelInfo> kept_channels;
  std::vector<Eigen::VectorXd> kept_signals;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].modality == Modality::Other) {
      dropped.push_back(channels[i].label);
    } else {
      kept_channels.push_back(channels[i]);
      kept_signals.push_back(std::move(signals[i]));
    }
  }
  channels = std::move(kept_channels);
  signals = std::move(kept_signals);
  return dropped;
}

Hypnogram read_hypnogram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open hypnogram file '" + path + "'");
  Hypnogram stages;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    stages.push_back(parse_stage(line));
  }
  return stages;
}

void write_hypnogram(const Hypnogram& stages, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write hypnogram file '" + path + "'");
  for (SleepStage s : stages) out << stage_name(s) << '\n';
}

}  // namespace somnograph
