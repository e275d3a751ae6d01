#include "somnograph/synthetic.hpp"

#include <array>
#include <cmath>

namespace somnograph {

namespace {

constexpr int kSinusoidsPerEpoch = 32;
constexpr double kBroadbandPower = 0.1;  // -10 dB relative to the band component

// EMG tone per stage: loud in wake, near-atonic in REM.
constexpr std::array<double, kNumStages> kEmgGain = {2.0, 0.9, 0.7, 0.5, 0.25};

Hypnogram cycle_hypnogram(Eigen::Index n_per_class, Rng& rng) {
  Hypnogram stages;
  stages.reserve(static_cast<std::size_t>(n_per_class) * kNumStages);
  std::vector<SleepStage> round(kNumStages);
  for (int i = 0; i < kNumStages; ++i) round[i] = stage_from_index(i);
  for (Eigen::Index r = 0; r < n_per_class; ++r) {
    rng.shuffle(round);
    stages.insert(stages.end(), round.begin(), round.end());
  }
  return stages;
}

Hypnogram markov_hypnogram(Eigen::Index length, double stay_prob, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Hypnogram stages;
    stages.reserve(static_cast<std::size_t>(length));
    int current = static_cast<int>(rng.uniform_index(kNumStages));
    std::array<bool, kNumStages> seen{};
    for (Eigen::Index t = 0; t < length; ++t) {
      stages.push_back(stage_from_index(current));
      seen[static_cast<std::size_t>(current)] = true;
      if (rng.uniform() >= stay_prob) {
        const int jump = static_cast<int>(rng.uniform_index(kNumStages - 1));
        current = jump < current ? jump : jump + 1;
      }
    }
    bool all_seen = true;
    for (bool s : seen) all_seen = all_seen && s;
    if (all_seen) return stages;
  }
  throw NumericError("markov_hypnogram: chain failed to visit every stage");
}

// Unit-power mixture of random-frequency, random-phase sinusoids inside the
// band, written additively into the epoch slice.
void add_band_noise(Eigen::Ref<Eigen::VectorXd> out, const FrequencyBand& band,
                    double rate_hz, Rng& rng) {
  const double amp = std::sqrt(2.0 / kSinusoidsPerEpoch);
  for (int s = 0; s < kSinusoidsPerEpoch; ++s) {
    const double f = rng.uniform(band.low_hz, band.high_hz);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double w = 2.0 * M_PI * f / rate_hz;
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out[i] += amp * std::sin(w * static_cast<double>(i) + phase);
  }
}

}  // namespace

const FrequencyBand& stage_signature_band(SleepStage s) {
  switch (s) {
    case SleepStage::Wake: return band_by_name("alpha");
    case SleepStage::N1: return band_by_name("theta");
    case SleepStage::N2: return band_by_name("sigma");
    case SleepStage::N3: return band_by_name("delta");
    case SleepStage::Rem: return band_by_name("beta");
  }
  throw ArgumentError("invalid stage");
}

Record make_synthetic_record(const SyntheticSpec& spec, Rng& rng) {
  if (spec.n_epochs_per_class < 1)
    throw ArgumentError("make_synthetic_record: n_epochs_per_class must be >= 1");
  if (spec.channel_labels.empty())
    throw ArgumentError("make_synthetic_record: need at least one channel");
  if (!(spec.rate_hz > 0.0) ||
      std::abs(spec.rate_hz * kEpochSeconds -
               std::round(spec.rate_hz * kEpochSeconds)) > 1e-9)
    throw ArgumentError("make_synthetic_record: rate must give whole samples per epoch");

  Record record;
  record.subject_id = spec.subject_id;

  Hypnogram stages;
  switch (spec.structure) {
    case HypnogramStructure::Cycle:
      stages = cycle_hypnogram(spec.n_epochs_per_class, rng);
      break;
    case HypnogramStructure::Markov:
      stages = markov_hypnogram(spec.n_epochs_per_class * kNumStages,
                                spec.markov_stay_prob, rng);
      break;
  }

  const Eigen::Index samples_per_epoch =
      static_cast<Eigen::Index>(std::lround(spec.rate_hz * kEpochSeconds));
  const Eigen::Index n_epochs = static_cast<Eigen::Index>(stages.size());
  const Eigen::Index n_samples = n_epochs * samples_per_epoch;

  for (const auto& label : spec.channel_labels) {
    ChannelInfo ch;
    ch.label = label;
    ch.modality = modality_from_label(label);
    ch.sampling_rate_hz = spec.rate_hz;
    record.channels.push_back(ch);

    Eigen::VectorXd signal = Eigen::VectorXd::Zero(n_samples);
    for (Eigen::Index t = 0; t < n_epochs; ++t) {
      auto epoch = signal.segment(t * samples_per_epoch, samples_per_epoch);
      const SleepStage stage = stages[static_cast<std::size_t>(t)];
      add_band_noise(epoch, stage_signature_band(stage), spec.rate_hz, rng);
      const double noise_std = std::sqrt(kBroadbandPower);
      for (Eigen::Index i = 0; i < epoch.size(); ++i)
        epoch[i] += rng.normal(0.0, noise_std);
      if (ch.modality == Modality::Emg)
        epoch *= kEmgGain[static_cast<std::size_t>(stage_index(stage))];
    }
    record.signals.push_back(std::move(signal));
  }

  record.hypnogram = std::move(stages);
  record.validate();
  return record;
}

Record make_synthetic_record(Eigen::Index n_epochs_per_class,
                             const std::vector<std::string>& channel_labels, Rng& rng) {
  SyntheticSpec spec;
  spec.n_epochs_per_class = n_epochs_per_class;
  spec.channel_labels = channel_labels;
  return make_synthetic_record(spec, rng);
}

RecordSplit split_records(const std::vector<std::string>& record_ids, std::size_t n_train,
                          std::size_t n_val, std::size_t n_test, Rng& rng) {
  if (n_train + n_val + n_test > record_ids.size())
    throw ArgumentError("split_records: requested " +
                        std::to_string(n_train + n_val + n_test) + " records, have " +
                        std::to_string(record_ids.size()));
  std::vector<std::string> shuffled = record_ids;
  rng.shuffle(shuffled);
  RecordSplit split;
  auto it = shuffled.begin();
  split.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  it += static_cast<std::ptrdiff_t>(n_train);
  split.val.assign(it, it + static_cast<std::ptrdiff_t>(n_val));
  it += static_cast<std::ptrdiff_t>(n_val);
  split.test.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
  return split;
}

}  // namespace somnograph
