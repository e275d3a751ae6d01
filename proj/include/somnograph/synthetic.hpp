#pragma once

#include <string>
#include <vector>

#include "somnograph/record.hpp"
#include "somnograph/rng.hpp"
#include "somnograph/spectral.hpp"

namespace somnograph {

// Stage -> dominant band used by the generator: W->alpha, N1->theta,
// N2->sigma, N3->delta, REM->beta.
const FrequencyBand& stage_signature_band(SleepStage s);

enum class HypnogramStructure {
  // n rounds, each a random permutation of the 5 stages: exact class counts.
  Cycle,
  // Sticky first-order chain: stay with stay_prob, otherwise jump uniformly.
  Markov,
};

struct SyntheticSpec {
  Eigen::Index n_epochs_per_class = 1;
  std::vector<std::string> channel_labels = {"EEG Fz", "EEG Cz"};
  double rate_hz = 128.0;
  HypnogramStructure structure = HypnogramStructure::Cycle;
  double markov_stay_prob = 0.65;
  std::string subject_id = "synthetic";
};

// Stage-coded record: every 30 s epoch carries band-limited noise in the
// stage's signature band plus broadband noise at -10 dB relative power.
// EMG-labelled channels are amplitude-modulated per stage (loud in W,
// near-atonic in REM).
Record make_synthetic_record(const SyntheticSpec& spec, Rng& rng);

Record make_synthetic_record(Eigen::Index n_epochs_per_class,
                             const std::vector<std::string>& channel_labels, Rng& rng);

struct RecordSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Disjoint partition by record id; no record appears in more than one set.
RecordSplit split_records(const std::vector<std::string>& record_ids, std::size_t n_train,
                          std::size_t n_val, std::size_t n_test, Rng& rng);

}  // namespace somnograph
