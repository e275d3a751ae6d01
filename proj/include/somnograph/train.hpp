#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "somnograph/adam.hpp"
#include "somnograph/net.hpp"

namespace somnograph {

// Epochs grouped per record; context windows never cross record boundaries.
using Dataset = std::vector<std::vector<Epoch>>;

Eigen::Index dataset_size(const Dataset& data);

struct TrainSpec {
  Eigen::Index batch_size = 128;
  Eigen::Index max_epochs = 100;
  Eigen::Index patience = 5;
  std::uint64_t seed = 0;
  bool balanced_sampling = true;
  // 0 = one pass over the training set: ceil(|train| / batch_size) batches.
  Eigen::Index steps_per_epoch = 0;

  void validate() const;
};

struct SampleIndex {
  std::size_t record = 0;
  std::size_t epoch = 0;
};

// Class-balanced minibatches: per-batch class counts differ by at most one
// (the remainder classes rotate across batches), samples are drawn with
// replacement within a class, and the batch order is shuffled.
class BalancedBatchSampler {
 public:
  BalancedBatchSampler(const Dataset& data, Eigen::Index batch_size);

  std::vector<SampleIndex> next_batch(Rng& rng);
  static std::array<Eigen::Index, kNumStages> batch_class_counts(Eigen::Index batch_size,
                                                                 std::size_t batch_number);

 private:
  std::array<std::vector<SampleIndex>, kNumStages> by_class_;
  Eigen::Index batch_size_;
  std::size_t batch_number_ = 0;
};

// Uniform sampling with replacement over the whole set (balanced off).
class UniformBatchSampler {
 public:
  UniformBatchSampler(const Dataset& data, Eigen::Index batch_size);
  std::vector<SampleIndex> next_batch(Rng& rng);

 private:
  std::vector<SampleIndex> all_;
  Eigen::Index batch_size_;
};

struct HistoryEntry {
  Eigen::Index epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_balanced_accuracy = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  std::vector<HistoryEntry> history;
  Eigen::Index best_epoch = -1;
  double best_val_loss = 0.0;
};

// Stage 1: trains the multivariate network (k = 0) end to end. Minimizes
// mean cross entropy over balanced minibatches with Adam; after each epoch
// the unweighted validation loss gates early stopping (patience epochs
// without strict improvement), and the best-validation weights are
// restored on exit. The net is (re)initialized from its config seed.
TrainResult train_stage1(MultivariateNet& net, const Dataset& train, const Dataset& val,
                         const TrainSpec& spec);

// Stage 2: copies and freezes the trained extractor, distributes it over
// 2k+1 slots and trains only the fresh softmax classifier on aggregated
// features, same optimizer and early-stopping regime.
std::pair<TimeDistributedNet, TrainResult> train_stage2(const MultivariateNet& base,
                                                        Eigen::Index k,
                                                        const Dataset& train,
                                                        const Dataset& val,
                                                        const TrainSpec& spec);

// Mean infer-mode cross entropy over every epoch (natural distribution).
double dataset_loss(MultivariateNet& net, const Dataset& data);
double dataset_loss(TimeDistributedNet& net, const Dataset& data);

double dataset_balanced_accuracy(MultivariateNet& net, const Dataset& data);
double dataset_balanced_accuracy(TimeDistributedNet& net, const Dataset& data);

void write_history_jsonl(const std::vector<HistoryEntry>& history, const std::string& path);

}  // namespace somnograph
