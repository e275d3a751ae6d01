#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "somnograph/epoching.hpp"
#include "somnograph/spectral.hpp"

namespace somnograph {

inline constexpr int kFeaturesPerChannel = 26;

// 26 features per channel in frozen order: 5 absolute band powers, 5
// relative powers, 10 pairwise power ratios (delta/theta, delta/alpha,
// delta/sigma, delta/beta, theta/alpha, theta/sigma, theta/beta,
// alpha/sigma, alpha/beta, sigma/beta), spectral entropy, mean, variance,
// skewness, excess kurtosis, 75% quantile.
struct FeatureVector {
  Eigen::VectorXd values;          // length 26 * C
  std::vector<std::string> names;  // "channel/feature"
  // Channels whose total band power vanished; their ratios and entropy are
  // reported as 0.
  std::vector<bool> degenerate_channels;
};

// Feature half of a name, in order; names are "<channel>/<feature>".
const std::vector<std::string>& feature_names_per_channel();

std::vector<std::string> feature_names(const std::vector<std::string>& channel_labels);

// Computed on raw filtered epochs (before per-epoch standardization) at the
// given rate. Channel order is the epoch row order: EEG/EOG rows then EMG.
FeatureVector extract_epoch_features(const Epoch& epoch,
                                     const std::vector<std::string>& channel_labels,
                                     double rate_hz);

// One row per epoch, header of feature names plus a trailing label column
// (empty when the epoch is unlabeled).
void write_features_csv(const std::string& path, const std::vector<FeatureVector>& rows,
                        const std::vector<std::optional<SleepStage>>& labels,
                        const std::vector<std::string>& header_names);

}  // namespace somnograph
