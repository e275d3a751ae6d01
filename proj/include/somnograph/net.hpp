#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "somnograph/epoching.hpp"
#include "somnograph/layers.hpp"

namespace somnograph {

struct ModelConfig {
  Eigen::Index n_eeg_eog = 2;          // C
  Eigen::Index n_emg = 0;              // C'
  Eigen::Index samples_per_epoch = 3840;  // T
  Eigen::Index virtual_eeg = 0;        // 0 = same as input channels
  Eigen::Index virtual_emg = 0;
  Eigen::Index context_k = 0;
  double dropout_rate = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  Eigen::Index pooled_time() const { return samples_per_epoch / 256; }
  Eigen::Index eeg_virtual() const { return virtual_eeg > 0 ? virtual_eeg : n_eeg_eog; }
  Eigen::Index emg_virtual() const { return virtual_emg > 0 ? virtual_emg : n_emg; }
  Eigen::Index eeg_feature_dim() const {
    return n_eeg_eog > 0 ? eeg_virtual() * pooled_time() * 8 : 0;
  }
  Eigen::Index emg_feature_dim() const {
    return n_emg > 0 ? emg_virtual() * pooled_time() * 8 : 0;
  }
  Eigen::Index feature_dim() const { return eeg_feature_dim() + emg_feature_dim(); }
};

// One modality pipeline: spatial filter, two conv/relu/maxpool blocks,
// flatten, dropout. Maps (C, T) onto a feature vector of length
// V * (T / 256) * 8.
class FeaturePipeline {
 public:
  FeaturePipeline(Eigen::Index in_channels, Eigen::Index virtual_channels,
                  Eigen::Index samples_per_epoch, double dropout_rate);

  Eigen::Index out_dim() const { return out_dim_; }
  Eigen::Index in_channels() const { return in_channels_; }

  void init_params(Rng& rng);  // every parameter drawn from N(0, 0.1)
  Eigen::VectorXd forward(const nn::MatRM& x, nn::Mode mode, Rng& dropout_rng);
  nn::MatRM backward(const Eigen::VectorXd& d_features);
  void zero_grad();
  void collect_params(const std::string& prefix, std::vector<nn::ParamRef>& out);
  Eigen::Index parameter_count() const;

  nn::SpatialFilter& spatial() { return spatial_; }
  nn::TemporalConv& conv1() { return conv1_; }
  nn::TemporalConv& conv2() { return conv2_; }

 private:
  Eigen::Index in_channels_, virtual_channels_, samples_, out_dim_;
  nn::SpatialFilter spatial_;
  nn::TemporalConv conv1_, conv2_;
  nn::Relu relu1_, relu2_;
  nn::MaxPool pool1_, pool2_;
  nn::Dropout dropout_;
  std::vector<Eigen::Index> flatten_shape_;
};

// Multivariate network (k = 0): separate EEG/EOG and EMG pipelines whose
// dropout outputs are concatenated into a 5-way softmax classifier. When a
// modality has no channels its pipeline is absent entirely.
class MultivariateNet {
 public:
  explicit MultivariateNet(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  void init_params();  // deterministic from config.seed
  bool initialized() const { return initialized_; }
  void mark_initialized() { initialized_ = true; }
  bool trained() const { return trained_; }
  void mark_trained(bool value) { trained_ = value; }

  Eigen::VectorXd forward_logits(const nn::MatRM& eeg, const nn::MatRM& emg,
                                 nn::Mode mode, Rng& dropout_rng);
  Eigen::VectorXd forward_logits(const Epoch& epoch, nn::Mode mode, Rng& dropout_rng);
  // Infer-mode probability vector (sums to 1).
  Eigen::VectorXd predict_proba(const Epoch& epoch);

  // Pre-classifier feature vector without dropout; the frozen
  // time-distributed extractor evaluates exactly this.
  Eigen::VectorXd extract_features(const nn::MatRM& eeg, const nn::MatRM& emg);

  // Returns gradients with respect to both modality inputs.
  std::pair<nn::MatRM, nn::MatRM> backward(const Eigen::VectorXd& d_logits);
  void zero_grad();
  std::vector<nn::ParamRef> collect_params();
  Eigen::Index parameter_count();

  FeaturePipeline* eeg_pipeline() { return eeg_ ? &*eeg_ : nullptr; }
  FeaturePipeline* emg_pipeline() { return emg_ ? &*emg_ : nullptr; }
  const FeaturePipeline* eeg_pipeline() const { return eeg_ ? &*eeg_ : nullptr; }
  const FeaturePipeline* emg_pipeline() const { return emg_ ? &*emg_ : nullptr; }
  nn::Dense& classifier() { return classifier_; }
  const nn::Dense& classifier() const { return classifier_; }

 private:
  ModelConfig config_;
  std::optional<FeaturePipeline> eeg_, emg_;
  nn::Dense classifier_;
  bool initialized_ = false;
  bool trained_ = false;
};

// Time-distributed variant: the trained feature extractor Z is copied from
// a base network and applied with tied weights to each of the 2k+1 window
// slots; a fresh classifier reads the aggregated D(2k+1) vector. Z stays
// frozen: only the classifier parameters are ever exposed to the optimizer.
class TimeDistributedNet {
 public:
  TimeDistributedNet(const MultivariateNet& base, Eigen::Index k);

  const ModelConfig& config() const { return config_; }
  Eigen::Index k() const { return config_.context_k; }
  Eigen::Index classifier_in_dim() const { return classifier_.in_dim(); }
  bool trained() const { return trained_; }
  void mark_trained(bool value) { trained_ = value; }

  // Copies the base classifier; only valid for k = 0 (same input width).
  void adopt_classifier(const MultivariateNet& base);

  Eigen::VectorXd slot_features(const nn::MatRM& eeg, const nn::MatRM& emg);
  Eigen::VectorXd zero_slot_features();

  Eigen::VectorXd logits_from_window_features(const Eigen::VectorXd& aggregated,
                                              nn::Mode mode, Rng& dropout_rng);
  void backward_from_window_features(const Eigen::VectorXd& d_logits);

  Eigen::VectorXd forward_logits(const ContextWindow& window, nn::Mode mode,
                                 Rng& dropout_rng);
  Eigen::VectorXd predict_proba(const ContextWindow& window);

  void zero_grad() { classifier_.zero_grad(); }
  // Classifier only; the frozen extractor is deliberately not included.
  std::vector<nn::ParamRef> trainable_params();
  // Everything, for checkpointing.
  std::vector<nn::ParamRef> collect_params();

  nn::Dense& classifier() { return classifier_; }
  FeaturePipeline* eeg_pipeline() { return eeg_ ? &*eeg_ : nullptr; }
  FeaturePipeline* emg_pipeline() { return emg_ ? &*emg_ : nullptr; }

 private:
  ModelConfig config_;
  std::optional<FeaturePipeline> eeg_, emg_;
  nn::Dropout window_dropout_;
  nn::Dense classifier_;
  bool trained_ = false;
};

// Argmax with ties broken toward the lower stage ordinal.
SleepStage distribution_argmax(const Eigen::VectorXd& probabilities);

struct RecordPrediction {
  Hypnogram stages;
  nn::MatRM probabilities;  // n_epochs x 5
};

RecordPrediction predict_epochs(MultivariateNet& net, const std::vector<Epoch>& epochs);
RecordPrediction predict_epochs(TimeDistributedNet& net, const std::vector<Epoch>& epochs);

}  // namespace somnograph
