#include "somnograph/net.hpp"

#include <cmath>

namespace somnograph {

using nn::MatRM;
using nn::Mode;

void ModelConfig::validate() const {
  if (n_eeg_eog < 0 || n_emg < 0) throw ArgumentError("config: negative channel count");
  if (n_eeg_eog < 1 && n_emg < 1)
    throw ArgumentError("config: need at least one EEG/EOG or EMG channel");
  if (samples_per_epoch <= 256) throw ArgumentError("config: T must exceed 256");
  if (context_k < 0) throw ArgumentError("config: k must be non-negative");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
    throw ArgumentError("config: dropout rate must be in [0, 1)");
  if (virtual_eeg < 0 || virtual_emg < 0)
    throw ArgumentError("config: negative virtual channel count");
}

FeaturePipeline::FeaturePipeline(Eigen::Index in_channels, Eigen::Index virtual_channels,
                                 Eigen::Index samples_per_epoch, double dropout_rate)
    : in_channels_(in_channels),
      virtual_channels_(virtual_channels),
      samples_(samples_per_epoch),
      out_dim_(virtual_channels * (samples_per_epoch / 256) * 8),
      spatial_(virtual_channels, in_channels),
      conv1_(8, 1, 64),
      conv2_(8, 8, 64),
      pool1_(16),
      pool2_(16),
      dropout_(dropout_rate) {
  if (samples_per_epoch <= 256)
    throw ArgumentError("FeaturePipeline: need more than 256 samples per epoch");
}

void FeaturePipeline::init_params(Rng& rng) {
  std::vector<nn::ParamRef> params;
  collect_params("init", params);
  for (auto& p : params)
    for (Eigen::Index i = 0; i < p.size; ++i) p.values[i] = rng.normal(0.0, 0.1);
}

Eigen::VectorXd FeaturePipeline::forward(const MatRM& x, Mode mode, Rng& dropout_rng) {
  if (x.rows() != in_channels_ || x.cols() != samples_)
    throw ArgumentError("FeaturePipeline: input shape (" + std::to_string(x.rows()) + ", " +
                        std::to_string(x.cols()) + ") does not match config");
  const MatRM virtual_channels = spatial_.forward(x);

  // (V, T) row-major shares the buffer layout of the (V, T, 1) tensor.
  Tensor t({virtual_channels_, samples_, 1});
  t.as_vector() = Eigen::Map<const Eigen::VectorXd>(virtual_channels.data(),
                                                    virtual_channels.size());
  Tensor a = pool1_.forward(relu1_.forward(conv1_.forward(t)));
  a = pool2_.forward(relu2_.forward(conv2_.forward(a)));
  flatten_shape_ = a.shape();
  Eigen::VectorXd flat = a.as_vector();
  return dropout_.forward(flat, mode, dropout_rng);
}

MatRM FeaturePipeline::backward(const Eigen::VectorXd& d_features) {
  const Eigen::VectorXd d_flat = dropout_.backward(d_features);
  Tensor d(flatten_shape_);
  d.as_vector() = d_flat;
  d = conv2_.backward(relu2_.backward(pool2_.backward(d)));
  d = conv1_.backward(relu1_.backward(pool1_.backward(d)));
  MatRM d_virtual(virtual_channels_, samples_);
  Eigen::Map<Eigen::VectorXd>(d_virtual.data(), d_virtual.size()) = d.as_vector();
  return spatial_.backward(d_virtual);
}

void FeaturePipeline::zero_grad() {
  spatial_.zero_grad();
  conv1_.zero_grad();
  conv2_.zero_grad();
}

void FeaturePipeline::collect_params(const std::string& prefix,
                                     std::vector<nn::ParamRef>& out) {
  spatial_.collect_params(prefix + ".spatial", out);
  conv1_.collect_params(prefix + ".conv1", out);
  conv2_.collect_params(prefix + ".conv2", out);
}

Eigen::Index FeaturePipeline::parameter_count() const {
  return spatial_.parameter_count() + conv1_.parameter_count() + conv2_.parameter_count();
}

MultivariateNet::MultivariateNet(const ModelConfig& config)
    : config_(config),
      classifier_(kNumStages, [&] {
        config.validate();
        return config.feature_dim();
      }()) {
  if (config_.n_eeg_eog > 0)
    eeg_.emplace(config_.n_eeg_eog, config_.eeg_virtual(), config_.samples_per_epoch,
                 config_.dropout_rate);
  if (config_.n_emg > 0)
    emg_.emplace(config_.n_emg, config_.emg_virtual(), config_.samples_per_epoch,
                 config_.dropout_rate);
}

void MultivariateNet::init_params() {
  Rng rng(config_.seed);
  if (eeg_) eeg_->init_params(rng);
  if (emg_) emg_->init_params(rng);
  std::vector<nn::ParamRef> params;
  classifier_.collect_params("classifier", params);
  for (auto& p : params)
    for (Eigen::Index i = 0; i < p.size; ++i) p.values[i] = rng.normal(0.0, 0.1);
  initialized_ = true;
}

Eigen::VectorXd MultivariateNet::forward_logits(const MatRM& eeg, const MatRM& emg,
                                                Mode mode, Rng& dropout_rng) {
  Eigen::VectorXd features(config_.feature_dim());
  Eigen::Index at = 0;
  if (eeg_) {
    features.segment(at, eeg_->out_dim()) = eeg_->forward(eeg, mode, dropout_rng);
    at += eeg_->out_dim();
  }
  if (emg_) features.segment(at, emg_->out_dim()) = emg_->forward(emg, mode, dropout_rng);
  return classifier_.forward(features);
}

Eigen::VectorXd MultivariateNet::forward_logits(const Epoch& epoch, Mode mode,
                                                Rng& dropout_rng) {
  return forward_logits(epoch.eeg_eog, epoch.emg, mode, dropout_rng);
}

Eigen::VectorXd MultivariateNet::predict_proba(const Epoch& epoch) {
  Rng unused(0);
  return nn::softmax(forward_logits(epoch, Mode::Infer, unused));
}

Eigen::VectorXd MultivariateNet::extract_features(const MatRM& eeg, const MatRM& emg) {
  Rng unused(0);
  Eigen::VectorXd features(config_.feature_dim());
  Eigen::Index at = 0;
  if (eeg_) {
    features.segment(at, eeg_->out_dim()) = eeg_->forward(eeg, Mode::Infer, unused);
    at += eeg_->out_dim();
  }
  if (emg_) features.segment(at, emg_->out_dim()) = emg_->forward(emg, Mode::Infer, unused);
  return features;
}

std::pair<MatRM, MatRM> MultivariateNet::backward(const Eigen::VectorXd& d_logits) {
  const Eigen::VectorXd d_features = classifier_.backward(d_logits);
  MatRM d_eeg, d_emg;
  Eigen::Index at = 0;
  if (eeg_) {
    d_eeg = eeg_->backward(d_features.segment(at, eeg_->out_dim()));
    at += eeg_->out_dim();
  }
  if (emg_) d_emg = emg_->backward(d_features.segment(at, emg_->out_dim()));
  return {std::move(d_eeg), std::move(d_emg)};
}

void MultivariateNet::zero_grad() {
  if (eeg_) eeg_->zero_grad();
  if (emg_) emg_->zero_grad();
  classifier_.zero_grad();
}

std::vector<nn::ParamRef> MultivariateNet::collect_params() {
  std::vector<nn::ParamRef> out;
  if (eeg_) eeg_->collect_params("eeg", out);
  if (emg_) emg_->collect_params("emg", out);
  classifier_.collect_params("classifier", out);
  return out;
}

Eigen::Index MultivariateNet::parameter_count() {
  Eigen::Index n = classifier_.parameter_count();
  if (eeg_) n += eeg_->parameter_count();
  if (emg_) n += emg_->parameter_count();
  return n;
}

TimeDistributedNet::TimeDistributedNet(const MultivariateNet& base, Eigen::Index k)
    : config_([&] {
        ModelConfig c = base.config();
        if (k < 0) throw ArgumentError("TimeDistributedNet: k must be non-negative");
        c.context_k = k;
        return c;
      }()),
      window_dropout_(config_.dropout_rate),
      classifier_(kNumStages, config_.feature_dim() * (2 * config_.context_k + 1)) {
  // Copy of the (already trained) base extractor; it stays frozen here.
  if (base.eeg_pipeline()) eeg_.emplace(*base.eeg_pipeline());
  if (base.emg_pipeline()) emg_.emplace(*base.emg_pipeline());
}

void TimeDistributedNet::adopt_classifier(const MultivariateNet& base) {
  if (classifier_.in_dim() != base.classifier().in_dim())
    throw ArgumentError("adopt_classifier: width mismatch (requires k = 0)");
  classifier_ = base.classifier();
}

Eigen::VectorXd TimeDistributedNet::slot_features(const MatRM& eeg, const MatRM& emg) {
  Rng unused(0);
  Eigen::VectorXd features(config_.feature_dim());
  Eigen::Index at = 0;
  if (eeg_) {
    features.segment(at, eeg_->out_dim()) = eeg_->forward(eeg, Mode::Infer, unused);
    at += eeg_->out_dim();
  }
  if (emg_) features.segment(at, emg_->out_dim()) = emg_->forward(emg, Mode::Infer, unused);
  return features;
}

Eigen::VectorXd TimeDistributedNet::zero_slot_features() {
  const MatRM zero_eeg = MatRM::Zero(config_.n_eeg_eog, config_.samples_per_epoch);
  const MatRM zero_emg = MatRM::Zero(config_.n_emg, config_.samples_per_epoch);
  return slot_features(zero_eeg, zero_emg);
}

Eigen::VectorXd TimeDistributedNet::logits_from_window_features(
    const Eigen::VectorXd& aggregated, Mode mode, Rng& dropout_rng) {
  return classifier_.forward(window_dropout_.forward(aggregated, mode, dropout_rng));
}

void TimeDistributedNet::backward_from_window_features(const Eigen::VectorXd& d_logits) {
  window_dropout_.backward(classifier_.backward(d_logits));
}

Eigen::VectorXd TimeDistributedNet::forward_logits(const ContextWindow& window, Mode mode,
                                                   Rng& dropout_rng) {
  const Eigen::Index n_slots = 2 * config_.context_k + 1;
  if (window.size() != n_slots)
    throw ArgumentError("forward: window has " + std::to_string(window.size()) +
                        " slots, expected " + std::to_string(n_slots));
  const Eigen::Index d = config_.feature_dim();
  Eigen::VectorXd aggregated(d * n_slots);
  for (Eigen::Index s = 0; s < n_slots; ++s)
    aggregated.segment(s * d, d) = slot_features(window.eeg_eog(s), window.emg(s));
  return logits_from_window_features(aggregated, mode, dropout_rng);
}

Eigen::VectorXd TimeDistributedNet::predict_proba(const ContextWindow& window) {
  Rng unused(0);
  return nn::softmax(forward_logits(window, Mode::Infer, unused));
}

std::vector<nn::ParamRef> TimeDistributedNet::trainable_params() {
  std::vector<nn::ParamRef> out;
  classifier_.collect_params("classifier", out);
  return out;
}

std::vector<nn::ParamRef> TimeDistributedNet::collect_params() {
  std::vector<nn::ParamRef> out;
  if (eeg_) eeg_->collect_params("eeg", out);
  if (emg_) emg_->collect_params("emg", out);
  classifier_.collect_params("classifier", out);
  return out;
}

SleepStage distribution_argmax(const Eigen::VectorXd& probabilities) {
  if (probabilities.size() != kNumStages)
    throw ArgumentError("distribution_argmax: need a 5-way distribution");
  int best = 0;
  for (int i = 1; i < kNumStages; ++i)
    if (probabilities[i] > probabilities[best]) best = i;  // strict: low ordinal wins ties
  return stage_from_index(best);
}

RecordPrediction predict_epochs(MultivariateNet& net, const std::vector<Epoch>& epochs) {
  RecordPrediction out;
  out.probabilities.resize(static_cast<Eigen::Index>(epochs.size()), kNumStages);
  out.stages.reserve(epochs.size());
  for (std::size_t t = 0; t < epochs.size(); ++t) {
    const Eigen::VectorXd p = net.predict_proba(epochs[t]);
    out.probabilities.row(static_cast<Eigen::Index>(t)) = p.transpose();
    out.stages.push_back(distribution_argmax(p));
  }
  return out;
}

RecordPrediction predict_epochs(TimeDistributedNet& net, const std::vector<Epoch>& epochs) {
  RecordPrediction out;
  out.probabilities.resize(static_cast<Eigen::Index>(epochs.size()), kNumStages);
  out.stages.reserve(epochs.size());
  for (std::size_t t = 0; t < epochs.size(); ++t) {
    const ContextWindow window =
        build_context(epochs, static_cast<Eigen::Index>(t), net.k());
    const Eigen::VectorXd p = net.predict_proba(window);
    out.probabilities.row(static_cast<Eigen::Index>(t)) = p.transpose();
    out.stages.push_back(distribution_argmax(p));
  }
  return out;
}

}  // namespace somnograph
