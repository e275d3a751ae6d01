#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "somnograph/net.hpp"

namespace somnograph {

// Versioned JSON checkpoint: {"format", "version", "kind", "trained",
// "config", "tensors": {name: {"shape": [...], "data": "<hex>"}}}. Buffers
// are hex-encoded little-endian IEEE-754 doubles, so round-trips are exact
// and files are byte-stable across platforms.
struct Checkpoint {
  int version = 1;
  std::string kind;  // "multivariate" | "time_distributed" | "feature_baseline"
  bool trained = false;
  nlohmann::ordered_json config;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

nlohmann::ordered_json model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::ordered_json& j);

Checkpoint checkpoint_from_net(MultivariateNet& net);
Checkpoint checkpoint_from_net(TimeDistributedNet& net);

MultivariateNet multivariate_from_checkpoint(const Checkpoint& checkpoint);
TimeDistributedNet time_distributed_from_checkpoint(const Checkpoint& checkpoint);

}  // namespace somnograph
