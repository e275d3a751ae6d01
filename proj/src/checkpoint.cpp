#include "somnograph/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace somnograph {

namespace {

constexpr const char* kFormatName = "somnograph-checkpoint";
constexpr int kFormatVersion = 1;

std::string encode_hex_le(const double* values, Eigen::Index n) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(static_cast<std::size_t>(n) * 16);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &values[i], sizeof(bits));
    for (int byte = 0; byte < 8; ++byte) {  // little-endian byte order
      const auto b = static_cast<unsigned>((bits >> (8 * byte)) & 0xFF);
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xF]);
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw ParseError(std::string("checkpoint: invalid hex character '") + c + "'");
}

void decode_hex_le(const std::string& hex, double* values, Eigen::Index n) {
  if (hex.size() != static_cast<std::size_t>(n) * 16)
    throw ParseError("checkpoint: tensor data length mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int byte = 0; byte < 8; ++byte) {
      const std::size_t at = static_cast<std::size_t>(i) * 16 + 2 * byte;
      const auto b = static_cast<std::uint64_t>(hex_value(hex[at]) * 16 +
                                                hex_value(hex[at + 1]));
      bits |= b << (8 * byte);
    }
    std::memcpy(&values[i], &bits, sizeof(bits));
  }
}

std::vector<std::pair<std::string, Tensor>> snapshot_params(
    const std::vector<nn::ParamRef>& params) {
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(params.size());
  for (const auto& p : params) {
    Tensor t(p.shape);
    std::memcpy(t.data(), p.values, static_cast<std::size_t>(p.size) * sizeof(double));
    out.emplace_back(p.name, std::move(t));
  }
  return out;
}

void restore_params(const std::vector<nn::ParamRef>& params,
                    const std::vector<std::pair<std::string, Tensor>>& tensors) {
  if (params.size() != tensors.size())
    throw ParseError("checkpoint: tensor count does not match the model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, tensor] = tensors[i];
    if (name != params[i].name)
      throw ParseError("checkpoint: expected tensor '" + params[i].name + "', found '" +
                       name + "'");
    if (tensor.shape() != params[i].shape)
      throw ParseError("checkpoint: shape mismatch for tensor '" + name + "'");
    std::memcpy(params[i].values, tensor.data(),
                static_cast<std::size_t>(tensor.size()) * sizeof(double));
  }
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = kFormatName;
  j["version"] = checkpoint.version;
  j["kind"] = checkpoint.kind;
  j["trained"] = checkpoint.trained;
  j["config"] = checkpoint.config;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::object();
  for (const auto& [name, tensor] : checkpoint.tensors) {
    nlohmann::ordered_json entry;
    entry["shape"] = tensor.shape();
    entry["data"] = encode_hex_le(tensor.data(), tensor.size());
    tensors[name] = std::move(entry);
  }
  j["tensors"] = std::move(tensors);

  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write checkpoint '" + path + "'");
  out << j.dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint '" + path + "'");
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != kFormatName)
    throw ParseError("checkpoint '" + path + "' has unknown format marker");
  Checkpoint checkpoint;
  checkpoint.version = j.value("version", 0);
  if (checkpoint.version != kFormatVersion)
    throw ParseError("checkpoint version " + std::to_string(checkpoint.version) +
                     " unsupported (expected " + std::to_string(kFormatVersion) + ")");
  checkpoint.kind = j.at("kind").get<std::string>();
  checkpoint.trained = j.at("trained").get<bool>();
  checkpoint.config = j.at("config");
  for (const auto& [name, entry] : j.at("tensors").items()) {
    Tensor t(entry.at("shape").get<std::vector<Eigen::Index>>());
    decode_hex_le(entry.at("data").get<std::string>(), t.data(), t.size());
    checkpoint.tensors.emplace_back(name, std::move(t));
  }
  return checkpoint;
}

nlohmann::ordered_json model_config_to_json(const ModelConfig& config) {
  nlohmann::ordered_json j;
  j["n_eeg_eog"] = config.n_eeg_eog;
  j["n_emg"] = config.n_emg;
  j["samples_per_epoch"] = config.samples_per_epoch;
  j["virtual_eeg"] = config.virtual_eeg;
  j["virtual_emg"] = config.virtual_emg;
  j["context_k"] = config.context_k;
  j["dropout_rate"] = config.dropout_rate;
  j["seed"] = config.seed;
  return j;
}

ModelConfig model_config_from_json(const nlohmann::ordered_json& j) {
  ModelConfig config;
  config.n_eeg_eog = j.at("n_eeg_eog").get<Eigen::Index>();
  config.n_emg = j.at("n_emg").get<Eigen::Index>();
  config.samples_per_epoch = j.at("samples_per_epoch").get<Eigen::Index>();
  config.virtual_eeg = j.at("virtual_eeg").get<Eigen::Index>();
  config.virtual_emg = j.at("virtual_emg").get<Eigen::Index>();
  config.context_k = j.at("context_k").get<Eigen::Index>();
  config.dropout_rate = j.at("dropout_rate").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.validate();
  return config;
}

Checkpoint checkpoint_from_net(MultivariateNet& net) {
  Checkpoint c;
  c.kind = "multivariate";
  c.trained = net.trained();
  c.config = model_config_to_json(net.config());
  c.tensors = snapshot_params(net.collect_params());
  return c;
}

Checkpoint checkpoint_from_net(TimeDistributedNet& net) {
  Checkpoint c;
  c.kind = "time_distributed";
  c.trained = net.trained();
  c.config = model_config_to_json(net.config());
  c.tensors = snapshot_params(net.collect_params());
  return c;
}

MultivariateNet multivariate_from_checkpoint(const Checkpoint& checkpoint) {
  if (checkpoint.kind != "multivariate")
    throw ParseError("checkpoint kind '" + checkpoint.kind + "' is not multivariate");
  MultivariateNet net(model_config_from_json(checkpoint.config));
  restore_params(net.collect_params(), checkpoint.tensors);
  net.mark_initialized();
  net.mark_trained(checkpoint.trained);
  return net;
}

TimeDistributedNet time_distributed_from_checkpoint(const Checkpoint& checkpoint) {
  if (checkpoint.kind != "time_distributed")
    throw ParseError("checkpoint kind '" + checkpoint.kind + "' is not time-distributed");
  ModelConfig config = model_config_from_json(checkpoint.config);
  ModelConfig base_config = config;
  base_config.context_k = 0;
  MultivariateNet base(base_config);
  TimeDistributedNet net(base, config.context_k);
  restore_params(net.collect_params(), checkpoint.tensors);
  net.mark_trained(checkpoint.trained);
  return net;
}

}  // namespace somnograph
