#include "edgecl/meta_update.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace edgecl {

using nlohmann::json;

void EwmaPolicy::validate() const {
  if (!(similarity_threshold >= -1.0 && similarity_threshold <= 1.0)) {
    throw std::invalid_argument("EwmaPolicy: similarity_threshold must be in [-1, 1]");
  }
  if (!(eps_low >= 0.0 && eps_low <= eps_high && eps_high <= 1.0)) {
    throw std::invalid_argument("EwmaPolicy: need 0 <= eps_low <= eps_high <= 1");
  }
}

double select_epsilon(double similarity, const EwmaPolicy& policy) {
  if (!(similarity >= -1.0 && similarity <= 1.0)) throw std::invalid_argument("select_epsilon: similarity out of [-1, 1]");
  return similarity >= policy.similarity_threshold ? policy.eps_high : policy.eps_low;
}

BaseModelState update_base(BaseModelState state, const ModelWeights& zeta, const Embedding& scene_centroid,
                           const EwmaPolicy& policy, std::size_t scene_id) {
  policy.validate();
  if (!(state.phi.config() == zeta.config())) throw std::invalid_argument("update_base: base/specialized shape mismatch");

  BaseUpdateRecord record{scene_id, std::nullopt, policy.eps_low};
  if (state.previous_centroid) {
    record.similarity = cosine_similarity(*state.previous_centroid, scene_centroid);
    record.epsilon = select_epsilon(*record.similarity, policy);
  }
  state.phi = interpolate(state.phi, zeta, record.epsilon);
  state.previous_centroid = scene_centroid;
  ++state.update_count;
  state.history.push_back(record);
  return state;
}

std::string save_base(const BaseModelState& state) {
  const auto& c = state.phi.config();
  json doc;
  doc["format"] = "edgecl-base";
  doc["version"] = kBaseFormatVersion;
  doc["config"] = {{"input_dim", c.input_dim}, {"hidden_dim", c.hidden_dim}, {"num_classes", c.num_classes}};
  doc["weights"] = std::vector<double>(state.phi.flat().begin(), state.phi.flat().end());
  json history = json::array();
  for (const auto& h : state.history) {
    json rec = {{"scene_id", h.scene_id}, {"epsilon", h.epsilon}};
    rec["similarity"] = h.similarity ? json(*h.similarity) : json(nullptr);
    history.push_back(rec);
  }
  doc["metadata"] = {{"update_count", state.update_count}, {"history", history}};
  doc["metadata"]["previous_centroid"] = state.previous_centroid ? json(*state.previous_centroid) : json(nullptr);
  return doc.dump(2);
}

BaseModelState load_base(const std::string& artifact, const ModelConfig& expected) {
  json doc;
  try {
    doc = json::parse(artifact);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("load_base: malformed artifact: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "edgecl-base") throw std::invalid_argument("load_base: not a base artifact");
    const int version = doc.at("version").get<int>();
    if (version != kBaseFormatVersion) {
      throw std::invalid_argument("load_base: unsupported version " + std::to_string(version));
    }
    ModelConfig config;
    config.input_dim = doc.at("config").at("input_dim").get<std::size_t>();
    config.hidden_dim = doc.at("config").at("hidden_dim").get<std::size_t>();
    config.num_classes = doc.at("config").at("num_classes").get<std::size_t>();
    if (!(config == expected)) {
      throw std::invalid_argument("load_base: artifact shape (" + std::to_string(config.input_dim) + "," +
                                  std::to_string(config.hidden_dim) + "," + std::to_string(config.num_classes) +
                                  ") does not match model config (" + std::to_string(expected.input_dim) + "," +
                                  std::to_string(expected.hidden_dim) + "," +
                                  std::to_string(expected.num_classes) + ")");
    }
    BaseModelState state;
    state.phi = ModelWeights::from_flat(config, doc.at("weights").get<std::vector<double>>());
    if (!state.phi.all_finite()) throw std::invalid_argument("load_base: non-finite weights");
    const auto& meta = doc.at("metadata");
    state.update_count = meta.at("update_count").get<std::size_t>();
    if (!meta.at("previous_centroid").is_null()) {
      state.previous_centroid = meta.at("previous_centroid").get<std::vector<double>>();
      if (state.previous_centroid->size() != config.hidden_dim) {
        throw std::invalid_argument("load_base: previous_centroid has wrong dimension");
      }
    }
    for (const auto& rec : meta.at("history")) {
      BaseUpdateRecord h;
      h.scene_id = rec.at("scene_id").get<std::size_t>();
      h.epsilon = rec.at("epsilon").get<double>();
      if (!rec.at("similarity").is_null()) h.similarity = rec.at("similarity").get<double>();
      state.history.push_back(h);
    }
    return state;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("load_base: ") + e.what());
  }
}

void save_base_file(const BaseModelState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_base_file: cannot open " + path.string());
  out << save_base(state) << '\n';
}

BaseModelState load_base_file(const std::filesystem::path& path, const ModelConfig& expected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_base_file: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_base(ss.str(), expected);
}

}  // namespace edgecl
