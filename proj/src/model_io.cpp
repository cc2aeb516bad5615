#include "euro/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "euro/errors.hpp"

namespace euro {

namespace {

using nlohmann::json;

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
  }
  return nodes;
}

Tree tree_from_json(const json& j) {
  Tree tree;
  for (const auto& n : j) {
    if (!n.is_array() || n.size() != 5) throw DataError("model file: malformed tree node");
    tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(), n[2].get<int>(),
                                  n[3].get<int>(), n[4].get<double>()});
  }
  if (tree.empty()) throw DataError("model file: empty tree");
  return tree;
}

template <std::size_t N>
std::array<double, N> array_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.size() != N) {
    throw DataError(std::string("model file: field ") + name + " must have " +
                    std::to_string(N) + " entries");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

void save_model(const CombinedModel& model, const std::string& path, const std::string& note) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["weights"] = model.weights;
  if (!note.empty()) doc["note"] = note;
  if (model.lasso) {
    const auto& m = *model.lasso;
    doc["lasso"] = {{"intercept", m.intercept},
                    {"coefficients", m.coefficients},
                    {"penalty", m.penalty},
                    {"feature_mean", m.feature_mean},
                    {"feature_scale", m.feature_scale}};
  }
  if (model.forest) {
    const auto& m = *model.forest;
    json trees = json::array();
    for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
    doc["forest"] = {{"mtry", m.mtry},
                     {"bootstrap_fraction", m.bootstrap_fraction},
                     {"min_leaf", m.min_leaf},
                     {"rng_seed", m.rng_seed},
                     {"trees", std::move(trees)}};
  }
  if (model.boosted) {
    const auto& m = *model.boosted;
    json trees = json::array();
    for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
    doc["boosted"] = {{"base_score", m.base_score},
                      {"learning_rate", m.learning_rate},
                      {"leaf_count_penalty", m.leaf_count_penalty},
                      {"l2_leaf_penalty", m.l2_leaf_penalty},
                      {"max_depth", m.max_depth},
                      {"trees", std::move(trees)}};
  }
  std::ofstream out(path);
  if (!out) throw DataError("save_model: cannot open " + path + " for writing");
  out << doc.dump(1) << "\n";
  if (!out) throw DataError("save_model: write failed for " + path);
}

CombinedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_model: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("load_model: " + path + " is not valid JSON: " + e.what());
  }
  try {
    int version = doc.at("format_version").get<int>();
    if (version > kModelFormatVersion) {
      throw DataError("load_model: " + path + " has format_version " +
                      std::to_string(version) + ", newer than supported " +
                      std::to_string(kModelFormatVersion));
    }
    CombinedModel model;
    model.weights = array_from_json<3>(doc.at("weights"), "weights");
    if (doc.contains("lasso")) {
      const json& j = doc["lasso"];
      LassoPoissonModel m;
      m.intercept = j.at("intercept").get<double>();
      m.coefficients = array_from_json<kNumFeatures>(j.at("coefficients"), "coefficients");
      m.penalty = j.at("penalty").get<double>();
      m.feature_mean = array_from_json<kNumFeatures>(j.at("feature_mean"), "feature_mean");
      m.feature_scale = array_from_json<kNumFeatures>(j.at("feature_scale"), "feature_scale");
      model.lasso = std::move(m);
    }
    if (doc.contains("forest")) {
      const json& j = doc["forest"];
      ForestModel m;
      m.mtry = j.at("mtry").get<int>();
      m.bootstrap_fraction = j.at("bootstrap_fraction").get<double>();
      m.min_leaf = j.at("min_leaf").get<int>();
      m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      if (m.trees.empty()) throw DataError("load_model: forest with no trees");
      model.forest = std::move(m);
    }
    if (doc.contains("boosted")) {
      const json& j = doc["boosted"];
      BoostedModel m;
      m.base_score = j.at("base_score").get<double>();
      m.learning_rate = j.at("learning_rate").get<double>();
      m.leaf_count_penalty = j.at("leaf_count_penalty").get<double>();
      m.l2_leaf_penalty = j.at("l2_leaf_penalty").get<double>();
      m.max_depth = j.at("max_depth").get<int>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      model.boosted = std::move(m);
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError("load_model: " + path + ": " + e.what());
  }
}

}  // namespace euro
