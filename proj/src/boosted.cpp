#include "euro/boosted.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "euro/errors.hpp"
#include "euro/rng.hpp"

namespace euro {

namespace {

struct GradPair {
  double g = 0.0;
  double h = 0.0;
};

struct BoostSplit {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double leaf_objective(double g_sum, double h_sum, double l2) {
  return g_sum * g_sum / (h_sum + l2);
}

BoostSplit best_boost_split(const std::vector<FeatureDiffRow>& rows,
                            const std::vector<int>& node_idx,
                            const std::vector<GradPair>& grad, double l2, double gamma) {
  double g_tot = 0.0, h_tot = 0.0;
  for (int i : node_idx) {
    g_tot += grad[i].g;
    h_tot += grad[i].h;
  }
  BoostSplit best;
  for (int feature = 0; feature < kNumFeatures; ++feature) {
    std::vector<std::pair<double, int>> pts;
    pts.reserve(node_idx.size());
    for (int i : node_idx) pts.emplace_back(rows[i].diff[feature], i);
    std::sort(pts.begin(), pts.end());
    double g_left = 0.0, h_left = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      g_left += grad[pts[i].second].g;
      h_left += grad[pts[i].second].h;
      if (pts[i].first == pts[i + 1].first) continue;
      double gain = 0.5 * (leaf_objective(g_left, h_left, l2) +
                           leaf_objective(g_tot - g_left, h_tot - h_left, l2) -
                           leaf_objective(g_tot, h_tot, l2)) -
                    gamma;
      if (gain > best.gain + 1e-12) {
        best.feature = feature;
        best.threshold = 0.5 * (pts[i].first + pts[i + 1].first);
        best.gain = gain;
      }
    }
  }
  return best;
}

int grow_boost_node(Tree& tree, const std::vector<FeatureDiffRow>& rows,
                    std::vector<int> node_idx, const std::vector<GradPair>& grad,
                    double l2, double gamma, int depth, int max_depth) {
  double g_sum = 0.0, h_sum = 0.0;
  for (int i : node_idx) {
    g_sum += grad[i].g;
    h_sum += grad[i].h;
  }
  int node = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, -g_sum / (h_sum + l2)});
  if (depth >= max_depth || node_idx.size() < 2) return node;

  BoostSplit best = best_boost_split(rows, node_idx, grad, l2, gamma);
  if (best.feature < 0 || best.gain <= 0) return node;

  std::vector<int> left_idx, right_idx;
  for (int i : node_idx) {
    if (rows[i].diff[best.feature] <= best.threshold) left_idx.push_back(i);
    else right_idx.push_back(i);
  }
  tree.nodes[node].feature = best.feature;
  tree.nodes[node].threshold = best.threshold;
  tree.nodes[node].value = 0.0;
  int left = grow_boost_node(tree, rows, std::move(left_idx), grad, l2, gamma,
                             depth + 1, max_depth);
  int right = grow_boost_node(tree, rows, std::move(right_idx), grad, l2, gamma,
                              depth + 1, max_depth);
  tree.nodes[node].left = left;
  tree.nodes[node].right = right;
  return node;
}

double mean_deviance(const std::vector<FeatureDiffRow>& rows, const std::vector<double>& f) {
  double dev = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double y = rows[i].goals;
    double lambda = std::exp(f[i]);
    double term = (y > 0) ? y * std::log(y / lambda) : 0.0;
    dev += 2.0 * (term - (y - lambda));
  }
  return dev / static_cast<double>(rows.size());
}

}  // namespace

double BoostedModel::predict(const std::array<double, kNumFeatures>& diff) const {
  double f = base_score;
  for (const auto& t : trees) f += learning_rate * t.predict(diff);
  return std::exp(f);
}

BoostedModel fit_boosted(const std::vector<FeatureDiffRow>& rows, int rounds,
                         double learning_rate, double leaf_count_penalty,
                         double l2_leaf_penalty, int max_depth) {
  if (rows.empty()) throw DataError("fit_boosted: empty training data");
  if (rounds < 0) throw DataError("fit_boosted: rounds must be >= 0");

  BoostedModel model;
  model.learning_rate = learning_rate;
  model.leaf_count_penalty = leaf_count_penalty;
  model.l2_leaf_penalty = l2_leaf_penalty;
  model.max_depth = max_depth;

  double mean_y = 0.0;
  for (const auto& r : rows) mean_y += r.goals;
  mean_y /= static_cast<double>(rows.size());
  model.base_score = std::log(std::max(mean_y, 1e-8));

  const int n = static_cast<int>(rows.size());
  std::vector<double> f(n, model.base_score);
  model.deviance_trace.push_back(mean_deviance(rows, f));

  std::vector<int> all_idx(n);
  std::iota(all_idx.begin(), all_idx.end(), 0);

  for (int round = 0; round < rounds; ++round) {
    std::vector<GradPair> grad(n);
    for (int i = 0; i < n; ++i) {
      double mu = std::exp(f[i]);
      if (mu > 100.0) {
        throw NumericError("fit_boosted: intensity exploded (lambda > 100); "
                           "check the learning rate");
      }
      grad[i].g = mu - rows[i].goals;
      grad[i].h = mu;
    }
    Tree tree;
    grow_boost_node(tree, rows, all_idx, grad, l2_leaf_penalty, leaf_count_penalty, 0,
                    max_depth);
    for (int i = 0; i < n; ++i) f[i] += learning_rate * tree.predict(rows[i].diff);
    model.trees.push_back(std::move(tree));
    model.deviance_trace.push_back(mean_deviance(rows, f));
  }
  return model;
}

BoostedTuneResult tune_boosted(const std::vector<FeatureDiffRow>& rows,
                               const std::vector<BoostedParams>& grid,
                               std::uint64_t seed, int folds) {
  if (grid.empty()) throw DataError("tune_boosted: empty parameter grid");
  const int n = static_cast<int>(rows.size());
  folds = std::min(folds, n);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.next_int(i + 1)]);
  std::vector<int> fold(n);
  for (int i = 0; i < n; ++i) fold[idx[i]] = i % folds;

  BoostedTuneResult result;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& p : grid) {
    // Out-of-fold deviance per boosting round, pooled over folds.
    std::vector<double> round_dev(p.rounds + 1, 0.0);
    for (int fo = 0; fo < folds; ++fo) {
      std::vector<FeatureDiffRow> train, test;
      for (int i = 0; i < n; ++i) {
        (fold[i] == fo ? test : train).push_back(rows[i]);
      }
      BoostedModel m = fit_boosted(train, p.rounds, 0.1, p.leaf_count_penalty,
                                   p.l2_leaf_penalty, p.max_depth);
      std::vector<double> ft(test.size(), m.base_score);
      round_dev[0] += mean_deviance(test, ft) * test.size();
      for (int r = 0; r < p.rounds; ++r) {
        for (std::size_t i = 0; i < test.size(); ++i) {
          ft[i] += m.learning_rate * m.trees[r].predict(test[i].diff);
        }
        round_dev[r + 1] += mean_deviance(test, ft) * test.size();
      }
    }
    // Early-stopping round: smallest round with minimal CV deviance.
    int best_round = 0;
    for (int r = 1; r <= p.rounds; ++r) {
      if (round_dev[r] < round_dev[best_round] - 1e-12) best_round = r;
    }
    BoostedParams chosen = p;
    chosen.rounds = best_round;
    double score = round_dev[best_round] / n;
    result.grid_deviance.emplace_back(chosen, score);
    if (score < best_score - 1e-12) {
      best_score = score;
      result.best = chosen;
    }
  }
  return result;
}

}  // namespace euro
