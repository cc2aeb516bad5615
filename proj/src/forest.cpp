#include "euro/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "euro/errors.hpp"
#include "euro/rng.hpp"

namespace euro {

namespace {

struct Sample {
  const std::vector<FeatureDiffRow>* rows;
  std::vector<int> idx;
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best variance-reduction split for one feature, over midpoints of the
// sorted distinct values, honoring min_leaf on both sides.
SplitChoice best_split_for_feature(const Sample& s, const std::vector<int>& node_idx,
                                   int feature, int min_leaf) {
  std::vector<std::pair<double, double>> pts;  // (x, y)
  pts.reserve(node_idx.size());
  for (int i : node_idx) {
    pts.emplace_back((*s.rows)[i].diff[feature], (*s.rows)[i].goals);
  }
  std::sort(pts.begin(), pts.end());
  const int n = static_cast<int>(pts.size());
  double total = 0.0;
  for (const auto& p : pts) total += p.second;

  SplitChoice best;
  double left_sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    left_sum += pts[i].second;
    if (pts[i].first == pts[i + 1].first) continue;
    int nl = i + 1, nr = n - nl;
    if (nl < min_leaf || nr < min_leaf) continue;
    double right_sum = total - left_sum;
    // Variance reduction up to constants: sum_l^2/n_l + sum_r^2/n_r.
    double gain = left_sum * left_sum / nl + right_sum * right_sum / nr -
                  total * total / n;
    if (gain > best.gain + 1e-12) {
      best.feature = feature;
      best.threshold = 0.5 * (pts[i].first + pts[i + 1].first);
      best.gain = gain;
    }
  }
  return best;
}

int grow_node(Tree& tree, const Sample& s, std::vector<int> node_idx, int mtry,
              int min_leaf, Rng& rng) {
  const int n = static_cast<int>(node_idx.size());
  double mean = 0.0;
  for (int i : node_idx) mean += (*s.rows)[i].goals;
  mean /= n;

  int node = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, mean});
  if (n < 2 * min_leaf) return node;

  // Draw mtry distinct candidate features.
  std::array<int, kNumFeatures> feats;
  std::iota(feats.begin(), feats.end(), 0);
  for (int i = kNumFeatures - 1; i > 0; --i) std::swap(feats[i], feats[rng.next_int(i + 1)]);

  SplitChoice best;
  for (int f = 0; f < mtry; ++f) {
    SplitChoice c = best_split_for_feature(s, node_idx, feats[f], min_leaf);
    if (c.feature >= 0 && c.gain > best.gain) best = c;
  }
  if (best.feature < 0) return node;

  std::vector<int> left_idx, right_idx;
  for (int i : node_idx) {
    if ((*s.rows)[i].diff[best.feature] <= best.threshold) left_idx.push_back(i);
    else right_idx.push_back(i);
  }
  node_idx.clear();
  node_idx.shrink_to_fit();

  tree.nodes[node].feature = best.feature;
  tree.nodes[node].threshold = best.threshold;
  int left = grow_node(tree, s, std::move(left_idx), mtry, min_leaf, rng);
  int right = grow_node(tree, s, std::move(right_idx), mtry, min_leaf, rng);
  tree.nodes[node].left = left;
  tree.nodes[node].right = right;
  return node;
}

}  // namespace

double ForestModel::predict(const std::array<double, kNumFeatures>& x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const std::vector<FeatureDiffRow>& rows, int mtry, int n_trees,
                       std::uint64_t seed, int min_leaf, double bootstrap_fraction) {
  if (rows.empty()) throw DataError("fit_forest: empty training data");
  if (n_trees <= 0) throw DataError("fit_forest: trees must be > 0");
  if (mtry < 1 || mtry > kNumFeatures) throw DataError("fit_forest: mtry out of [1,8]");

  ForestModel model;
  model.mtry = mtry;
  model.bootstrap_fraction = bootstrap_fraction;
  model.min_leaf = min_leaf;
  model.rng_seed = seed;
  model.trees.resize(n_trees);

  const int n = static_cast<int>(rows.size());
  int sample_size = std::max(1, static_cast<int>(std::round(bootstrap_fraction * n)));

  for (int t = 0; t < n_trees; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    // 63.2% subsample without replacement (the expected unique share of a
    // classical bootstrap).
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < sample_size; ++i) {
      std::swap(pool[i], pool[i + rng.next_int(n - i)]);
    }
    Sample s{&rows, std::vector<int>(pool.begin(), pool.begin() + sample_size)};
    grow_node(model.trees[t], s, s.idx, mtry, min_leaf, rng);
  }
  return model;
}

ForestTuneResult tune_forest(const std::vector<FeatureDiffRow>& rows, std::uint64_t seed,
                             int n_trees, int folds) {
  ForestTuneResult result;
  result.grid = {1, 2, 3, 4};

  const int n = static_cast<int>(rows.size());
  folds = std::min(folds, n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.next_int(i + 1)]);
  std::vector<int> fold(n);
  for (int i = 0; i < n; ++i) fold[idx[i]] = i % folds;

  for (int mtry : result.grid) {
    double nll = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::vector<FeatureDiffRow> train;
      std::vector<int> test_idx;
      for (int i = 0; i < n; ++i) {
        if (fold[i] == f) test_idx.push_back(i);
        else train.push_back(rows[i]);
      }
      ForestModel m = fit_forest(train, mtry, n_trees, seed + 17 * f + mtry);
      for (int i : test_idx) {
        double lambda = std::max(m.predict(rows[i].diff), 1e-6);
        nll -= rows[i].goals * std::log(lambda) - lambda;
      }
    }
    result.cv_neg_loglik.push_back(nll / n);
  }
  int best = 0;
  for (int g = 1; g < 4; ++g) {
    if (result.cv_neg_loglik[g] < result.cv_neg_loglik[best] - 1e-12) best = g;
  }
  result.best_mtry = result.grid[best];
  return result;
}

}  // namespace euro
