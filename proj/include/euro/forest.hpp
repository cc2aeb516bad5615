#pragma once

#include <cstdint>
#include <vector>

#include "euro/tree.hpp"
#include "euro/types.hpp"

namespace euro {

// Bootstrap ensemble of variance-reduction regression trees.  Approximates
// the conditional-inference forest it stands in for: splits are plain
// variance-reduction splits, without the permutation-test split selection.
struct ForestModel {
  std::vector<Tree> trees;
  int mtry = 1;
  double bootstrap_fraction = 0.632;
  int min_leaf = 5;
  std::uint64_t rng_seed = 0;

  // Arithmetic mean of the per-tree predictions (may be ~0 for degenerate
  // data; clamp at the call site before use as a Poisson intensity).
  double predict(const std::array<double, kNumFeatures>& x) const;
};

ForestModel fit_forest(const std::vector<FeatureDiffRow>& rows, int mtry, int n_trees,
                       std::uint64_t seed, int min_leaf = 5,
                       double bootstrap_fraction = 0.632);

struct ForestTuneResult {
  int best_mtry = 1;
  std::vector<int> grid;           // {1, 2, 3, 4}
  std::vector<double> cv_neg_loglik;
};

// mtry in {1,2,3,4} minimizing 10-fold CV negative Poisson log-likelihood
// of the forest's intensity predictions.
ForestTuneResult tune_forest(const std::vector<FeatureDiffRow>& rows, std::uint64_t seed,
                             int n_trees = 300, int folds = 10);

}  // namespace euro
