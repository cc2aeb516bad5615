#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "euro/tree.hpp"
#include "euro/types.hpp"

namespace euro {

// Second-order gradient boosting in log-intensity space with Poisson
// deviance loss.  Each round fits a tree to gradient/hessian statistics;
// leaf weights are -G / (H + l2_leaf_penalty) and splits pay
// leaf_count_penalty per extra leaf.  Prediction:
//   lambda(x) = exp(base_score + learning_rate * sum_k f_k(x)).
struct BoostedModel {
  double base_score = 0.0;  // log(mean y)
  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double leaf_count_penalty = 0.0;
  double l2_leaf_penalty = 1.0;
  int max_depth = 3;

  double predict(const std::array<double, kNumFeatures>& diff) const;

  // Mean training deviance after each round (round 0 = initialization).
  std::vector<double> deviance_trace;
};

BoostedModel fit_boosted(const std::vector<FeatureDiffRow>& rows, int rounds,
                         double learning_rate = 0.1, double leaf_count_penalty = 0.0,
                         double l2_leaf_penalty = 1.0, int max_depth = 3);

struct BoostedParams {
  int rounds = 50;
  double leaf_count_penalty = 0.0;
  double l2_leaf_penalty = 1.0;
  int max_depth = 3;
};

struct BoostedTuneResult {
  BoostedParams best;
  std::vector<std::pair<BoostedParams, double>> grid_deviance;
};

// Grid search by 10-fold CV mean out-of-fold Poisson deviance; the stopping
// round per grid point is itself chosen by CV (best round <= rounds).
BoostedTuneResult tune_boosted(const std::vector<FeatureDiffRow>& rows,
                               const std::vector<BoostedParams>& grid,
                               std::uint64_t seed = 1, int folds = 10);

}  // namespace euro
