#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "euro/types.hpp"

namespace euro {

// L1-penalized Poisson regression on the 8 feature differences.
// Objective: sum_i (y_i * eta_i - exp(eta_i)) - penalty * sum_k |beta_k|,
// with the intercept unpenalized.  Fitting standardizes features internally;
// `coefficients` are reported back on the original scale.
struct LassoPoissonModel {
  double intercept = 0.0;
  std::array<double, kNumFeatures> coefficients{};
  double penalty = 0.0;
  std::array<double, kNumFeatures> feature_mean{};
  std::array<double, kNumFeatures> feature_scale{};

  double predict(const std::array<double, kNumFeatures>& diff) const;
};

LassoPoissonModel fit_lasso(const std::vector<FeatureDiffRow>& rows, double penalty);

struct LassoTuneResult {
  double best_penalty = 0.0;
  std::vector<double> grid;
  std::vector<double> cv_deviance;  // mean out-of-fold Poisson deviance per grid point
};

// 10-fold CV over a log-spaced penalty grid; deterministic per seed.
LassoTuneResult tune_lasso(const std::vector<FeatureDiffRow>& rows, int folds = 10,
                           std::uint64_t seed = 1);

// Mean Poisson deviance 2 * mean(y log(y/lambda) - (y - lambda)); the y = 0
// entropy term vanishes.
double poisson_deviance(const std::vector<double>& y, const std::vector<double>& lambda);

}  // namespace euro
