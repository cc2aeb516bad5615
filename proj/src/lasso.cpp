#include "euro/lasso.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "euro/errors.hpp"
#include "euro/rng.hpp"

namespace euro {

namespace {

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Exact minimizer of the weighted lasso subproblem
//   0.5 sum_i w_i (z_i - b0 - x_i . b)^2 + penalty * sum_k |b_k|
// by an active-set method: on a fixed sign pattern the problem is a linear
// system; coefficients that would cross zero are clipped out along the way,
// and the most KKT-violating zero coefficient is activated one at a time.
// Exact subproblem solves keep the outer IRLS a true Newton iteration;
// coordinate descent can crawl arbitrarily slowly on collinear features.
void solve_penalized_wls(const std::vector<std::array<double, kNumFeatures>>& x,
                         const std::vector<double>& w, const std::vector<double>& z,
                         const std::array<bool, kNumFeatures>& usable, double penalty,
                         double& b0, std::array<double, kNumFeatures>& b) {
  const int n = static_cast<int>(x.size());
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale += w[i] * std::abs(z[i]);
  const double eps = 1e-10 * scale;

  std::array<int, kNumFeatures> s{};
  for (int k = 0; k < kNumFeatures; ++k) s[k] = usable[k] ? sign_of(b[k]) : 0;

  for (int pass = 0; pass < 200; ++pass) {
    // Solve on the current active set, dropping sign-crossing coefficients.
    for (int drop = 0; drop <= kNumFeatures; ++drop) {
      std::vector<int> act;
      for (int k = 0; k < kNumFeatures; ++k) {
        if (s[k] != 0) act.push_back(k);
      }
      const int m = static_cast<int>(act.size()) + 1;  // + intercept
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < n; ++i) {
        M(0, 0) += w[i];
        rhs(0) += w[i] * z[i];
        for (int a = 0; a < m - 1; ++a) {
          double xa = x[i][act[a]];
          M(0, a + 1) += w[i] * xa;
          rhs(a + 1) += w[i] * xa * z[i];
          for (int c = a; c < m - 1; ++c) M(a + 1, c + 1) += w[i] * xa * x[i][act[c]];
        }
      }
      for (int a = 0; a < m; ++a)
        for (int c = 0; c < a; ++c) M(a, c) = M(c, a);
      for (int a = 0; a < m - 1; ++a) rhs(a + 1) -= penalty * s[act[a]];
      Eigen::VectorXd sol = M.ldlt().solve(rhs);

      // Step from the current point toward the orthant solution, stopping at
      // the first coefficient that would cross zero.
      double t = 1.0;
      int crossing = -1;
      for (int a = 0; a < m - 1; ++a) {
        int k = act[a];
        if (sign_of(sol(a + 1)) != s[k]) {
          double tk = b[k] != 0.0 && b[k] != sol(a + 1) ? b[k] / (b[k] - sol(a + 1)) : 0.0;
          if (tk < t) {
            t = tk;
            crossing = k;
          }
        }
      }
      b0 += t * (sol(0) - b0);
      for (int a = 0; a < m - 1; ++a) {
        int k = act[a];
        b[k] += t * (sol(a + 1) - b[k]);
      }
      if (crossing < 0) break;
      b[crossing] = 0.0;
      s[crossing] = 0;
    }

    // KKT check on the subproblem; activate the worst violator, if any.
    std::vector<double> resid(n);
    for (int i = 0; i < n; ++i) {
      double fit = b0;
      for (int k = 0; k < kNumFeatures; ++k) fit += b[k] * x[i][k];
      resid[i] = z[i] - fit;
    }
    int worst = -1;
    int worst_sign = 0;
    double worst_violation = eps;
    for (int k = 0; k < kNumFeatures; ++k) {
      if (!usable[k] || s[k] != 0) continue;
      double g = 0.0;
      for (int i = 0; i < n; ++i) g += w[i] * x[i][k] * resid[i];
      double violation = std::abs(g) - penalty;
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = k;
        worst_sign = sign_of(g);
      }
    }
    if (worst < 0) return;
    s[worst] = worst_sign;
  }
  throw NumericError("fit_lasso: active-set subproblem solve did not terminate");
}

}  // namespace

double LassoPoissonModel::predict(const std::array<double, kNumFeatures>& diff) const {
  double eta = intercept;
  for (int k = 0; k < kNumFeatures; ++k) eta += coefficients[k] * diff[k];
  return std::exp(eta);
}

double poisson_deviance(const std::vector<double>& y, const std::vector<double>& lambda) {
  double dev = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double l = std::max(lambda[i], 1e-12);
    double term = (y[i] > 0) ? y[i] * std::log(y[i] / l) : 0.0;
    dev += 2.0 * (term - (y[i] - l));
  }
  return dev / static_cast<double>(y.size());
}

LassoPoissonModel fit_lasso(const std::vector<FeatureDiffRow>& rows, double penalty) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw DataError("fit_lasso: need at least 2 rows");
  if (penalty < 0) throw DataError("fit_lasso: penalty must be >= 0");

  std::array<double, kNumFeatures> mean{}, scale{};
  for (const auto& r : rows)
    for (int k = 0; k < kNumFeatures; ++k) mean[k] += r.diff[k];
  for (int k = 0; k < kNumFeatures; ++k) mean[k] /= n;
  for (const auto& r : rows)
    for (int k = 0; k < kNumFeatures; ++k) {
      double d = r.diff[k] - mean[k];
      scale[k] += d * d;
    }
  std::array<bool, kNumFeatures> active{};
  for (int k = 0; k < kNumFeatures; ++k) {
    scale[k] = std::sqrt(scale[k] / n);
    active[k] = scale[k] > 1e-12;
    if (!active[k]) scale[k] = 1.0;  // constant column, coefficient stays 0
  }

  std::vector<std::array<double, kNumFeatures>> x(n);
  std::vector<double> y(n);
  double mean_y = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < kNumFeatures; ++k) x[i][k] = (rows[i].diff[k] - mean[k]) / scale[k];
    y[i] = rows[i].goals;
    mean_y += y[i];
  }
  mean_y /= n;

  double b0 = std::log(std::max(mean_y, 1e-8));
  std::array<double, kNumFeatures> b{};
  std::vector<double> eta(n, b0);
  std::vector<double> objective_trace;

  bool converged = false;
  for (int outer = 0; outer < 200; ++outer) {
    // IRLS working response and weights at the current linear predictor.
    std::vector<double> w(n), z(n);
    for (int i = 0; i < n; ++i) {
      double mu = std::exp(eta[i]);
      w[i] = mu;
      z[i] = eta[i] + (y[i] - mu) / mu;
    }
    // Exact solve of the penalized weighted least squares problem.
    solve_penalized_wls(x, w, z, active, penalty, b0, b);
    double max_eta_change = 0.0;
    for (int i = 0; i < n; ++i) {
      double fit = b0;
      for (int k = 0; k < kNumFeatures; ++k) fit += b[k] * x[i][k];
      max_eta_change = std::max(max_eta_change, std::abs(fit - eta[i]));
      eta[i] = fit;
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += y[i] * eta[i] - std::exp(eta[i]);
    for (int k = 0; k < kNumFeatures; ++k) obj -= penalty * std::abs(b[k]);
    objective_trace.push_back(obj);
    if (max_eta_change < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::string trace;
    for (std::size_t i = objective_trace.size() >= 5 ? objective_trace.size() - 5 : 0;
         i < objective_trace.size(); ++i) {
      trace += " " + std::to_string(objective_trace[i]);
    }
    throw NumericError("fit_lasso: no convergence; objective trace tail:" + trace);
  }

  LassoPoissonModel model;
  model.penalty = penalty;
  model.feature_mean = mean;
  model.feature_scale = scale;
  model.intercept = b0;
  for (int k = 0; k < kNumFeatures; ++k) {
    model.coefficients[k] = b[k] / scale[k];
    model.intercept -= b[k] * mean[k] / scale[k];
  }
  return model;
}

namespace {

std::vector<int> shuffled_fold_assignment(int n, int folds, std::uint64_t seed) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.next_int(i + 1)]);
  std::vector<int> fold(n);
  for (int i = 0; i < n; ++i) fold[idx[i]] = i % folds;
  return fold;
}

bool folds_degenerate(const std::vector<FeatureDiffRow>& rows, const std::vector<int>& fold,
                      int folds) {
  for (int f = 0; f < folds; ++f) {
    int first = -1;
    bool varied = false, nonempty_test = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold[i] == f) {
        nonempty_test = true;
        continue;
      }
      if (first < 0) first = rows[i].goals;
      else if (rows[i].goals != first) varied = true;
    }
    if (!nonempty_test || !varied) return true;
  }
  return false;
}

}  // namespace

LassoTuneResult tune_lasso(const std::vector<FeatureDiffRow>& rows, int folds,
                           std::uint64_t seed) {
  const int n = static_cast<int>(rows.size());
  if (n < folds) throw DataError("tune_lasso: fewer rows than folds");

  // All-identical responses within a training fold make the Poisson fit
  // degenerate; fall back to fewer folds in that case.
  std::vector<int> fold;
  while (folds >= 2) {
    fold = shuffled_fold_assignment(n, folds, seed);
    if (!folds_degenerate(rows, fold, folds)) break;
    --folds;
  }
  if (folds < 2) throw DataError("tune_lasso: responses too degenerate for cross-validation");

  // Grid top: the smallest penalty whose first IRLS pass keeps all slopes
  // at zero (score of each standardized feature at the intercept-only fit).
  LassoPoissonModel null_fit = fit_lasso(rows, 1e18);
  double mean_y = std::exp(null_fit.intercept);
  double penalty_max = 1e-3;
  for (int k = 0; k < kNumFeatures; ++k) {
    double score = 0.0;
    for (const auto& r : rows) {
      double xs = (r.diff[k] - null_fit.feature_mean[k]) / null_fit.feature_scale[k];
      score += xs * (r.goals - mean_y);
    }
    penalty_max = std::max(penalty_max, std::abs(score));
  }

  LassoTuneResult result;
  const int grid_size = 50;
  for (int g = 0; g < grid_size; ++g) {
    double t = static_cast<double>(g) / (grid_size - 1);
    result.grid.push_back(penalty_max * std::pow(1e-4, t));
  }

  result.cv_deviance.assign(grid_size, 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<FeatureDiffRow> train;
    std::vector<int> test_idx;
    for (int i = 0; i < n; ++i) {
      if (fold[i] == f) test_idx.push_back(i);
      else train.push_back(rows[i]);
    }
    for (int g = 0; g < grid_size; ++g) {
      LassoPoissonModel m = fit_lasso(train, result.grid[g]);
      std::vector<double> yt, lt;
      for (int i : test_idx) {
        yt.push_back(rows[i].goals);
        lt.push_back(m.predict(rows[i].diff));
      }
      result.cv_deviance[g] += poisson_deviance(yt, lt) * test_idx.size();
    }
  }
  for (double& d : result.cv_deviance) d /= n;

  // Ties break toward the larger (sparser) penalty; the grid is descending.
  int best = 0;
  for (int g = 1; g < grid_size; ++g) {
    if (result.cv_deviance[g] < result.cv_deviance[best] - 1e-12) best = g;
  }
  result.best_penalty = result.grid[best];
  return result;
}

}  // namespace euro
