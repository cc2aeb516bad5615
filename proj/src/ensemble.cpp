#include "euro/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "euro/errors.hpp"
#include "euro/match_prob.hpp"
#include "euro/rng.hpp"

namespace euro {

double CombinedModel::predict(const std::array<double, kNumFeatures>& diff) const {
  double lambda = 0.0;
  if (weights[0] != 0.0) {
    if (!lasso) throw DataError("combined model: lasso member unfitted but weighted");
    lambda += weights[0] * lasso->predict(diff);
  }
  if (weights[1] != 0.0) {
    if (!forest) throw DataError("combined model: forest member unfitted but weighted");
    lambda += weights[1] * forest->predict(diff);
  }
  if (weights[2] != 0.0) {
    if (!boosted) throw DataError("combined model: boosted member unfitted but weighted");
    lambda += weights[2] * boosted->predict(diff);
  }
  return std::max(lambda, 1e-6);
}

std::array<double, 3> match_metrics(const std::array<double, 3>& probs, int outcome) {
  double sum = probs[0] + probs[1] + probs[2];
  if (probs[0] < 0 || probs[1] < 0 || probs[2] < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw DataError("match_metrics: probabilities must be a simplex");
  }
  if (outcome < 1 || outcome > 3) throw DataError("match_metrics: outcome must be 1..3");

  double ml = probs[outcome - 1];

  // Argmax with ties broken toward the draw.
  double max_p = std::max({probs[0], probs[1], probs[2]});
  int pick;
  if (probs[1] == max_p) pick = 2;
  else if (probs[0] == max_p) pick = 1;
  else pick = 3;
  double cr = (pick == outcome) ? 1.0 : 0.0;

  double rps = 0.0;
  double cum_p = 0.0, cum_o = 0.0;
  for (int r = 1; r <= 2; ++r) {
    cum_p += probs[r - 1];
    cum_o += (outcome == r) ? 1.0 : 0.0;
    rps += (cum_p - cum_o) * (cum_p - cum_o);
  }
  rps /= 2.0;
  return {ml, cr, rps};
}

std::pair<std::array<double, 2>, double> mae_metrics(const std::array<int, 2>& actual,
                                                     const std::array<double, 2>& predicted) {
  if (actual[0] < 0 || actual[1] < 0) throw DataError("mae_metrics: goals must be >= 0");
  std::array<double, 2> goals_contrib = {std::abs(actual[0] - predicted[0]),
                                         std::abs(actual[1] - predicted[1])};
  double diff_contrib = std::abs((actual[0] - actual[1]) - (predicted[0] - predicted[1]));
  return {goals_contrib, diff_contrib};
}

std::array<double, 3> bookmaker_baseline(const std::array<double, 3>& odds) {
  std::array<double, 3> inv{};
  double c = 0.0;
  for (int r = 0; r < 3; ++r) {
    if (odds[r] <= 1.0) throw DataError("bookmaker_baseline: odds must be > 1");
    inv[r] = 1.0 / odds[r];
    c += inv[r];
  }
  for (double& p : inv) p /= c;
  return inv;
}

namespace {

int outcome_of(int g1, int g2) { return g1 > g2 ? 1 : (g1 == g2 ? 2 : 3); }

const std::vector<BoostedParams> kDefaultBoostGrid = {
    {50, 0.0, 1.0, 2},
    {50, 0.0, 1.0, 3},
    {100, 0.1, 1.0, 3},
};

}  // namespace

CvPredictions loto_member_predictions(const std::vector<TournamentData>& tournaments,
                                      const ModelSpec& spec) {
  if (tournaments.size() < 2) throw DataError("loto: need at least 2 tournaments");
  for (const auto& t : tournaments) {
    if (t.rows.empty()) {
      throw DataError("loto: tournament " + std::to_string(t.year) + " has no matches");
    }
    if (t.rows.size() % 2 != 0) {
      throw DataError("loto: tournament " + std::to_string(t.year) +
                      " has an odd number of rows (expected match pairs)");
    }
  }

  CvPredictions cv;
  for (std::size_t held = 0; held < tournaments.size(); ++held) {
    std::vector<FeatureDiffRow> train;
    for (std::size_t t = 0; t < tournaments.size(); ++t) {
      if (t == held) continue;
      train.insert(train.end(), tournaments[t].rows.begin(), tournaments[t].rows.end());
    }
    LassoTuneResult lasso_tune = tune_lasso(train, 10, spec.seed);
    LassoPoissonModel lasso = fit_lasso(train, lasso_tune.best_penalty);
    ForestTuneResult forest_tune = tune_forest(train, spec.seed, std::min(spec.forest_trees, 200));
    ForestModel forest = fit_forest(train, forest_tune.best_mtry, spec.forest_trees, spec.seed);
    BoostedTuneResult boost_tune = tune_boosted(train, kDefaultBoostGrid, spec.seed);
    BoostedModel boosted =
        fit_boosted(train, std::max(boost_tune.best.rounds, 1), 0.1,
                    boost_tune.best.leaf_count_penalty, boost_tune.best.l2_leaf_penalty,
                    boost_tune.best.max_depth);

    const auto& rows = tournaments[held].rows;
    for (std::size_t m = 0; m + 1 < rows.size(); m += 2) {
      const auto& r1 = rows[m];
      const auto& r2 = rows[m + 1];
      cv.actual_goals.push_back({r1.goals, r2.goals});
      cv.outcome.push_back(outcome_of(r1.goals, r2.goals));
      std::array<std::array<double, 2>, 3> lam{};
      lam[0] = {lasso.predict(r1.diff), lasso.predict(r2.diff)};
      lam[1] = {std::max(forest.predict(r1.diff), 1e-6),
                std::max(forest.predict(r2.diff), 1e-6)};
      lam[2] = {boosted.predict(r1.diff), boosted.predict(r2.diff)};
      cv.lambdas.push_back(lam);
    }
  }
  return cv;
}

MetricReport metrics_for_weights(const CvPredictions& cv, const std::array<double, 3>& weights) {
  MetricReport rep;
  rep.n_matches = static_cast<int>(cv.outcome.size());
  double mae_goals_sum = 0.0, mae_diff_sum = 0.0;
  for (std::size_t m = 0; m < cv.outcome.size(); ++m) {
    std::array<double, 2> lambda{};
    for (int side = 0; side < 2; ++side) {
      double l = 0.0;
      for (int member = 0; member < 3; ++member) {
        l += weights[member] * cv.lambdas[m][member][side];
      }
      lambda[side] = std::max(l, 1e-6);
    }
    OutcomeProbs probs = outcome_probs(MatchIntensities::clamped(lambda[0], lambda[1]));
    double norm = probs.win1 + probs.draw + probs.win2;
    auto [ml, cr, rps] =
        match_metrics({probs.win1 / norm, probs.draw / norm, probs.win2 / norm},
                      cv.outcome[m]);
    rep.ml += ml;
    rep.cr += cr;
    rep.rps += rps;
    auto [gc, dc] = mae_metrics(cv.actual_goals[m], lambda);
    mae_goals_sum += gc[0] + gc[1];
    mae_diff_sum += dc;
  }
  const double n = std::max(rep.n_matches, 1);
  rep.ml /= n;
  rep.cr /= n;
  rep.rps /= n;
  rep.mae_goals = mae_goals_sum / (2.0 * n);
  rep.mae_goaldiff = mae_diff_sum / n;
  return rep;
}

MetricReport loto_cv(const std::vector<TournamentData>& tournaments, const ModelSpec& spec) {
  CvPredictions cv = loto_member_predictions(tournaments, spec);
  std::array<double, 3> w{};
  switch (spec.kind) {
    case ModelKind::lasso: w = {1, 0, 0}; break;
    case ModelKind::forest: w = {0, 1, 0}; break;
    case ModelKind::boosted: w = {0, 0, 1}; break;
    case ModelKind::combined: w = spec.weights; break;
  }
  return metrics_for_weights(cv, w);
}

std::vector<WeightGridEntry> tune_weights(const CvPredictions& cv) {
  std::vector<WeightGridEntry> grid;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j + i <= 20; ++j) {
      WeightGridEntry e;
      e.weights = {i / 20.0, j / 20.0, (20 - i - j) / 20.0};
      e.metrics = metrics_for_weights(cv, e.weights);
      grid.push_back(std::move(e));
    }
  }

  auto norms = [&](auto get, bool lower_is_better) {
    double lo = get(grid[0]), hi = get(grid[0]);
    for (const auto& e : grid) {
      lo = std::min(lo, get(e));
      hi = std::max(hi, get(e));
    }
    std::vector<double> out;
    out.reserve(grid.size());
    for (const auto& e : grid) {
      if (hi - lo < 1e-15) {
        out.push_back(100.0);  // metric constant on the grid
      } else if (lower_is_better) {
        out.push_back((hi - get(e)) / (hi - lo) * 100.0);
      } else {
        out.push_back((get(e) - lo) / (hi - lo) * 100.0);
      }
    }
    return out;
  };
  auto ml_n = norms([](const WeightGridEntry& e) { return e.metrics.ml; }, false);
  auto cr_n = norms([](const WeightGridEntry& e) { return e.metrics.cr; }, false);
  auto rps_n = norms([](const WeightGridEntry& e) { return e.metrics.rps; }, true);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid[g].ml_norm = ml_n[g];
    grid[g].cr_norm = cr_n[g];
    grid[g].rps_norm = rps_n[g];
    grid[g].avg_norm = (ml_n[g] + cr_n[g] + rps_n[g]) / 3.0;
  }
  std::sort(grid.begin(), grid.end(), [](const WeightGridEntry& a, const WeightGridEntry& b) {
    if (a.avg_norm != b.avg_norm) return a.avg_norm > b.avg_norm;
    if (a.metrics.ml != b.metrics.ml) return a.metrics.ml > b.metrics.ml;
    return a.weights < b.weights;
  });
  return grid;
}

std::array<double, kNumFeatures> permutation_importance(const CombinedModel& model,
                                                        const std::vector<FeatureDiffRow>& rows,
                                                        int repeats, std::uint64_t seed,
                                                        bool identity_permutation) {
  const int n = static_cast<int>(rows.size());
  double mae_org = 0.0;
  for (const auto& r : rows) mae_org += std::abs(r.goals - model.predict(r.diff));
  mae_org /= n;

  std::array<double, kNumFeatures> importance{};
  std::vector<FeatureDiffRow> permuted = rows;
  for (int k = 0; k < kNumFeatures; ++k) {
    double sum = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      if (!identity_permutation) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k) * repeats + rep);
        for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_int(i + 1)]);
      }
      for (int i = 0; i < n; ++i) permuted[i].diff[k] = rows[perm[i]].diff[k];
      double mae_perm = 0.0;
      for (const auto& r : permuted) mae_perm += std::abs(r.goals - model.predict(r.diff));
      sum += mae_perm / n - mae_org;
    }
    for (int i = 0; i < n; ++i) permuted[i].diff[k] = rows[i].diff[k];
    importance[k] = sum / repeats;
  }
  return importance;
}

}  // namespace euro
