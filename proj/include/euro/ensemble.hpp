#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "euro/boosted.hpp"
#include "euro/forest.hpp"
#include "euro/lasso.hpp"
#include "euro/types.hpp"

namespace euro {

// Convex combination of the three member predictors; weights sum to 1.
// A member may be absent only while its weight is zero.
struct CombinedModel {
  std::array<double, 3> weights{1.0, 0.0, 0.0};  // lasso, forest, boosted
  std::optional<LassoPoissonModel> lasso;
  std::optional<ForestModel> forest;
  std::optional<BoostedModel> boosted;

  double predict(const std::array<double, kNumFeatures>& diff) const;
};

struct MetricReport {
  double ml = 0.0;           // mean multinomial likelihood
  double cr = 0.0;           // classification rate
  double rps = 0.0;          // mean rank probability score
  double mae_goals = 0.0;
  double mae_goaldiff = 0.0;
  int n_matches = 0;
};

// Per-match (ML_i, CR_i, RPS_i) from the three ordered outcome
// probabilities (win/draw/loss) and the observed outcome in {1,2,3}.
// Argmax ties break toward the draw outcome.
std::array<double, 3> match_metrics(const std::array<double, 3>& probs, int outcome);

// Per-match MAE contributions: ({|g1-l1|, |g2-l2|}, |goal diff error|).
std::pair<std::array<double, 2>, double> mae_metrics(const std::array<int, 2>& actual,
                                                     const std::array<double, 2>& predicted);

// Three-way bookmaker odds to outcome probabilities, margin split evenly.
std::array<double, 3> bookmaker_baseline(const std::array<double, 3>& odds);

// ---- leave-one-tournament-out cross-validation ----------------------------

// Diff rows of one tournament edition, in match-pair order (rows 2k, 2k+1
// are the two perspectives of match k).
struct TournamentData {
  int year = 0;
  std::vector<FeatureDiffRow> rows;
};

enum class ModelKind { lasso, forest, boosted, combined };

struct ModelSpec {
  ModelKind kind = ModelKind::combined;
  std::array<double, 3> weights{0.15, 0.85, 0.0};
  int forest_trees = 500;
  int boosted_rounds = 50;
  std::uint64_t seed = 1;
};

// Cached out-of-sample member predictions: lambda per match side per member.
struct CvPredictions {
  std::vector<std::array<int, 2>> actual_goals;                  // per match
  std::vector<int> outcome;                                      // 1/2/3
  std::vector<std::array<std::array<double, 2>, 3>> lambdas;     // [match][member][side]
};

// Fits/tunes the three members once per held-out tournament and caches
// their predictions for every held-out match.
CvPredictions loto_member_predictions(const std::vector<TournamentData>& tournaments,
                                      const ModelSpec& spec);

MetricReport loto_cv(const std::vector<TournamentData>& tournaments, const ModelSpec& spec);

// Metrics of a fixed weight vector on cached CV predictions.
MetricReport metrics_for_weights(const CvPredictions& cv, const std::array<double, 3>& weights);

// ---- weight tuning --------------------------------------------------------

struct WeightGridEntry {
  std::array<double, 3> weights{};
  MetricReport metrics;
  double ml_norm = 0.0;
  double cr_norm = 0.0;
  double rps_norm = 0.0;
  double avg_norm = 0.0;
};

// All 231 points of the 0.05-step weight simplex, min-max normalized over
// the grid and sorted by avg_norm (ties: larger ML, then lexicographic
// weights).
std::vector<WeightGridEntry> tune_weights(const CvPredictions& cv);

// ---- permutation variable importance --------------------------------------

// Mean over repeats of MAE_perm - MAE_org per feature, in-sample.
// `identity_permutation` is a test hook making every permutation a no-op.
std::array<double, kNumFeatures> permutation_importance(
    const CombinedModel& model, const std::vector<FeatureDiffRow>& rows, int repeats = 100,
    std::uint64_t seed = 1, bool identity_permutation = false);

}  // namespace euro
