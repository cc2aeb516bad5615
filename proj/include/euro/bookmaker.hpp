#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "euro/tournament.hpp"

namespace euro {

// One bookmaker's quoted tournament-winning odds per team.
struct OddsSheet {
  std::string bookmaker;
  std::map<std::string, double> entries;  // team -> quoted odds, > 1
};

// quoted = fair * delta + 1, so fair = (quoted - 1) / delta.
double clean_odds(double quoted, double delta);

// The margin delta in (0,1) making this sheet's cleaned odds a fair book:
// sum over teams of 1 / (clean_odds + 1) = 1.  Solved by bisection.
double solve_overround(const OddsSheet& sheet);

// Median of per-sheet margins.
double median_overround(const std::vector<OddsSheet>& sheets);

// Per-team mean of log cleaned odds across all sheets quoting the team.
std::map<std::string, double> consensus_log_odds(const std::vector<OddsSheet>& sheets,
                                                 double delta);

// Winning probability implied by mean log odds l: 1 / (exp(l) + 1).
double win_probability(double l);

struct ConsensusAbilities {
  std::map<std::string, double> log_odds;   // l_i
  std::map<std::string, double> win_prob;   // p_i
  std::map<std::string, double> logability; // fitted abilities, mean zero
  double overround = 0.0;
  double offset = 0.15;
  std::vector<double> loss_trace;           // RMSE(l~, l) per iteration
};

struct ConsensusFitOptions {
  double offset = 0.15;          // intercept of the simulation intensities
  long sims_per_iter = 10000;
  long verify_sims = 100000;     // replication count for the final check
  int max_iter = 500;
  double target_rmse = 0.05;
  int threads = 0;
};

// Inverse tournament simulation: adjusts centered abilities by steps of
// magnitude 0.01 * iter^(-0.1) until the winner log-odds of a simulated
// tournament (lambda = exp(offset + a_i - a_j), no home advantage) match the
// consensus log-odds with RMSE below target.  Convergence is confirmed with
// a verification run at verify_sims replications.
ConsensusAbilities fit_consensus_abilities(const std::map<std::string, double>& probs,
                                           const TournamentConfig& config,
                                           std::uint64_t rng_seed,
                                           const ConsensusFitOptions& opts = {});

// Full pipeline from odds sheets: margin, cleaned consensus, inverse fit.
ConsensusAbilities consensus_from_sheets(const std::vector<OddsSheet>& sheets,
                                         const TournamentConfig& config,
                                         std::uint64_t rng_seed,
                                         const ConsensusFitOptions& opts = {});

std::vector<OddsSheet> load_odds(const std::string& path);

}  // namespace euro
