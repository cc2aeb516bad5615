#pragma once

#include <map>
#include <string>
#include <vector>

#include "euro/types.hpp"

namespace euro {

double time_weight(double days_ago, double half_period_days);
double type_weight(MatchType type);

struct MatchWeight {
  double w_time = 1.0;
  double w_type = 1.0;
  double w = 1.0;  // product
};

MatchWeight match_weight(const MatchRecord& match, const Date& reference_date,
                         double half_period_days);

struct HistAbilityOptions {
  double half_period_days = 1095.75;  // three-year half period
  double window_years = 8.0;
  // One shared home-advantage parameter by default; switchable to one per team.
  bool team_specific_home = false;
  // Shrinks r_i of teams with < 5 weighted matches toward 0 when > 0.
  double sparse_ridge = 0.0;
  int max_iter = 100;
  double grad_tol = 1e-8;
};

struct HistAbilityModel {
  double intercept = 0.0;                      // beta_0
  std::map<std::string, double> abilities;     // r_i, sum zero
  std::map<std::string, double> home_effects;  // h_i (identical under shared h)
  double half_period_days = 1095.75;

  // Expected goals for `team` against `opponent`; home indicator applies
  // to `team` only.
  double expected_goals(const std::string& team, const std::string& opponent,
                        bool team_at_home) const;
};

HistAbilityModel fit_hist_abilities(const std::vector<MatchRecord>& matches,
                                    const Date& reference_date,
                                    const HistAbilityOptions& options = {});

inline HistAbilityModel fit_hist_abilities(const std::vector<MatchRecord>& matches,
                                           const Date& reference_date, double window_years) {
  HistAbilityOptions opt;
  opt.window_years = window_years;
  return fit_hist_abilities(matches, reference_date, opt);
}

}  // namespace euro
