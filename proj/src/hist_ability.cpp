#include "euro/hist_ability.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "euro/errors.hpp"

namespace euro {

double time_weight(double days_ago, double half_period_days) {
  if (days_ago < 0) throw DataError("time_weight: days_ago must be >= 0");
  if (half_period_days <= 0) throw DataError("time_weight: half period must be > 0");
  return std::pow(0.5, days_ago / half_period_days);
}

double type_weight(MatchType type) {
  switch (type) {
    case MatchType::world_cup: return 4.0;
    case MatchType::confederation_tournament: return 3.0;
    case MatchType::qualifier: return 2.5;
    case MatchType::friendly_other: return 1.0;
  }
  return 1.0;
}

MatchWeight match_weight(const MatchRecord& match, const Date& reference_date,
                         double half_period_days) {
  MatchWeight w;
  w.w_time = time_weight(days_between(match.date, reference_date), half_period_days);
  w.w_type = type_weight(match.type);
  w.w = w.w_time * w.w_type;
  return w;
}

double HistAbilityModel::expected_goals(const std::string& team, const std::string& opponent,
                                        bool team_at_home) const {
  double r_t = abilities.at(team);
  double r_o = abilities.at(opponent);
  double h = 0.0;
  if (team_at_home) {
    auto it = home_effects.find(team);
    if (it != home_effects.end()) h = it->second;
  }
  return std::exp(intercept + (r_t - r_o) + h);
}

namespace {

struct Obs {
  int goals;
  int team;       // scoring team index
  int opponent;   // conceding team index
  bool at_home;   // home indicator active (non-neutral home side)
  double weight;
};

}  // namespace

HistAbilityModel fit_hist_abilities(const std::vector<MatchRecord>& matches,
                                    const Date& reference_date,
                                    const HistAbilityOptions& options) {
  const double window_days = options.window_years * 365.25;

  std::map<std::string, int> team_index;
  std::vector<std::string> team_names;
  std::vector<Obs> obs;
  std::vector<double> weighted_matches;  // per team, summed match weights

  auto index_of = [&](const std::string& name) {
    auto [it, inserted] = team_index.try_emplace(name, static_cast<int>(team_names.size()));
    if (inserted) {
      team_names.push_back(name);
      weighted_matches.push_back(0.0);
    }
    return it->second;
  };

  for (const auto& m : matches) {
    double days_ago = days_between(m.date, reference_date);
    if (days_ago < 0 || days_ago > window_days) continue;
    MatchWeight w = match_weight(m, reference_date, options.half_period_days);
    int hi = index_of(m.home_team);
    int ai = index_of(m.away_team);
    obs.push_back({m.goals_home, hi, ai, !m.neutral, w.w});
    obs.push_back({m.goals_away, ai, hi, false, w.w});
    weighted_matches[hi] += w.w;
    weighted_matches[ai] += w.w;
  }
  if (obs.empty()) {
    throw DataError("fit_hist_abilities: no matches inside the " +
                    std::to_string(options.window_years) + "-year window");
  }

  const int n = static_cast<int>(team_names.size());
  const int n_home = options.team_specific_home ? n : 1;
  const int dim = 1 + n + n_home;  // beta0, r_1..r_n, h
  auto home_col = [&](int team) { return 1 + n + (options.team_specific_home ? team : 0); };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  // The likelihood only sees ability differences, so the common shift of r
  // is a null direction; a stiff quadratic penalty on sum(r) pins it.  It
  // must dominate any sparse ridge, or the optimum shifts the whole field
  // instead of shrinking the thin teams.
  const double sum_penalty = 1e6;
  // Tiny diagonal regularization keeps unused home columns solvable.
  Eigen::VectorXd ridge = Eigen::VectorXd::Constant(dim, 1e-9);
  ridge[0] = 0.0;
  if (options.sparse_ridge > 0) {
    for (int t = 0; t < n; ++t) {
      if (weighted_matches[t] < 5.0) ridge[1 + t] += options.sparse_ridge;
    }
  }

  auto log_lik = [&](const Eigen::VectorXd& th) {
    double ll = 0.0;
    for (const auto& o : obs) {
      double eta = th[0] + th[1 + o.team] - th[1 + o.opponent];
      if (o.at_home) eta += th[home_col(o.team)];
      ll += o.weight * (o.goals * eta - std::exp(eta));
    }
    for (int d = 0; d < dim; ++d) ll -= 0.5 * ridge[d] * th[d] * th[d];
    double sum_r = th.segment(1, n).sum();
    ll -= 0.5 * sum_penalty * sum_r * sum_r;
    return ll;
  };

  double grad_norm = 0.0;
  bool converged = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& o : obs) {
      double eta = theta[0] + theta[1 + o.team] - theta[1 + o.opponent];
      int hc = o.at_home ? home_col(o.team) : -1;
      if (hc >= 0) eta += theta[hc];
      double mu = std::exp(eta);
      double g = o.weight * (o.goals - mu);
      double w2 = o.weight * mu;
      int cols[4];
      double vals[4];
      int k = 0;
      cols[k] = 0; vals[k++] = 1.0;
      cols[k] = 1 + o.team; vals[k++] = 1.0;
      cols[k] = 1 + o.opponent; vals[k++] = -1.0;
      if (hc >= 0) { cols[k] = hc; vals[k++] = 1.0; }
      for (int a = 0; a < k; ++a) {
        grad[cols[a]] += g * vals[a];
        for (int b = 0; b < k; ++b) hess(cols[a], cols[b]) += w2 * vals[a] * vals[b];
      }
    }
    for (int d = 0; d < dim; ++d) {
      grad[d] -= ridge[d] * theta[d];
      hess(d, d) += ridge[d];
    }
    double sum_r = theta.segment(1, n).sum();
    for (int a = 0; a < n; ++a) {
      grad[1 + a] -= sum_penalty * sum_r;
      for (int b = 0; b < n; ++b) hess(1 + a, 1 + b) += sum_penalty;
    }
    grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (grad_norm < options.grad_tol) {
      converged = true;
      break;
    }
    Eigen::VectorXd step = hess.ldlt().solve(grad);
    double ll0 = log_lik(theta);
    // Newton decrement below the round-off level of the objective: no
    // numerically meaningful improvement is left, so stop.  An absolute
    // gradient tolerance alone would stall on large weighted datasets.
    if (0.5 * grad.dot(step) < 1e-12 * (1.0 + std::abs(ll0))) {
      converged = true;
      break;
    }
    // Backtracking keeps Newton inside the concave region; the slack is
    // relative to |ll| because the objective is evaluated with round-off
    // proportional to its magnitude.
    double alpha = 1.0;
    for (int half = 0; half < 40; ++half) {
      Eigen::VectorXd cand = theta + alpha * step;
      if (log_lik(cand) >= ll0 - 1e-10 * (1.0 + std::abs(ll0))) {
        theta = cand;
        break;
      }
      alpha *= 0.5;
    }
  }
  if (!converged) {
    throw NumericError("fit_hist_abilities: no convergence after " +
                       std::to_string(options.max_iter) +
                       " iterations (gradient norm " + std::to_string(grad_norm) + ")");
  }

  double mean_r = theta.segment(1, n).mean();
  HistAbilityModel model;
  model.intercept = theta[0];
  model.half_period_days = options.half_period_days;
  for (int t = 0; t < n; ++t) {
    model.abilities[team_names[t]] = theta[1 + t] - mean_r;
    model.home_effects[team_names[t]] = theta[home_col(t)];
  }
  return model;
}

}  // namespace euro
