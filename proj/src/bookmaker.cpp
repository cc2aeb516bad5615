#include "euro/bookmaker.hpp"

#include <algorithm>
#include <cmath>

#include "euro/csv.hpp"
#include "euro/errors.hpp"
#include "euro/simulator.hpp"

namespace euro {

double clean_odds(double quoted, double delta) {
  if (quoted <= 1.0) throw DataError("clean_odds: quoted odds must be > 1");
  if (delta <= 0.0 || delta >= 1.0) throw DataError("clean_odds: delta must be in (0,1)");
  return (quoted - 1.0) / delta;
}

double solve_overround(const OddsSheet& sheet) {
  if (sheet.entries.empty()) throw DataError("solve_overround: empty odds sheet");
  double book = 0.0;
  for (const auto& [team, quoted] : sheet.entries) {
    if (quoted <= 1.0) {
      throw DataError("solve_overround: " + sheet.bookmaker + " quotes odds <= 1 for " + team);
    }
    book += 1.0 / quoted;
  }
  if (book <= 1.0) {
    throw DataError("solve_overround: " + sheet.bookmaker +
                    " has no margin (implied probabilities sum to <= 1)");
  }
  // f(delta) = sum 1/(clean + 1) is increasing from 0 at delta=0 to the raw
  // book sum at delta=1, so the root is unique in (0,1).
  auto f = [&](double delta) {
    double s = 0.0;
    for (const auto& [team, quoted] : sheet.entries) s += delta / (quoted - 1.0 + delta);
    return s - 1.0;
  };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double median_overround(const std::vector<OddsSheet>& sheets) {
  if (sheets.empty()) throw DataError("median_overround: no odds sheets");
  std::vector<double> deltas;
  deltas.reserve(sheets.size());
  for (const auto& s : sheets) deltas.push_back(solve_overround(s));
  std::sort(deltas.begin(), deltas.end());
  std::size_t n = deltas.size();
  return n % 2 == 1 ? deltas[n / 2] : 0.5 * (deltas[n / 2 - 1] + deltas[n / 2]);
}

std::map<std::string, double> consensus_log_odds(const std::vector<OddsSheet>& sheets,
                                                 double delta) {
  std::map<std::string, double> sum;
  std::map<std::string, int> count;
  for (const auto& s : sheets) {
    for (const auto& [team, quoted] : s.entries) {
      sum[team] += std::log(clean_odds(quoted, delta));
      count[team] += 1;
    }
  }
  if (sum.empty()) throw DataError("consensus_log_odds: no quoted teams");
  for (auto& [team, v] : sum) v /= count[team];
  return sum;
}

double win_probability(double l) { return 1.0 / (std::exp(l) + 1.0); }

namespace {

double log_odds_of_prob(double p) { return std::log((1.0 - p) / p); }

// Simulated winner log-odds under given abilities; counts clamped away from
// 0 and n so the log stays finite.
std::map<std::string, double> simulated_log_odds(const TournamentConfig& cfg,
                                                 const std::map<std::string, double>& abilities,
                                                 double offset, long sims, std::uint64_t seed,
                                                 int threads) {
  IntensityFn model = [&](const std::string& a, const std::string& b) {
    double l1 = std::exp(offset + abilities.at(a) - abilities.at(b));
    double l2 = std::exp(offset + abilities.at(b) - abilities.at(a));
    return MatchIntensities::clamped(l1, l2);
  };
  StageReport rep = run_tournament_mc(cfg, model, sims, seed, threads);
  std::map<std::string, double> out;
  const double n = static_cast<double>(sims);
  for (const auto& [team, p] : rep.teams) {
    double wins = std::clamp(p.champion * n, 0.5, n - 0.5);
    out[team] = log_odds_of_prob(wins / n);
  }
  return out;
}

double rmse_gap(const std::map<std::string, double>& sim,
                const std::map<std::string, double>& target) {
  double s = 0.0;
  for (const auto& [team, l] : target) {
    double d = sim.at(team) - l;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(target.size()));
}

void center(std::map<std::string, double>& m) {
  double mean = 0.0;
  for (const auto& [k, v] : m) mean += v;
  mean /= static_cast<double>(m.size());
  for (auto& [k, v] : m) v -= mean;
}

}  // namespace

ConsensusAbilities fit_consensus_abilities(const std::map<std::string, double>& probs,
                                           const TournamentConfig& config,
                                           std::uint64_t rng_seed,
                                           const ConsensusFitOptions& opts) {
  config.validate();
  for (const std::string& team : config.all_teams()) {
    auto it = probs.find(team);
    if (it == probs.end()) throw DataError("fit_consensus_abilities: no probability for " + team);
    if (it->second <= 0.0 || it->second >= 1.0) {
      throw DataError("fit_consensus_abilities: probability for " + team + " not in (0,1)");
    }
  }

  ConsensusAbilities result;
  result.offset = opts.offset;
  std::map<std::string, double> target;
  for (const std::string& team : config.all_teams()) {
    double p = probs.at(team);
    target[team] = log_odds_of_prob(p);
    result.win_prob[team] = p;
  }
  result.log_odds = target;

  // Start at half the negated log-odds: shorter odds, higher ability.
  std::map<std::string, double> abilities;
  for (const auto& [team, l] : target) abilities[team] = -l / 2.0;
  center(abilities);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    std::map<std::string, double> sim =
        simulated_log_odds(config, abilities, opts.offset, opts.sims_per_iter,
                           Rng::derive(rng_seed, static_cast<std::uint64_t>(iter)).next_u64(),
                           opts.threads);
    double loss = rmse_gap(sim, target);
    result.loss_trace.push_back(loss);
    if (loss < opts.target_rmse) {
      // Confirm at the full replication count before accepting: the loop
      // estimate at sims_per_iter carries visible Monte Carlo noise.
      std::map<std::string, double> verify = simulated_log_odds(
          config, abilities, opts.offset, opts.verify_sims,
          Rng::derive(rng_seed, 0x76657269ULL + static_cast<std::uint64_t>(iter)).next_u64(),
          opts.threads);
      double verified = rmse_gap(verify, target);
      result.loss_trace.back() = verified;
      if (verified < opts.target_rmse) {
        result.logability = abilities;
        center(result.logability);
        return result;
      }
    }
    // A team whose simulated odds are too long wins too rarely: raise its
    // ability by the decaying step, and vice versa.
    double step = 0.01 * std::pow(static_cast<double>(iter), -0.1);
    for (auto& [team, a] : abilities) {
      double gap = sim.at(team) - target.at(team);
      if (gap > 0) a += step;
      else if (gap < 0) a -= step;
    }
    center(abilities);
  }
  std::string trace;
  for (double l : result.loss_trace) trace += " " + std::to_string(l);
  throw NumericError("fit_consensus_abilities: no convergence after " +
                     std::to_string(opts.max_iter) + " iterations; loss trace:" + trace);
}

ConsensusAbilities consensus_from_sheets(const std::vector<OddsSheet>& sheets,
                                         const TournamentConfig& config,
                                         std::uint64_t rng_seed,
                                         const ConsensusFitOptions& opts) {
  double delta = median_overround(sheets);
  std::map<std::string, double> l = consensus_log_odds(sheets, delta);
  std::map<std::string, double> probs;
  for (const std::string& team : config.all_teams()) {
    auto it = l.find(team);
    if (it == l.end()) throw DataError("consensus_from_sheets: no odds quoted for " + team);
    probs[team] = win_probability(it->second);
  }
  ConsensusAbilities result = fit_consensus_abilities(probs, config, rng_seed, opts);
  result.overround = delta;
  return result;
}

std::vector<OddsSheet> load_odds(const std::string& path) {
  CsvTable table = read_csv(path);
  require_header(table, {"bookmaker", "team", "quoted_odds"}, path);
  std::map<std::string, OddsSheet> by_name;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::string where = path + " row " + std::to_string(i + 2);
    if (row.size() != 3) throw DataError(where + ": expected 3 fields");
    double quoted;
    try {
      quoted = std::stod(row[2]);
    } catch (const std::exception&) {
      throw DataError(where + ": bad quoted_odds '" + row[2] + "'");
    }
    if (quoted <= 1.0) throw DataError(where + ": quoted odds must be > 1");
    auto [it, inserted] = by_name.try_emplace(row[0]);
    if (inserted) {
      it->second.bookmaker = row[0];
      order.push_back(row[0]);
    }
    if (!it->second.entries.emplace(row[1], quoted).second) {
      throw DataError(where + ": duplicate quote for " + row[1] + " by " + row[0]);
    }
  }
  std::vector<OddsSheet> sheets;
  sheets.reserve(order.size());
  for (const auto& name : order) sheets.push_back(std::move(by_name[name]));
  return sheets;
}

}  // namespace euro
