#include "euro/simulator.hpp"

#include <algorithm>
#include <thread>

#include "euro/errors.hpp"

namespace euro {

namespace {

struct TeamStats {
  int points = 0;
  int gd = 0;
  int gf = 0;
};

}  // namespace

std::vector<GroupStanding> rank_group(const std::vector<std::string>& teams,
                                      const std::array<std::array<std::pair<int, int>, 4>, 4>& score,
                                      Rng& rng) {
  const int n = static_cast<int>(teams.size());
  std::vector<TeamStats> stats(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto [gi, gj] = score[i][j];
      stats[i].gd += gi - gj;
      stats[j].gd += gj - gi;
      stats[i].gf += gi;
      stats[j].gf += gj;
      if (gi > gj) stats[i].points += 3;
      else if (gj > gi) stats[j].points += 3;
      else {
        stats[i].points += 1;
        stats[j].points += 1;
      }
    }
  }
  std::vector<double> tiebreak(n);
  for (int i = 0; i < n; ++i) tiebreak[i] = rng.next_double();

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return stats[a].points > stats[b].points; });

  // Resolve each maximal block of equal-points teams.
  std::vector<int> ranked;
  std::size_t pos = 0;
  while (pos < order.size()) {
    std::size_t end = pos;
    while (end < order.size() && stats[order[end]].points == stats[order[pos]].points) ++end;
    std::vector<int> block(order.begin() + pos, order.begin() + end);
    if (block.size() > 1) {
      std::map<int, TeamStats> h2h;
      for (int t : block) h2h[t] = TeamStats{};
      for (std::size_t a = 0; a < block.size(); ++a) {
        for (std::size_t b = a + 1; b < block.size(); ++b) {
          int i = std::min(block[a], block[b]), j = std::max(block[a], block[b]);
          auto [gi, gj] = score[i][j];
          h2h[i].gd += gi - gj;
          h2h[j].gd += gj - gi;
          h2h[i].gf += gi;
          h2h[j].gf += gj;
          if (gi > gj) h2h[i].points += 3;
          else if (gj > gi) h2h[j].points += 3;
          else {
            h2h[i].points += 1;
            h2h[j].points += 1;
          }
        }
      }
      std::sort(block.begin(), block.end(), [&](int a, int b) {
        const TeamStats& ha = h2h[a];
        const TeamStats& hb = h2h[b];
        if (ha.points != hb.points) return ha.points > hb.points;
        if (ha.gd != hb.gd) return ha.gd > hb.gd;
        if (ha.gf != hb.gf) return ha.gf > hb.gf;
        if (stats[a].gd != stats[b].gd) return stats[a].gd > stats[b].gd;
        if (stats[a].gf != stats[b].gf) return stats[a].gf > stats[b].gf;
        return tiebreak[a] > tiebreak[b];
      });
    }
    ranked.insert(ranked.end(), block.begin(), block.end());
    pos = end;
  }

  std::vector<GroupStanding> out;
  for (int idx : ranked) {
    out.push_back(GroupStanding{teams[idx], stats[idx].points, stats[idx].gd, stats[idx].gf});
  }
  return out;
}

std::vector<std::string> GroupStageResult::qualified16(const TournamentConfig& cfg) const {
  std::vector<std::string> out;
  for (const auto& [a, b] : cfg.r16) {
    for (const SlotRef& s : {a, b}) {
      if (s.rank == 3) out.push_back(third_slots[s.group]);
      else out.push_back(standings[s.group][s.rank - 1].team);
    }
  }
  return out;
}

GroupStageResult simulate_group_stage(const TournamentConfig& cfg, const IntensityFn& model,
                                      Rng& rng) {
  GroupStageResult result;
  for (int g = 0; g < 6; ++g) {
    const auto& teams = cfg.groups[g];
    std::array<std::array<std::pair<int, int>, 4>, 4> score{};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        score[i][j] = sample_score(
            MatchIntensities::clamped(model(teams[i], teams[j]).lambda1,
                                      model(teams[i], teams[j]).lambda2),
            rng);
      }
    }
    result.standings[g] = rank_group(teams, score, rng);
  }

  // Best four third-placed teams: points, goal difference, goals, random.
  struct Third {
    int group;
    GroupStanding s;
    double tiebreak;
  };
  std::vector<Third> thirds;
  for (int g = 0; g < 6; ++g) {
    thirds.push_back({g, result.standings[g][2], rng.next_double()});
  }
  std::sort(thirds.begin(), thirds.end(), [](const Third& a, const Third& b) {
    if (a.s.points != b.s.points) return a.s.points > b.s.points;
    if (a.s.goal_diff != b.s.goal_diff) return a.s.goal_diff > b.s.goal_diff;
    if (a.s.goals_for != b.s.goals_for) return a.s.goals_for > b.s.goals_for;
    return a.tiebreak > b.tiebreak;
  });

  std::array<int, 4> qualified_groups = {thirds[0].group, thirds[1].group, thirds[2].group,
                                         thirds[3].group};
  std::string combo;
  {
    std::array<int, 4> sorted = qualified_groups;
    std::sort(sorted.begin(), sorted.end());
    for (int g : sorted) combo += static_cast<char>('A' + g);
  }
  result.third_combo = combo;
  const auto& slot_groups = cfg.thirds.at(combo);
  for (int slot = 0; slot < 4; ++slot) {
    result.third_slots[slot] = result.standings[slot_groups[slot]][2].team;
  }
  return result;
}

namespace {

std::string play_tie(const std::string& a, const std::string& b, const IntensityFn& model,
                     Rng& rng) {
  MatchIntensities lam = model(a, b);
  auto [g1, g2] = sample_score(MatchIntensities::clamped(lam.lambda1, lam.lambda2), rng);
  if (g1 != g2) return g1 > g2 ? a : b;
  // 30 minutes extra time at one third of the 90-minute intensities.
  auto [e1, e2] =
      sample_score(MatchIntensities::clamped(lam.lambda1 / 3.0, lam.lambda2 / 3.0), rng);
  g1 += e1;
  g2 += e2;
  if (g1 != g2) return g1 > g2 ? a : b;
  return rng.next_coin() ? a : b;  // penalty shootout, 50/50
}

}  // namespace

KnockoutResult simulate_knockout(const GroupStageResult& groups, const TournamentConfig& cfg,
                                 const IntensityFn& model, Rng& rng) {
  KnockoutResult result;
  std::array<std::pair<std::string, std::string>, 8> ties;
  for (int m = 0; m < 8; ++m) {
    auto resolve = [&](const SlotRef& s) {
      return s.rank == 3 ? groups.third_slots[s.group]
                         : groups.standings[s.group][s.rank - 1].team;
    };
    ties[m] = {resolve(cfg.r16[m].first), resolve(cfg.r16[m].second)};
    result.r16_teams[2 * m] = ties[m].first;
    result.r16_teams[2 * m + 1] = ties[m].second;
  }
  std::array<std::string, 8> w;
  for (int m = 0; m < 8; ++m) w[m] = play_tie(ties[m].first, ties[m].second, model, rng);
  result.qf_teams = w;

  // Fixed bracket over the tie list: QF1 = W(m3) v W(m1), QF2 = W(m5) v W(m6),
  // QF3 = W(m7) v W(m8), QF4 = W(m4) v W(m2).
  std::array<std::pair<int, int>, 4> qf = {{{2, 0}, {4, 5}, {6, 7}, {3, 1}}};
  std::array<std::string, 4> qw;
  for (int m = 0; m < 4; ++m) {
    qw[m] = play_tie(w[qf[m].first], w[qf[m].second], model, rng);
  }
  result.sf_teams = qw;

  result.finalists[0] = play_tie(qw[0], qw[1], model, rng);
  result.finalists[1] = play_tie(qw[2], qw[3], model, rng);
  result.champion = play_tie(result.finalists[0], result.finalists[1], model, rng);
  return result;
}

StageReport run_tournament_mc(const TournamentConfig& cfg, const IntensityFn& model,
                              long replications, std::uint64_t seed, int threads) {
  if (replications <= 0) throw DataError("run_tournament_mc: replications must be > 0");
  cfg.validate();

  std::vector<std::string> teams = cfg.all_teams();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < teams.size(); ++i) index[teams[i]] = static_cast<int>(i);

  // Evaluate the (possibly expensive) model once per ordered pair.
  const int n = static_cast<int>(teams.size());
  std::vector<MatchIntensities> cache(n * n, MatchIntensities{1, 1});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) cache[i * n + j] = model(teams[i], teams[j]);
    }
  }
  IntensityFn cached = [&](const std::string& a, const std::string& b) {
    return cache[index.at(a) * n + index.at(b)];
  };

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }

  // counts[team][stage]: r16, qf, sf, final, champion
  std::vector<std::vector<std::array<long, 5>>> counts(
      threads, std::vector<std::array<long, 5>>(n, {0, 0, 0, 0, 0}));

  auto worker = [&](int tid) {
    auto& local = counts[tid];
    for (long rep = tid; rep < replications; rep += threads) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(rep));
      GroupStageResult groups = simulate_group_stage(cfg, cached, rng);
      KnockoutResult ko = simulate_knockout(groups, cfg, cached, rng);
      for (const auto& t : ko.r16_teams) local[index.at(t)][0]++;
      for (const auto& t : ko.qf_teams) local[index.at(t)][1]++;
      for (const auto& t : ko.sf_teams) local[index.at(t)][2]++;
      for (const auto& t : ko.finalists) local[index.at(t)][3]++;
      local[index.at(ko.champion)][4]++;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  StageReport report;
  report.replications = replications;
  report.seed = seed;
  for (int i = 0; i < n; ++i) {
    std::array<long, 5> total{};
    for (int t = 0; t < threads; ++t) {
      for (int s = 0; s < 5; ++s) total[s] += counts[t][i][s];
    }
    StageProbs p;
    const double r = static_cast<double>(replications);
    p.r16 = total[0] / r;
    p.qf = total[1] / r;
    p.sf = total[2] / r;
    p.final_ = total[3] / r;
    p.champion = total[4] / r;
    report.teams[teams[i]] = p;
    report.counts[teams[i]] = total;
  }
  return report;
}

}  // namespace euro
