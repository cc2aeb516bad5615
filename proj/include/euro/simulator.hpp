#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "euro/match_prob.hpp"
#include "euro/rng.hpp"
#include "euro/tournament.hpp"

namespace euro {

// Expected goals of (team1, team2) on neutral ground.
using IntensityFn =
    std::function<MatchIntensities(const std::string& team1, const std::string& team2)>;

struct GroupStanding {
  std::string team;
  int points = 0;
  int goal_diff = 0;
  int goals_for = 0;
};

// Final ranking of one group from the six pairwise scores; score[i][j] for
// i < j is (goals of team i, goals of team j).  Cascade: points, then
// head-to-head points / goal difference / goals among the tied teams, then
// overall goal difference, overall goals, then a uniform random draw.
std::vector<GroupStanding> rank_group(
    const std::vector<std::string>& teams,
    const std::array<std::array<std::pair<int, int>, 4>, 4>& score, Rng& rng);

struct GroupStageResult {
  // Final ranking per group, best first.
  std::array<std::vector<GroupStanding>, 6> standings;
  // The four qualified third-place teams' groups as a sorted letter string.
  std::string third_combo;
  // Teams filling third-place slots T1..T4.
  std::array<std::string, 4> third_slots;

  std::vector<std::string> qualified16(const TournamentConfig& cfg) const;
};

GroupStageResult simulate_group_stage(const TournamentConfig& cfg, const IntensityFn& model,
                                      Rng& rng);

struct KnockoutResult {
  std::array<std::string, 16> r16_teams;
  std::array<std::string, 8> qf_teams;
  std::array<std::string, 4> sf_teams;
  std::array<std::string, 2> finalists;
  std::string champion;
};

// Knockout ties: 90 minutes at full intensities, extra time at one third of
// them on a draw, fair coin if still level.
KnockoutResult simulate_knockout(const GroupStageResult& groups, const TournamentConfig& cfg,
                                 const IntensityFn& model, Rng& rng);

struct StageProbs {
  double r16 = 0, qf = 0, sf = 0, final_ = 0, champion = 0;
};

struct StageReport {
  std::map<std::string, StageProbs> teams;
  // Raw reach counts per stage (r16, qf, sf, final, champion); column sums
  // are exactly 16, 8, 4, 2, 1 times the replication count.
  std::map<std::string, std::array<long, 5>> counts;
  long replications = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo over full tournament replications; per-replication RNG streams
// derive from (seed, replication index), so the report is independent of the
// thread count.  Intensities are evaluated once per ordered team pair and
// cached before the loop.
StageReport run_tournament_mc(const TournamentConfig& cfg, const IntensityFn& model,
                              long replications = 100000, std::uint64_t seed = 1,
                              int threads = 0);

}  // namespace euro
