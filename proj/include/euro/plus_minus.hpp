#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "euro/types.hpp"

namespace euro {

// Events at the same minute apply in enum order: red card, then
// substitution (off before on), then goal.
enum class PmEventType { red_card, sub_off, sub_on, goal };

struct PmEvent {
  double minute = 0;
  PmEventType type = PmEventType::goal;
  std::string player;  // empty for goals if scorer is irrelevant
  bool home = true;
};

struct MatchEvents {
  std::string match_id;
  Date date;
  std::string competition;
  std::string home_team;
  std::string away_team;
  bool neutral = false;
  double duration = 90.0;
  std::vector<std::string> home_lineup;  // starting eleven
  std::vector<std::string> away_lineup;
  std::vector<PmEvent> events;
};

// A maximal interval with an unchanged set of players on the pitch.
struct SegmentRecord {
  std::string match_id;
  double start_min = 0;
  double end_min = 0;
  std::vector<std::string> home_lineup;
  std::vector<std::string> away_lineup;
  int red_home = 0;  // cumulative at segment start
  int red_away = 0;
  int goals_home = 0;  // scored during the segment
  int goals_away = 0;
  std::string competition;
  Date match_date;
  bool neutral = false;
  int pre_segment_score_diff = 0;  // home - away at segment start
};

// Splits one match at every lineup change.  Segments partition
// [0, duration]; per-segment goals sum to the full-time score.
std::vector<SegmentRecord> build_segments(const MatchEvents& match);

struct PlayerInfo {
  Date birth_date;
};

struct PmOptions {
  Date reference_date{2024, 6, 1};  // recency anchor
  double recency_half_period = 1095.75;
  double state_downweight = 0.5;  // weight factor when |score diff| >= 2
  bool home_advantage = true;     // per competition, zero on neutral ground
  bool red_covariates = true;     // per man-deficit level, 1..3
  bool age_covariates = true;     // shared linear + quadratic in (age-27)
  bool competition_adjust = true; // offsets relative to the first competition
  bool teammate_prior = true;     // two-pass shrink toward common teammates
  int teammate_min_segments = 10;
  double covariate_ridge = 1e-8;  // keeps adjustment columns solvable
};

struct PMRatingModel {
  std::map<std::string, double> player_ratings;
  std::map<std::string, double> home_advantage;     // per competition
  std::map<std::string, double> competition_adjust; // per competition (0 for baseline)
  std::array<double, 2> age_coeffs{};               // (age-27)/10 linear, squared
  std::array<double, 3> red_coeffs{};               // man-deficit levels 1..3
  double ridge_strength = 0;
};

// Weighted ridge regression of segment goal difference (home perspective) on
// signed on-pitch player indicators, scaled by 11/players when a side is
// shorthanded, plus the adjustment covariates enabled in `opts`.  Segment
// weight = recency * duration/90 * game-state factor.  Only player
// coefficients carry `ridge_strength`.
PMRatingModel fit_pm_ratings(const std::vector<SegmentRecord>& segments,
                             const std::map<std::string, PlayerInfo>& players,
                             double ridge_strength, const PmOptions& opts = {});

struct TeamPMSummary {
  std::string team;
  double ave_pm = 0;
};

// Arithmetic mean of the squad's ratings; every player must be rated.
TeamPMSummary team_ave_pm(const PMRatingModel& model, const std::string& team,
                          const std::vector<std::string>& squad);

// lineups.csv: match_id,date,competition,home_team,away_team,neutral,duration,
//              side,player,birth_date   (one row per player; side is
//              home/away for starters, home_bench/away_bench for substitutes)
// events.csv:  match_id,minute,event_type,player,side
std::vector<MatchEvents> load_pm_matches(const std::string& lineups_path,
                                         const std::string& events_path,
                                         std::map<std::string, PlayerInfo>* players);

// squads.csv: team,player
std::map<std::string, std::vector<std::string>> load_squads(const std::string& path);

}  // namespace euro
