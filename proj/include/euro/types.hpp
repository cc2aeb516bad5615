#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace euro {

enum class MatchType { world_cup, confederation_tournament, qualifier, friendly_other };

MatchType parse_match_type(const std::string& token);
std::string match_type_name(MatchType t);

// Calendar date, stored with a serial day number for interval arithmetic.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static Date parse(const std::string& iso);  // "YYYY-MM-DD"
  std::string to_string() const;

  // Days since 1970-01-01 (civil calendar, Gregorian).
  std::int64_t serial() const;

  friend auto operator<=>(const Date& a, const Date& b) {
    return a.serial() <=> b.serial();
  }
  friend bool operator==(const Date& a, const Date& b) { return a.serial() == b.serial(); }
};

inline double days_between(const Date& earlier, const Date& later) {
  return static_cast<double>(later.serial() - earlier.serial());
}

// One historic international match (90-minute score).
struct MatchRecord {
  Date date;
  std::string home_team;
  std::string away_team;
  int goals_home = 0;
  int goals_away = 0;
  std::string venue_country;
  bool neutral = false;
  MatchType type = MatchType::friendly_other;
};

inline constexpr int kNumFeatures = 8;

inline constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "gdp_log",      "market_value_log", "fifa_rank", "uefa_points",
    "cl_players",   "hist_ability",     "logability", "ave_pm"};

// The eight selected covariates for one team at one tournament edition.
struct TeamFeatureVector {
  int tournament_year = 0;
  std::string team;
  std::array<double, kNumFeatures> values{};

  double gdp_log() const { return values[0]; }
  double market_value_log() const { return values[1]; }
  double fifa_rank() const { return values[2]; }
  double uefa_points() const { return values[3]; }
  double cl_players() const { return values[4]; }
  double hist_ability() const { return values[5]; }
  double logability() const { return values[6]; }
  double ave_pm() const { return values[7]; }
};

// One training observation: a team's goals against an opponent, with the
// covariate differences taken from the team's perspective.
struct FeatureDiffRow {
  int goals = 0;
  std::string team;
  std::string opponent;
  std::array<double, kNumFeatures> diff{};
};

}  // namespace euro
