#pragma once

#include <string>
#include <vector>

#include "euro/types.hpp"

namespace euro {

// matches.csv: date,home,away,goals_home,goals_away,country,neutral,match_type
std::vector<MatchRecord> load_matches(const std::string& path);
void write_matches(const std::string& path, const std::vector<MatchRecord>& matches);

// features.csv: year,team,gdp_log,market_value_log,fifa_rank,uefa_points,
//               cl_players,hist_ability,logability,ave_pm
std::vector<TeamFeatureVector> load_features(const std::string& path);
void write_features(const std::string& path, const std::vector<TeamFeatureVector>& features);

// Two rows per match: each team's 90-minute goals as response and the
// component-wise covariate difference from that team's perspective.  Rows
// 2k and 2k+1 belong to match k and carry exactly negated diff vectors.
// Feature vectors are looked up by (team, year of the match date's year)
// via the `year` argument: all matches passed in belong to one tournament
// edition identified by `tournament_year`.
std::vector<FeatureDiffRow> build_diff_rows(const std::vector<MatchRecord>& matches,
                                            const std::vector<TeamFeatureVector>& features,
                                            int tournament_year);

// dataset.csv: goals,team,opponent,<8 feature diff columns>
void write_diff_rows(const std::string& path, const std::vector<FeatureDiffRow>& rows);
std::vector<FeatureDiffRow> load_diff_rows(const std::string& path);

}  // namespace euro
