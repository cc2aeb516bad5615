#include <doctest.h>

#include <cmath>

#include "euro/dataset.hpp"
#include "euro/errors.hpp"
#include "test_util.hpp"

using namespace euro;
using testutil::TempFile;

namespace {

const char* kMatchHeader = "date,home,away,goals_home,goals_away,country,neutral,match_type\n";

TeamFeatureVector make_features(const std::string& team, int year, double base) {
  TeamFeatureVector f;
  f.team = team;
  f.tournament_year = year;
  for (int k = 0; k < kNumFeatures; ++k) f.values[k] = base + 0.1 * k;
  f.values[2] = std::max(1.0, std::abs(base) * 10 + 1);  // fifa_rank >= 1
  f.values[4] = std::abs(base);                          // cl_players >= 0
  return f;
}

}  // namespace

TEST_CASE("load_matches parses a well-formed row") {
  TempFile f("matches_ok.csv",
             std::string(kMatchHeader) + "2021-06-02,England,Austria,1,0,England,no,friendly\n");
  auto matches = load_matches(f.path);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].date == Date{2021, 6, 2});
  CHECK(matches[0].home_team == "England");
  CHECK(matches[0].away_team == "Austria");
  CHECK(matches[0].goals_home == 1);
  CHECK(matches[0].goals_away == 0);
  CHECK(matches[0].neutral == false);
  CHECK(matches[0].type == MatchType::friendly_other);
}

TEST_CASE("load_matches: empty file with valid header gives an empty list") {
  TempFile f("matches_empty.csv", kMatchHeader);
  CHECK(load_matches(f.path).empty());
}

TEST_CASE("load_matches rejects bad rows with a row-indexed error") {
  SUBCASE("negative goals") {
    TempFile f("matches_neg.csv",
               std::string(kMatchHeader) + "2021-06-02,A,B,-1,0,A,no,friendly\n");
    CHECK_THROWS_WITH_AS(load_matches(f.path), doctest::Contains("row 2"), DataError);
  }
  SUBCASE("malformed date") {
    TempFile f("matches_date.csv",
               std::string(kMatchHeader) + "2021-6-2,A,B,1,0,A,no,friendly\n");
    CHECK_THROWS_WITH_AS(load_matches(f.path), doctest::Contains("row 2"), DataError);
  }
  SUBCASE("unknown match type") {
    TempFile f("matches_type.csv",
               std::string(kMatchHeader) + "2021-06-02,A,B,1,0,A,no,derby\n");
    CHECK_THROWS_WITH_AS(load_matches(f.path), doctest::Contains("row 2"), DataError);
  }
  SUBCASE("bad neutral flag") {
    TempFile f("matches_neutral.csv",
               std::string(kMatchHeader) + "2021-06-02,A,B,1,0,A,maybe,friendly\n");
    CHECK_THROWS_AS(load_matches(f.path), DataError);
  }
  SUBCASE("wrong header") {
    TempFile f("matches_hdr.csv", "a,b\n");
    CHECK_THROWS_AS(load_matches(f.path), DataError);
  }
}

TEST_CASE("build_diff_rows: two rows per match, exact negation") {
  std::vector<TeamFeatureVector> features;
  std::vector<MatchRecord> matches;
  for (int t = 0; t < 6; ++t) {
    features.push_back(make_features("T" + std::to_string(t), 2024, 0.37 * t - 1.1));
  }
  for (int m = 0; m < 5; ++m) {
    MatchRecord rec;
    rec.date = Date{2024, 6, 15};
    rec.home_team = "T" + std::to_string(m);
    rec.away_team = "T" + std::to_string(m + 1);
    rec.goals_home = m;
    rec.goals_away = 5 - m;
    matches.push_back(rec);
  }

  auto rows = build_diff_rows(matches, features, 2024);
  REQUIRE(rows.size() == 2 * matches.size());
  for (std::size_t m = 0; m < matches.size(); ++m) {
    const auto& home = rows[2 * m];
    const auto& away = rows[2 * m + 1];
    CHECK(home.team == matches[m].home_team);
    CHECK(home.opponent == matches[m].away_team);
    CHECK(home.goals == matches[m].goals_home);
    CHECK(away.goals == matches[m].goals_away);
    for (int k = 0; k < kNumFeatures; ++k) {
      CHECK(home.diff[k] + away.diff[k] == 0.0);  // exact, not approximate
    }
  }
}

TEST_CASE("build_diff_rows recomputes the differences from the feature table") {
  std::vector<TeamFeatureVector> features = {make_features("A", 2024, 0.3),
                                             make_features("B", 2024, -0.8)};
  MatchRecord rec;
  rec.date = Date{2024, 6, 1};
  rec.home_team = "A";
  rec.away_team = "B";
  auto rows = build_diff_rows({rec}, features, 2024);
  for (int k = 0; k < kNumFeatures; ++k) {
    CHECK(rows[0].diff[k] == features[0].values[k] - features[1].values[k]);
  }
}

TEST_CASE("build_diff_rows: identical feature vectors give an all-zero diff") {
  auto fa = make_features("A", 2024, 0.5);
  auto fb = fa;
  fb.team = "B";
  MatchRecord rec;
  rec.date = Date{2024, 6, 1};
  rec.home_team = "A";
  rec.away_team = "B";
  auto rows = build_diff_rows({rec}, {fa, fb}, 2024);
  for (int k = 0; k < kNumFeatures; ++k) CHECK(rows[0].diff[k] == 0.0);
}

TEST_CASE("build_diff_rows names the missing team and year") {
  MatchRecord rec;
  rec.date = Date{2024, 6, 1};
  rec.home_team = "A";
  rec.away_team = "Ghost";
  CHECK_THROWS_WITH_AS(build_diff_rows({rec}, {make_features("A", 2024, 0.0)}, 2024),
                       doctest::Contains("Ghost"), DataError);
}

TEST_CASE("datasets round-trip bit-identically") {
  std::vector<TeamFeatureVector> features;
  for (int t = 0; t < 4; ++t) {
    features.push_back(make_features("T" + std::to_string(t), 2024, 0.123456789 * (t + 1)));
  }
  std::vector<MatchRecord> matches;
  for (int m = 0; m < 3; ++m) {
    MatchRecord rec;
    rec.date = Date{2024, 6, 14 + m};
    rec.home_team = "T" + std::to_string(m);
    rec.away_team = "T" + std::to_string(m + 1);
    rec.goals_home = m;
    rec.goals_away = m + 1;
    rec.venue_country = "X";
    rec.neutral = m % 2 == 0;
    rec.type = static_cast<MatchType>(m % 4);
    matches.push_back(rec);
  }
  auto rows = build_diff_rows(matches, features, 2024);

  TempFile fm("rt_matches.csv", "");
  TempFile ff("rt_features.csv", "");
  TempFile fd("rt_diff.csv", "");
  write_matches(fm.path, matches);
  write_features(ff.path, features);
  write_diff_rows(fd.path, rows);

  // Reload and rewrite: the second file must be byte-identical.
  TempFile fm2("rt_matches2.csv", "");
  TempFile ff2("rt_features2.csv", "");
  TempFile fd2("rt_diff2.csv", "");
  write_matches(fm2.path, load_matches(fm.path));
  write_features(ff2.path, load_features(ff.path));
  write_diff_rows(fd2.path, load_diff_rows(fd.path));
  CHECK(testutil::slurp(fm.path) == testutil::slurp(fm2.path));
  CHECK(testutil::slurp(ff.path) == testutil::slurp(ff2.path));
  CHECK(testutil::slurp(fd.path) == testutil::slurp(fd2.path));

  // And the reloaded diffs carry the exact values.
  auto reloaded = load_diff_rows(fd.path);
  REQUIRE(reloaded.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(reloaded[i].goals == rows[i].goals);
    for (int k = 0; k < kNumFeatures; ++k) CHECK(reloaded[i].diff[k] == rows[i].diff[k]);
  }
}

TEST_CASE("load_features validates rank and squad count invariants") {
  std::string header = "year,team,gdp_log,market_value_log,fifa_rank,uefa_points,cl_players,"
                       "hist_ability,logability,ave_pm\n";
  SUBCASE("fifa_rank below 1") {
    TempFile f("feat_rank.csv", header + "2024,A,1,1,0,1,1,0,0,0\n");
    CHECK_THROWS_WITH_AS(load_features(f.path), doctest::Contains("fifa_rank"), DataError);
  }
  SUBCASE("negative cl_players") {
    TempFile f("feat_cl.csv", header + "2024,A,1,1,3,1,-1,0,0,0\n");
    CHECK_THROWS_WITH_AS(load_features(f.path), doctest::Contains("cl_players"), DataError);
  }
}
