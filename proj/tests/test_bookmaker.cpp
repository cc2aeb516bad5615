#include <doctest.h>

#include <cmath>

#include "euro/bookmaker.hpp"
#include "euro/errors.hpp"
#include "test_util.hpp"

using namespace euro;
using testutil::TempFile;

namespace {

std::array<std::vector<std::string>, 6> synthetic_groups() {
  std::array<std::vector<std::string>, 6> groups;
  int t = 0;
  for (auto& g : groups) {
    for (int i = 0; i < 4; ++i) g.push_back("T" + std::to_string(t++));
  }
  return groups;
}

// A sheet built from fair probabilities and a known margin, so the margin
// solver has an exact answer to recover.
OddsSheet sheet_from_probs(const std::vector<double>& probs, double delta,
                           const std::string& name = "bk") {
  OddsSheet s;
  s.bookmaker = name;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double fair = (1.0 - probs[i]) / probs[i];  // net odds: 1/(fair+1) = p
    s.entries["T" + std::to_string(i)] = fair * delta + 1.0;
  }
  return s;
}

}  // namespace

TEST_CASE("clean_odds inverts the margin") {
  CHECK(clean_odds(3.0, 0.8) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(clean_odds(1.5, 0.5) == 1.0);
  CHECK_THROWS_AS(clean_odds(1.0, 0.8), DataError);
  CHECK_THROWS_AS(clean_odds(2.0, 0.0), DataError);
  CHECK_THROWS_AS(clean_odds(2.0, 1.0), DataError);
}

TEST_CASE("solve_overround recovers a planted margin") {
  for (double delta : {0.6, 0.8, 0.95}) {
    OddsSheet s = sheet_from_probs({0.4, 0.3, 0.2, 0.1}, delta);
    CHECK(solve_overround(s) == doctest::Approx(delta).epsilon(1e-9));
  }
}

TEST_CASE("solve_overround makes the cleaned book fair") {
  OddsSheet s;
  s.bookmaker = "bk";
  s.entries = {{"A", 2.1}, {"B", 3.4}, {"C", 4.2}, {"D", 9.0}};
  double delta = solve_overround(s);
  CHECK(delta > 0.0);
  CHECK(delta < 1.0);
  double book = 0.0;
  for (const auto& [team, quoted] : s.entries) book += 1.0 / (clean_odds(quoted, delta) + 1.0);
  CHECK(book == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve_overround rejects degenerate sheets") {
  CHECK_THROWS_AS(solve_overround(OddsSheet{}), DataError);
  OddsSheet fair;  // implied probabilities already sum below 1: no margin
  fair.bookmaker = "bk";
  fair.entries = {{"A", 3.0}, {"B", 3.0}};
  CHECK_THROWS_AS(solve_overround(fair), DataError);
  OddsSheet bad;
  bad.bookmaker = "bk";
  bad.entries = {{"A", 0.9}, {"B", 1.5}};
  CHECK_THROWS_AS(solve_overround(bad), DataError);
}

TEST_CASE("median_overround over sheets") {
  std::vector<OddsSheet> sheets = {sheet_from_probs({0.5, 0.3, 0.2}, 0.7, "a"),
                                   sheet_from_probs({0.5, 0.3, 0.2}, 0.8, "b"),
                                   sheet_from_probs({0.5, 0.3, 0.2}, 0.9, "c")};
  CHECK(median_overround(sheets) == doctest::Approx(0.8).epsilon(1e-8));
  sheets.push_back(sheet_from_probs({0.5, 0.3, 0.2}, 0.95, "d"));
  CHECK(median_overround(sheets) == doctest::Approx(0.85).epsilon(1e-8));
  CHECK_THROWS_AS(median_overround({}), DataError);
}

TEST_CASE("consensus_log_odds averages per-team log cleaned odds") {
  OddsSheet a;
  a.bookmaker = "a";
  a.entries = {{"X", 3.0}, {"Y", 5.0}};
  OddsSheet b;
  b.bookmaker = "b";
  b.entries = {{"X", 4.0}};  // Y quoted by one sheet only
  double delta = 0.85;
  auto l = consensus_log_odds({a, b}, delta);
  CHECK(l.at("X") == doctest::Approx(0.5 * (std::log(clean_odds(3.0, delta)) +
                                            std::log(clean_odds(4.0, delta))))
                         .epsilon(1e-14));
  CHECK(l.at("Y") == doctest::Approx(std::log(clean_odds(5.0, delta))).epsilon(1e-14));
}

TEST_CASE("win_probability is the inverse logit of the log odds") {
  CHECK(win_probability(0.0) == 0.5);
  for (double p : {0.05, 0.2, 0.5, 0.9}) {
    double l = std::log((1.0 - p) / p);
    CHECK(win_probability(l) == doctest::Approx(p).epsilon(1e-14));
  }
  // Longer odds, smaller probability.
  CHECK(win_probability(3.0) < win_probability(2.0));
}

TEST_CASE("inverse fit on uniform targets keeps abilities near zero") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  std::map<std::string, double> probs;
  for (const auto& t : cfg.all_teams()) probs[t] = 1.0 / 24.0;

  ConsensusFitOptions opts;
  opts.sims_per_iter = 20000;
  opts.verify_sims = 50000;
  ConsensusAbilities fit = fit_consensus_abilities(probs, cfg, 777, opts);

  REQUIRE(!fit.loss_trace.empty());
  CHECK(fit.loss_trace.back() < opts.target_rmse);
  double sum = 0.0;
  for (const auto& [team, a] : fit.logability) {
    CHECK(std::abs(a) < 0.06);
    sum += a;
  }
  CHECK(std::abs(sum) < 1e-12 * 24);
  CHECK(fit.win_prob.at("T0") == 1.0 / 24.0);
  CHECK(fit.log_odds.at("T0") == doctest::Approx(std::log(23.0)).epsilon(1e-12));
}

TEST_CASE("inverse fit validates its probability targets") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  std::map<std::string, double> probs;
  for (const auto& t : cfg.all_teams()) probs[t] = 1.0 / 24.0;
  SUBCASE("missing team") {
    probs.erase("T5");
    CHECK_THROWS_WITH_AS(fit_consensus_abilities(probs, cfg, 1), doctest::Contains("T5"),
                         DataError);
  }
  SUBCASE("probability at the boundary") {
    probs["T5"] = 1.0;
    CHECK_THROWS_AS(fit_consensus_abilities(probs, cfg, 1), DataError);
  }
}

TEST_CASE("load_odds groups rows into sheets in first-appearance order") {
  TempFile f("odds.csv",
             "bookmaker,team,quoted_odds\n"
             "beta,France,5.5\n"
             "alpha,France,6.0\n"
             "beta,Spain,7.0\n");
  auto sheets = load_odds(f.path);
  REQUIRE(sheets.size() == 2);
  CHECK(sheets[0].bookmaker == "beta");  // not alphabetical
  CHECK(sheets[0].entries.at("France") == 5.5);
  CHECK(sheets[0].entries.at("Spain") == 7.0);
  CHECK(sheets[1].bookmaker == "alpha");
  CHECK(sheets[1].entries.size() == 1);
}

TEST_CASE("load_odds rejects bad rows") {
  SUBCASE("duplicate quote") {
    TempFile f("odds_dup.csv",
               "bookmaker,team,quoted_odds\nbk,France,5.5\nbk,France,6.0\n");
    CHECK_THROWS_WITH_AS(load_odds(f.path), doctest::Contains("row 3"), DataError);
  }
  SUBCASE("odds at or below 1") {
    TempFile f("odds_low.csv", "bookmaker,team,quoted_odds\nbk,France,1.0\n");
    CHECK_THROWS_AS(load_odds(f.path), DataError);
  }
  SUBCASE("unparsable odds") {
    TempFile f("odds_bad.csv", "bookmaker,team,quoted_odds\nbk,France,tall\n");
    CHECK_THROWS_WITH_AS(load_odds(f.path), doctest::Contains("row 2"), DataError);
  }
}
