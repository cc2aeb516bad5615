#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "euro/errors.hpp"
#include "euro/tournament.hpp"

using namespace euro;

namespace {

std::array<std::vector<std::string>, 6> synthetic_groups() {
  std::array<std::vector<std::string>, 6> groups;
  int t = 0;
  for (auto& g : groups) {
    for (int i = 0; i < 4; ++i) g.push_back("T" + std::to_string(t++));
  }
  return groups;
}

}  // namespace

TEST_CASE("standard bracket validates") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  CHECK(cfg.year == 2024);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.all_teams().size() == 24);
  CHECK(cfg.thirds.size() == 15);
  CHECK(cfg.team_group("T0") == 0);
  CHECK(cfg.team_group("T23") == 5);
  CHECK(cfg.team_group("nobody") == -1);
}

TEST_CASE("validate rejects broken configurations") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  SUBCASE("duplicate team") {
    cfg.groups[0][0] = cfg.groups[5][3];
    CHECK_THROWS_AS(cfg.validate(), DataError);
  }
  SUBCASE("missing third-place combination") {
    cfg.thirds.erase("ABCD");
    CHECK_THROWS_AS(cfg.validate(), DataError);
  }
  SUBCASE("slot used twice") {
    cfg.r16[0].first = cfg.r16[1].first;
    CHECK_THROWS_AS(cfg.validate(), DataError);
  }
  SUBCASE("third-place row assigning a foreign group") {
    cfg.thirds["ABCD"] = {0, 1, 2, 4};  // E not in the combination
    CHECK_THROWS_AS(cfg.validate(), DataError);
  }
}

TEST_CASE("no runner-up meets its own group winner in the round of 16") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  for (const auto& [a, b] : cfg.r16) {
    if (a.rank <= 2 && b.rank <= 2) CHECK(a.group != b.group);
  }
}

TEST_CASE("third-place slots never face their own group winner") {
  TournamentConfig cfg = standard_bracket(2024, synthetic_groups());
  // The winner group facing each third-place slot, from the bracket.
  std::array<int, 4> facing{};
  for (const auto& [a, b] : cfg.r16) {
    if (b.rank == 3) facing[b.group] = a.group;
    if (a.rank == 3) facing[a.group] = b.group;
  }
  for (const auto& [combo, slots] : cfg.thirds) {
    for (int s = 0; s < 4; ++s) CHECK(slots[s] != facing[s]);
  }
}

TEST_CASE("config file loads and matches the standard bracket") {
  TournamentConfig cfg = load_tournament_config(EURO_SOURCE_DIR "/data/euro2024.cfg");
  CHECK(cfg.year == 2024);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.groups[0][0] == "Germany");
  CHECK(cfg.groups[5][3] == "Czechia");

  TournamentConfig ref = standard_bracket(2024, cfg.groups);
  for (int m = 0; m < 8; ++m) {
    CHECK(cfg.r16[m].first.rank == ref.r16[m].first.rank);
    CHECK(cfg.r16[m].first.group == ref.r16[m].first.group);
    CHECK(cfg.r16[m].second.rank == ref.r16[m].second.rank);
    CHECK(cfg.r16[m].second.group == ref.r16[m].second.group);
  }
  CHECK(cfg.thirds == ref.thirds);
}

TEST_CASE("config parser rejects malformed input") {
  auto parse_string = [](const std::string& text) {
    std::string path = "tmp_cfg.cfg";
    {
      std::ofstream out(path);
      out << text;
    }
    TournamentConfig cfg;
    try {
      cfg = load_tournament_config(path);
    } catch (...) {
      std::remove(path.c_str());
      throw;
    }
    std::remove(path.c_str());
    return cfg;
  };
  CHECK_THROWS_AS(parse_string("year = 2024\n[groups]\nZ = a,b,c,d\n"), DataError);
  CHECK_THROWS_AS(parse_string("gibberish\n"), DataError);
  CHECK_THROWS_AS(parse_string("year = 2024\n[r16]\nm1 = 1A\n"), DataError);
  CHECK_THROWS_AS(parse_string("year = 2024\n[r16]\nm1 = 9Z, 1A\n"), DataError);
}
