#include "euro/tournament.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "euro/errors.hpp"

namespace euro {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

SlotRef parse_slot(const std::string& token, const std::string& path) {
  if (token.size() == 2 && (token[0] == '1' || token[0] == '2') &&
      token[1] >= 'A' && token[1] <= 'F') {
    return SlotRef{token[0] - '0', token[1] - 'A'};
  }
  if (token.size() == 2 && token[0] == 'T' && token[1] >= '1' && token[1] <= '4') {
    return SlotRef{3, token[1] - '1'};
  }
  throw DataError(path + ": bad round-of-16 slot '" + token +
                  "' (expected 1A..2F or T1..T4)");
}

// Third-place slots T1..T4 face 1B, 1C, 1F, 1E respectively; each table row
// maps a qualified combination to the groups feeding those slots.
constexpr struct {
  const char* combo;
  const char* slots;  // groups for T1..T4
} kThirdTable[] = {
    {"ABCD", "ADCB"}, {"ABCE", "AECB"}, {"ABCF", "AFCB"}, {"ABDE", "DEBA"},
    {"ABDF", "DFBA"}, {"ABEF", "EFAB"}, {"ACDE", "EDAC"}, {"ACDF", "FDAC"},
    {"ACEF", "EFAC"}, {"ADEF", "EFAD"}, {"BCDE", "EDCB"}, {"BCDF", "FDBC"},
    {"BCEF", "EFBC"}, {"BDEF", "EFBD"}, {"CDEF", "FECD"},
};

}  // namespace

std::vector<std::string> TournamentConfig::all_teams() const {
  std::vector<std::string> out;
  for (const auto& g : groups)
    for (const auto& t : g) out.push_back(t);
  return out;
}

int TournamentConfig::team_group(const std::string& team) const {
  for (int g = 0; g < 6; ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), team) != groups[g].end()) return g;
  }
  return -1;
}

void TournamentConfig::validate() const {
  std::set<std::string> seen;
  for (int g = 0; g < 6; ++g) {
    if (groups[g].size() != 4) {
      throw DataError("group " + std::string(1, char('A' + g)) + " must have 4 teams, has " +
                      std::to_string(groups[g].size()));
    }
    for (const auto& t : groups[g]) {
      if (!seen.insert(t).second) throw DataError("team '" + t + "' appears twice");
    }
  }
  if (seen.size() != 24) throw DataError("expected 24 distinct teams");

  // Each group rank 1/2 must feed exactly one tie, and each T-slot one tie.
  std::set<std::pair<int, int>> used;
  for (const auto& [a, b] : r16) {
    for (const SlotRef& s : {a, b}) {
      if (!used.insert({s.rank, s.group}).second) {
        throw DataError("round-of-16 slot referenced twice");
      }
    }
  }
  for (int g = 0; g < 6; ++g) {
    if (!used.count({1, g}) || !used.count({2, g})) {
      throw DataError("round of 16 must place winner and runner-up of every group");
    }
  }
  for (int s = 0; s < 4; ++s) {
    if (!used.count({3, s})) throw DataError("round of 16 must place all four third-place slots");
  }

  if (thirds.size() != 15) {
    throw DataError("third-place table must cover all 15 combinations, has " +
                    std::to_string(thirds.size()));
  }
  for (const auto& [combo, slots] : thirds) {
    if (combo.size() != 4) throw DataError("bad third-place combination '" + combo + "'");
    std::set<int> combo_groups, slot_groups;
    for (char c : combo) {
      if (c < 'A' || c > 'F') throw DataError("bad third-place combination '" + combo + "'");
      combo_groups.insert(c - 'A');
    }
    for (int g : slots) slot_groups.insert(g);
    if (combo_groups != slot_groups) {
      throw DataError("third-place row '" + combo + "' does not assign exactly its own groups");
    }
  }
}

TournamentConfig load_tournament_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  TournamentConfig cfg;
  std::string line, section;
  std::set<int> r16_seen;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(path + ": expected 'key = value': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty() && key == "year") {
      cfg.year = std::stoi(value);
    } else if (section == "groups") {
      if (key.size() != 1 || key[0] < 'A' || key[0] > 'F') {
        throw DataError(path + ": group key must be A..F, got '" + key + "'");
      }
      cfg.groups[key[0] - 'A'] = split_list(value);
    } else if (section == "r16") {
      if (key.size() != 2 || key[0] != 'm' || key[1] < '1' || key[1] > '8') {
        throw DataError(path + ": round-of-16 key must be m1..m8, got '" + key + "'");
      }
      auto sides = split_list(value);
      if (sides.size() != 2) throw DataError(path + ": tie '" + key + "' needs two slots");
      int idx = key[1] - '1';
      cfg.r16[idx] = {parse_slot(sides[0], path), parse_slot(sides[1], path)};
      r16_seen.insert(idx);
    } else if (section == "thirds") {
      auto slots = split_list(value);
      if (slots.size() != 4) throw DataError(path + ": third-place row '" + key + "' needs 4 groups");
      std::array<int, 4> arr{};
      for (int i = 0; i < 4; ++i) {
        if (slots[i].size() != 1 || slots[i][0] < 'A' || slots[i][0] > 'F') {
          throw DataError(path + ": bad group '" + slots[i] + "' in third-place row");
        }
        arr[i] = slots[i][0] - 'A';
      }
      std::string combo = key;
      std::sort(combo.begin(), combo.end());
      cfg.thirds[combo] = arr;
    } else {
      throw DataError(path + ": unknown section/key: " + line);
    }
  }
  if (r16_seen.size() != 8) throw DataError(path + ": need all eight round-of-16 ties");
  try {
    cfg.validate();
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  return cfg;
}

TournamentConfig standard_bracket(int year,
                                  const std::array<std::vector<std::string>, 6>& groups) {
  TournamentConfig cfg;
  cfg.year = year;
  cfg.groups = groups;
  auto gs = [](int rank, char g) { return SlotRef{rank, g - 'A'}; };
  auto ts = [](int slot) { return SlotRef{3, slot}; };
  cfg.r16 = {{
      {gs(1, 'A'), gs(2, 'C')},
      {gs(2, 'A'), gs(2, 'B')},
      {gs(1, 'B'), ts(0)},
      {gs(1, 'C'), ts(1)},
      {gs(1, 'F'), ts(2)},
      {gs(2, 'D'), gs(2, 'E')},
      {gs(1, 'E'), ts(3)},
      {gs(1, 'D'), gs(2, 'F')},
  }};
  for (const auto& row : kThirdTable) {
    std::array<int, 4> arr{};
    for (int i = 0; i < 4; ++i) arr[i] = row.slots[i] - 'A';
    cfg.thirds[row.combo] = arr;
  }
  cfg.validate();
  return cfg;
}

}  // namespace euro
