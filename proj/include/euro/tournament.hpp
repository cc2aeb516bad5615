#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace euro {

// One side of a round-of-16 tie, before group results are known.
//   rank 1 or 2: the group winner / runner-up of `group` (0 = A .. 5 = F).
//   rank 3:      a qualified third-placed team; `group` is then the index of
//                the third-place slot (0..3) resolved via the combination table.
struct SlotRef {
  int rank = 1;
  int group = 0;
};

// Groups plus the knockout entry mapping of a 24-team, 6-group edition.
// After the round of 16, the bracket is a fixed single-elimination tree over
// the eight ties in listed order: QF1 = W(m3) v W(m1), QF2 = W(m5) v W(m6),
// QF3 = W(m7) v W(m8), QF4 = W(m4) v W(m2); SF1 = W(QF1) v W(QF2),
// SF2 = W(QF3) v W(QF4).
struct TournamentConfig {
  int year = 0;
  std::array<std::vector<std::string>, 6> groups;
  std::array<std::pair<SlotRef, SlotRef>, 8> r16;
  // Key: the four qualified third-place groups as a sorted letter string
  // ("ABCD"); value: group index feeding third-place slots T1..T4.
  std::map<std::string, std::array<int, 4>> thirds;

  std::vector<std::string> all_teams() const;
  int team_group(const std::string& team) const;  // -1 when absent
  void validate() const;                          // throws DataError
};

TournamentConfig load_tournament_config(const std::string& path);

// The standard 24-team bracket (round-of-16 slots and the official 15-row
// third-place combination table) around caller-provided groups.
TournamentConfig standard_bracket(int year,
                                  const std::array<std::vector<std::string>, 6>& groups);

}  // namespace euro
