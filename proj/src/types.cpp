#include "euro/types.hpp"

#include <charconv>
#include <cstdio>

#include "euro/errors.hpp"

namespace euro {

MatchType parse_match_type(const std::string& token) {
  if (token == "world_cup") return MatchType::world_cup;
  if (token == "confederation_tournament") return MatchType::confederation_tournament;
  if (token == "qualifier") return MatchType::qualifier;
  if (token == "friendly" || token == "friendly_other") return MatchType::friendly_other;
  throw DataError("unknown match_type: '" + token + "'");
}

std::string match_type_name(MatchType t) {
  switch (t) {
    case MatchType::world_cup: return "world_cup";
    case MatchType::confederation_tournament: return "confederation_tournament";
    case MatchType::qualifier: return "qualifier";
    case MatchType::friendly_other: return "friendly";
  }
  return "?";
}

namespace {
bool parse_int(const std::string& s, std::size_t from, std::size_t len, int& out) {
  auto* begin = s.data() + from;
  auto [ptr, ec] = std::from_chars(begin, begin + len, out);
  return ec == std::errc{} && ptr == begin + len;
}
}  // namespace

Date Date::parse(const std::string& iso) {
  Date d;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      !parse_int(iso, 0, 4, d.year) || !parse_int(iso, 5, 2, d.month) ||
      !parse_int(iso, 8, 2, d.day)) {
    throw DataError("malformed date (expected YYYY-MM-DD): '" + iso + "'");
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
    throw DataError("date out of range: '" + iso + "'");
  }
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

// days_from_civil (Howard Hinnant's algorithm).
std::int64_t Date::serial() const {
  std::int64_t y = year;
  unsigned m = static_cast<unsigned>(month);
  unsigned d = static_cast<unsigned>(day);
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace euro
