#include "euro/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "euro/csv.hpp"
#include "euro/errors.hpp"

namespace euro {

namespace {

int parse_nonneg_goals(const std::string& s, std::size_t row, const char* col) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (v < 0) {
      throw DataError("row " + std::to_string(row) + ": negative " + col + " '" + s + "'");
    }
    return v;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    throw DataError("row " + std::to_string(row) + ": malformed " + col + " '" + s + "'");
  }
}

double parse_real(const std::string& s, std::size_t row, const std::string& col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("row " + std::to_string(row) + ": malformed " + col + " '" + s + "'");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string> kMatchHeader = {
    "date", "home", "away", "goals_home", "goals_away", "country", "neutral", "match_type"};

}  // namespace

std::vector<MatchRecord> load_matches(const std::string& path) {
  CsvTable table = read_csv(path);
  require_header(table, kMatchHeader, path);
  std::vector<MatchRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t row = i + 2;  // 1-based, counting the header line
    if (r.size() != kMatchHeader.size()) {
      throw DataError(path + ": row " + std::to_string(row) + ": expected " +
                      std::to_string(kMatchHeader.size()) + " fields, got " +
                      std::to_string(r.size()));
    }
    MatchRecord m;
    try {
      m.date = Date::parse(r[0]);
      m.home_team = r[1];
      m.away_team = r[2];
      m.goals_home = parse_nonneg_goals(r[3], row, "goals_home");
      m.goals_away = parse_nonneg_goals(r[4], row, "goals_away");
      m.venue_country = r[5];
      if (r[6] == "yes") m.neutral = true;
      else if (r[6] == "no") m.neutral = false;
      else throw DataError("neutral must be yes/no, got '" + r[6] + "'");
      m.type = parse_match_type(r[7]);
    } catch (const DataError& e) {
      throw DataError(path + ": row " + std::to_string(row) + ": " + e.what());
    }
    out.push_back(std::move(m));
  }
  return out;
}

void write_matches(const std::string& path, const std::vector<MatchRecord>& matches) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "date,home,away,goals_home,goals_away,country,neutral,match_type\n";
  for (const auto& m : matches) {
    out << m.date.to_string() << ',' << m.home_team << ',' << m.away_team << ','
        << m.goals_home << ',' << m.goals_away << ',' << m.venue_country << ','
        << (m.neutral ? "yes" : "no") << ',' << match_type_name(m.type) << '\n';
  }
}

std::vector<TeamFeatureVector> load_features(const std::string& path) {
  CsvTable table = read_csv(path);
  std::vector<std::string> header = {"year", "team"};
  for (const char* name : kFeatureNames) header.emplace_back(name);
  require_header(table, header, path);
  std::vector<TeamFeatureVector> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t row = i + 2;
    if (r.size() != header.size()) {
      throw DataError(path + ": row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(r.size()));
    }
    TeamFeatureVector f;
    try {
      f.tournament_year = static_cast<int>(parse_real(r[0], row, "year"));
      f.team = r[1];
      for (int k = 0; k < kNumFeatures; ++k) {
        f.values[k] = parse_real(r[2 + k], row, kFeatureNames[k]);
      }
      if (f.fifa_rank() < 1) throw DataError("fifa_rank must be >= 1");
      if (f.cl_players() < 0) throw DataError("cl_players must be >= 0");
    } catch (const DataError& e) {
      throw DataError(path + ": row " + std::to_string(row) + ": " + e.what());
    }
    out.push_back(std::move(f));
  }
  return out;
}

void write_features(const std::string& path, const std::vector<TeamFeatureVector>& features) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "year,team";
  for (const char* name : kFeatureNames) out << ',' << name;
  out << '\n';
  for (const auto& f : features) {
    out << f.tournament_year << ',' << f.team;
    for (double v : f.values) out << ',' << fmt(v);
    out << '\n';
  }
}

std::vector<FeatureDiffRow> build_diff_rows(const std::vector<MatchRecord>& matches,
                                            const std::vector<TeamFeatureVector>& features,
                                            int tournament_year) {
  std::map<std::string, const TeamFeatureVector*> by_team;
  for (const auto& f : features) {
    if (f.tournament_year == tournament_year) by_team[f.team] = &f;
  }
  auto lookup = [&](const std::string& team) -> const TeamFeatureVector& {
    auto it = by_team.find(team);
    if (it == by_team.end()) {
      throw DataError("no feature vector for team '" + team + "' in year " +
                      std::to_string(tournament_year));
    }
    return *it->second;
  };
  std::vector<FeatureDiffRow> rows;
  rows.reserve(2 * matches.size());
  for (const auto& m : matches) {
    const auto& fh = lookup(m.home_team);
    const auto& fa = lookup(m.away_team);
    FeatureDiffRow home, away;
    home.goals = m.goals_home;
    home.team = m.home_team;
    home.opponent = m.away_team;
    away.goals = m.goals_away;
    away.team = m.away_team;
    away.opponent = m.home_team;
    for (int k = 0; k < kNumFeatures; ++k) {
      home.diff[k] = fh.values[k] - fa.values[k];
      away.diff[k] = -home.diff[k];  // exact negation, not recomputed
    }
    rows.push_back(std::move(home));
    rows.push_back(std::move(away));
  }
  return rows;
}

void write_diff_rows(const std::string& path, const std::vector<FeatureDiffRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "goals,team,opponent";
  for (const char* name : kFeatureNames) out << ',' << name;
  out << '\n';
  for (const auto& r : rows) {
    out << r.goals << ',' << r.team << ',' << r.opponent;
    for (double v : r.diff) out << ',' << fmt(v);
    out << '\n';
  }
}

std::vector<FeatureDiffRow> load_diff_rows(const std::string& path) {
  CsvTable table = read_csv(path);
  std::vector<std::string> header = {"goals", "team", "opponent"};
  for (const char* name : kFeatureNames) header.emplace_back(name);
  require_header(table, header, path);
  std::vector<FeatureDiffRow> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t row = i + 2;
    if (r.size() != header.size()) {
      throw DataError(path + ": row " + std::to_string(row) + ": wrong field count");
    }
    FeatureDiffRow d;
    d.goals = parse_nonneg_goals(r[0], row, "goals");
    d.team = r[1];
    d.opponent = r[2];
    for (int k = 0; k < kNumFeatures; ++k) {
      d.diff[k] = parse_real(r[3 + k], row, kFeatureNames[k]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace euro
