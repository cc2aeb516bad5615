#include "euro/plus_minus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "euro/csv.hpp"
#include "euro/errors.hpp"

namespace euro {

namespace {

void remove_player(std::vector<std::string>& lineup, const std::string& player,
                   const std::string& where) {
  auto it = std::find(lineup.begin(), lineup.end(), player);
  if (it == lineup.end()) throw DataError(where + ": " + player + " is not on the pitch");
  lineup.erase(it);
}

}  // namespace

std::vector<SegmentRecord> build_segments(const MatchEvents& match) {
  const std::string where = "match " + match.match_id;
  if (match.duration <= 0) throw DataError(where + ": non-positive duration");
  for (const auto* lineup : {&match.home_lineup, &match.away_lineup}) {
    if (lineup->empty() || lineup->size() > 11) {
      throw DataError(where + ": starting lineup must have 1..11 players");
    }
  }

  std::vector<PmEvent> events = match.events;
  std::stable_sort(events.begin(), events.end(), [](const PmEvent& a, const PmEvent& b) {
    if (a.minute != b.minute) return a.minute < b.minute;
    return static_cast<int>(a.type) < static_cast<int>(b.type);
  });

  std::vector<std::string> home = match.home_lineup;
  std::vector<std::string> away = match.away_lineup;
  int red_home = 0, red_away = 0;
  int score_home = 0, score_away = 0;

  std::vector<SegmentRecord> segments;
  SegmentRecord seg;
  seg.match_id = match.match_id;
  seg.competition = match.competition;
  seg.match_date = match.date;
  seg.neutral = match.neutral;
  seg.start_min = 0;
  auto open_segment = [&](double start) {
    seg.start_min = start;
    seg.home_lineup = home;
    seg.away_lineup = away;
    std::sort(seg.home_lineup.begin(), seg.home_lineup.end());
    std::sort(seg.away_lineup.begin(), seg.away_lineup.end());
    seg.red_home = red_home;
    seg.red_away = red_away;
    seg.goals_home = 0;
    seg.goals_away = 0;
    seg.pre_segment_score_diff = score_home - score_away;
  };
  open_segment(0);

  auto close_segment = [&](double end) {
    if (end > seg.start_min) {
      seg.end_min = end;
      segments.push_back(seg);
    }
  };

  for (const PmEvent& e : events) {
    if (e.minute < 0 || e.minute > match.duration) {
      throw DataError(where + ": event minute " + std::to_string(e.minute) +
                      " outside [0, duration]");
    }
    auto& lineup = e.home ? home : away;
    switch (e.type) {
      case PmEventType::goal:
        (e.home ? seg.goals_home : seg.goals_away)++;
        (e.home ? score_home : score_away)++;
        break;
      case PmEventType::red_card:
        close_segment(e.minute);
        remove_player(lineup, e.player, where);
        (e.home ? red_home : red_away)++;
        open_segment(e.minute);
        break;
      case PmEventType::sub_off:
        close_segment(e.minute);
        remove_player(lineup, e.player, where);
        open_segment(e.minute);
        break;
      case PmEventType::sub_on:
        close_segment(e.minute);
        if (std::find(home.begin(), home.end(), e.player) != home.end() ||
            std::find(away.begin(), away.end(), e.player) != away.end()) {
          throw DataError(where + ": " + e.player + " is already on the pitch");
        }
        if (lineup.size() >= 11) throw DataError(where + ": substitution onto a full side");
        lineup.push_back(e.player);
        open_segment(e.minute);
        break;
    }
  }
  close_segment(match.duration);
  return segments;
}

namespace {

struct Design {
  std::vector<std::string> player_names;          // column order
  std::map<std::string, int> player_col;
  std::vector<std::string> competitions;          // sorted, first = baseline
  std::map<std::string, int> home_col;            // per competition
  std::map<std::string, int> adjust_col;          // absent for baseline
  int red_col0 = -1;
  int age_col0 = -1;
  int columns = 0;
};

Design plan_design(const std::vector<SegmentRecord>& segments, const PmOptions& opts) {
  Design d;
  std::map<std::string, int> seen_comp;
  for (const auto& s : segments) {
    for (const auto* lineup : {&s.home_lineup, &s.away_lineup}) {
      for (const auto& p : *lineup) d.player_col.emplace(p, 0);
    }
    seen_comp.emplace(s.competition, 0);
  }
  int c = 0;
  for (auto& [name, col] : d.player_col) {
    col = c++;
    d.player_names.push_back(name);
  }
  for (const auto& [comp, unused] : seen_comp) d.competitions.push_back(comp);
  if (opts.home_advantage) {
    for (const auto& comp : d.competitions) d.home_col[comp] = c++;
  }
  if (opts.competition_adjust) {
    for (std::size_t i = 1; i < d.competitions.size(); ++i) d.adjust_col[d.competitions[i]] = c++;
  }
  if (opts.red_covariates) {
    d.red_col0 = c;
    c += 3;
  }
  if (opts.age_covariates) {
    d.age_col0 = c;
    c += 2;
  }
  d.columns = c;
  return d;
}

double segment_weight(const SegmentRecord& s, const PmOptions& opts) {
  double days = std::max(0.0, days_between(s.match_date, opts.reference_date));
  double w = std::pow(0.5, days / opts.recency_half_period);
  w *= (s.end_min - s.start_min) / 90.0;
  if (std::abs(s.pre_segment_score_diff) >= 2) w *= opts.state_downweight;
  return w;
}

double age_term(const std::string& player, const std::map<std::string, PlayerInfo>& players,
                const Date& match_date) {
  auto it = players.find(player);
  if (it == players.end()) {
    throw DataError("fit_pm_ratings: no birth date for player " + player);
  }
  double age = days_between(it->second.birth_date, match_date) / 365.25;
  return (age - 27.0) / 10.0;
}

}  // namespace

PMRatingModel fit_pm_ratings(const std::vector<SegmentRecord>& segments,
                             const std::map<std::string, PlayerInfo>& players,
                             double ridge_strength, const PmOptions& opts) {
  if (segments.empty()) throw DataError("fit_pm_ratings: no segments");
  if (ridge_strength < 0) throw DataError("fit_pm_ratings: negative ridge_strength");

  Design d = plan_design(segments, opts);
  const int n = static_cast<int>(segments.size());
  const int p = d.columns;
  const int np = static_cast<int>(d.player_names.size());

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd y(n), w(n);
  for (int i = 0; i < n; ++i) {
    const SegmentRecord& s = segments[i];
    const double scale_h = 11.0 / static_cast<double>(s.home_lineup.size());
    const double scale_a = 11.0 / static_cast<double>(s.away_lineup.size());
    for (const auto& pl : s.home_lineup) X(i, d.player_col.at(pl)) += scale_h;
    for (const auto& pl : s.away_lineup) X(i, d.player_col.at(pl)) -= scale_a;
    if (opts.home_advantage && !s.neutral) X(i, d.home_col.at(s.competition)) = 1.0;
    if (opts.competition_adjust) {
      auto it = d.adjust_col.find(s.competition);
      if (it != d.adjust_col.end()) X(i, it->second) = 1.0;
    }
    if (opts.red_covariates) {
      int diff = static_cast<int>(s.home_lineup.size()) - static_cast<int>(s.away_lineup.size());
      if (diff != 0) {
        int level = std::min(std::abs(diff), 3);
        X(i, d.red_col0 + level - 1) = diff > 0 ? 1.0 : -1.0;
      }
    }
    if (opts.age_covariates) {
      double lin = 0.0, quad = 0.0;
      for (const auto& pl : s.home_lineup) {
        double a = age_term(pl, players, s.match_date);
        lin += a;
        quad += a * a;
      }
      for (const auto& pl : s.away_lineup) {
        double a = age_term(pl, players, s.match_date);
        lin -= a;
        quad -= a * a;
      }
      X(i, d.age_col0) = lin;
      X(i, d.age_col0 + 1) = quad;
    }
    y(i) = s.goals_home - s.goals_away;
    w(i) = segment_weight(s, opts);
  }

  Eigen::VectorXd penalty(p);
  for (int j = 0; j < p; ++j) penalty(j) = j < np ? ridge_strength : opts.covariate_ridge;

  Eigen::MatrixXd A = X.transpose() * w.asDiagonal() * X;
  A.diagonal() += penalty;
  Eigen::VectorXd b = X.transpose() * (w.asDiagonal() * y);

  auto solve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd beta = A.ldlt().solve(rhs);
    if (!beta.allFinite()) {
      throw NumericError("fit_pm_ratings: singular system; is ridge_strength zero with "
                         "duplicated columns?");
    }
    return beta;
  };
  Eigen::VectorXd beta = solve(b);

  if (opts.teammate_prior && np > 1) {
    // Shrink each player toward the count-weighted mean rating of teammates
    // sharing at least teammate_min_segments segments, then refit.
    std::map<std::pair<int, int>, int> shared;
    for (const auto& s : segments) {
      for (const auto* lineup : {&s.home_lineup, &s.away_lineup}) {
        for (std::size_t a = 0; a < lineup->size(); ++a) {
          for (std::size_t c2 = a + 1; c2 < lineup->size(); ++c2) {
            int i = d.player_col.at((*lineup)[a]);
            int j = d.player_col.at((*lineup)[c2]);
            shared[{std::min(i, j), std::max(i, j)}]++;
          }
        }
      }
    }
    Eigen::VectorXd target = Eigen::VectorXd::Zero(p);
    std::vector<double> weight_sum(np, 0.0), weighted(np, 0.0);
    for (const auto& [pair, count] : shared) {
      if (count < opts.teammate_min_segments) continue;
      weighted[pair.first] += count * beta(pair.second);
      weight_sum[pair.first] += count;
      weighted[pair.second] += count * beta(pair.first);
      weight_sum[pair.second] += count;
    }
    for (int j = 0; j < np; ++j) {
      if (weight_sum[j] > 0) target(j) = weighted[j] / weight_sum[j];
    }
    beta = solve(b + penalty.cwiseProduct(target));
  }

  PMRatingModel model;
  model.ridge_strength = ridge_strength;
  for (int j = 0; j < np; ++j) model.player_ratings[d.player_names[j]] = beta(j);
  for (const auto& comp : d.competitions) {
    model.home_advantage[comp] = opts.home_advantage ? beta(d.home_col.at(comp)) : 0.0;
    auto it = d.adjust_col.find(comp);
    model.competition_adjust[comp] = it != d.adjust_col.end() ? beta(it->second) : 0.0;
  }
  if (opts.red_covariates) {
    for (int l = 0; l < 3; ++l) model.red_coeffs[l] = beta(d.red_col0 + l);
  }
  if (opts.age_covariates) {
    model.age_coeffs = {beta(d.age_col0), beta(d.age_col0 + 1)};
  }
  return model;
}

TeamPMSummary team_ave_pm(const PMRatingModel& model, const std::string& team,
                          const std::vector<std::string>& squad) {
  if (squad.empty()) throw DataError("team_ave_pm: empty squad for " + team);
  double sum = 0.0;
  for (const auto& p : squad) {
    auto it = model.player_ratings.find(p);
    if (it == model.player_ratings.end()) {
      throw DataError("team_ave_pm: unrated player " + p + " in squad " + team);
    }
    sum += it->second;
  }
  return {team, sum / static_cast<double>(squad.size())};
}

std::vector<MatchEvents> load_pm_matches(const std::string& lineups_path,
                                         const std::string& events_path,
                                         std::map<std::string, PlayerInfo>* players) {
  CsvTable lineups = read_csv(lineups_path);
  require_header(lineups,
                 {"match_id", "date", "competition", "home_team", "away_team", "neutral",
                  "duration", "side", "player", "birth_date"},
                 lineups_path);
  std::map<std::string, MatchEvents> by_id;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < lineups.rows.size(); ++i) {
    const auto& row = lineups.rows[i];
    std::string where = lineups_path + " row " + std::to_string(i + 2);
    if (row.size() != 10) throw DataError(where + ": expected 10 fields");
    auto [it, inserted] = by_id.try_emplace(row[0]);
    MatchEvents& m = it->second;
    if (inserted) {
      m.match_id = row[0];
      m.date = Date::parse(row[1]);
      m.competition = row[2];
      m.home_team = row[3];
      m.away_team = row[4];
      if (row[5] != "yes" && row[5] != "no") throw DataError(where + ": neutral must be yes/no");
      m.neutral = row[5] == "yes";
      try {
        m.duration = std::stod(row[6]);
      } catch (const std::exception&) {
        throw DataError(where + ": bad duration '" + row[6] + "'");
      }
      order.push_back(row[0]);
    }
    if (row[7] == "home") m.home_lineup.push_back(row[8]);
    else if (row[7] == "away") m.away_lineup.push_back(row[8]);
    else if (row[7] != "home_bench" && row[7] != "away_bench") {
      throw DataError(where + ": side must be home/away/home_bench/away_bench");
    }
    if (players) {
      Date birth = Date::parse(row[9]);
      auto [pit, fresh] = players->try_emplace(row[8], PlayerInfo{birth});
      if (!fresh && !(pit->second.birth_date == birth)) {
        throw DataError(where + ": conflicting birth date for " + row[8]);
      }
    }
  }

  CsvTable events = read_csv(events_path);
  require_header(events, {"match_id", "minute", "event_type", "player", "side"}, events_path);
  for (std::size_t i = 0; i < events.rows.size(); ++i) {
    const auto& row = events.rows[i];
    std::string where = events_path + " row " + std::to_string(i + 2);
    if (row.size() != 5) throw DataError(where + ": expected 5 fields");
    auto it = by_id.find(row[0]);
    if (it == by_id.end()) throw DataError(where + ": unknown match_id " + row[0]);
    PmEvent e;
    try {
      e.minute = std::stod(row[1]);
    } catch (const std::exception&) {
      throw DataError(where + ": bad minute '" + row[1] + "'");
    }
    if (row[2] == "goal") e.type = PmEventType::goal;
    else if (row[2] == "sub_on") e.type = PmEventType::sub_on;
    else if (row[2] == "sub_off") e.type = PmEventType::sub_off;
    else if (row[2] == "red") e.type = PmEventType::red_card;
    else throw DataError(where + ": unknown event_type '" + row[2] + "'");
    e.player = row[3];
    if (row[4] == "home") e.home = true;
    else if (row[4] == "away") e.home = false;
    else throw DataError(where + ": side must be home/away");
    it->second.events.push_back(e);
  }

  std::vector<MatchEvents> out;
  out.reserve(order.size());
  for (const auto& id : order) out.push_back(std::move(by_id[id]));
  return out;
}

std::map<std::string, std::vector<std::string>> load_squads(const std::string& path) {
  CsvTable table = read_csv(path);
  require_header(table, {"team", "player"}, path);
  std::map<std::string, std::vector<std::string>> squads;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != 2) {
      throw DataError(path + " row " + std::to_string(i + 2) + ": expected 2 fields");
    }
    squads[row[0]].push_back(row[1]);
  }
  return squads;
}

}  // namespace euro
