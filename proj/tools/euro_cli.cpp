// Command-line front end: ingestion -> ranking -> fitting -> evaluation ->
// simulation, with JSON model persistence and a run manifest per command.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "euro/bookmaker.hpp"
#include "euro/dataset.hpp"
#include "euro/ensemble.hpp"
#include "euro/errors.hpp"
#include "euro/hist_ability.hpp"
#include "euro/model_io.hpp"
#include "euro/plus_minus.hpp"
#include "euro/simulator.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using nlohmann::json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// FNV-1a 64 over the file bytes, as a hex string; recorded in manifests so
// reruns can prove their inputs were identical.
std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw euro::DataError("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[32];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

struct ManifestBuilder {
  json doc;

  ManifestBuilder(const std::string& subcommand, std::uint64_t seed, int threads) {
    doc["tool_version"] = kToolVersion;
    doc["subcommand"] = subcommand;
    doc["seed"] = seed;
    doc["threads"] = threads;
    doc["inputs"] = json::object();
    doc["outputs"] = json::object();
    doc["params"] = json::object();
  }
  void input(const std::string& path) { doc["inputs"][path] = file_hash(path); }
  void output(const std::string& path) { doc["outputs"][path] = file_hash(path); }
  template <typename T>
  void param(const std::string& key, const T& value) {
    doc["params"][key] = value;
  }
  void write(const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw euro::DataError("cannot write manifest " + path);
    out << doc.dump(1) << "\n";
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw euro::DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw euro::DataError("write failed for " + path);
}

std::array<double, 3> parse_weights(const std::string& s) {
  std::array<double, 3> w{};
  std::stringstream ss(s);
  std::string tok;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, tok, ',')) throw euro::DataError("--weights needs 3 comma-separated values");
    try {
      w[i] = std::stod(tok);
    } catch (const std::exception&) {
      throw euro::DataError("--weights: bad value '" + tok + "'");
    }
    if (w[i] < 0) throw euro::DataError("--weights must be non-negative");
  }
  if (std::getline(ss, tok, ',')) throw euro::DataError("--weights needs exactly 3 values");
  if (std::abs(w[0] + w[1] + w[2] - 1.0) > 1e-9) {
    throw euro::DataError("--weights must sum to 1");
  }
  return w;
}

// "YEAR=PATH" per --data occurrence, one tournament edition each.
std::vector<euro::TournamentData> load_tournaments(const std::vector<std::string>& specs,
                                                   ManifestBuilder& manifest) {
  std::vector<euro::TournamentData> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw euro::DataError("--data expects YEAR=PATH, got " + s);
    euro::TournamentData t;
    try {
      t.year = std::stoi(s.substr(0, eq));
    } catch (const std::exception&) {
      throw euro::DataError("--data: bad year in " + s);
    }
    std::string path = s.substr(eq + 1);
    t.rows = euro::load_diff_rows(path);
    manifest.input(path);
    out.push_back(std::move(t));
  }
  return out;
}

euro::ModelKind parse_kind(const std::string& name) {
  if (name == "lasso") return euro::ModelKind::lasso;
  if (name == "forest") return euro::ModelKind::forest;
  if (name == "xgb") return euro::ModelKind::boosted;
  if (name == "combined") return euro::ModelKind::combined;
  throw euro::DataError("unknown model kind " + name);
}

// ---- subcommand bodies ----------------------------------------------------

struct CommonArgs {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string manifest_path;
};

int run_rank_hist(const CommonArgs& c, const std::string& matches_path,
                  const std::string& as_of, double window_years, bool team_home) {
  ManifestBuilder manifest("rank-hist", c.seed, c.threads);
  manifest.input(matches_path);
  manifest.param("as_of", as_of);
  manifest.param("window_years", window_years);
  manifest.param("team_specific_home", team_home);

  std::vector<euro::MatchRecord> matches = euro::load_matches(matches_path);
  euro::HistAbilityOptions opts;
  opts.window_years = window_years;
  opts.team_specific_home = team_home;
  euro::HistAbilityModel model =
      euro::fit_hist_abilities(matches, euro::Date::parse(as_of), opts);

  std::vector<std::pair<std::string, double>> ranked(model.abilities.begin(),
                                                     model.abilities.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string csv = "team,ability\n";
  for (const auto& [team, r] : ranked) csv += team + "," + fmt("%.6f", r) + "\n";
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.param("intercept", model.intercept);
  manifest.write(c.manifest_path);
  std::cout << "OK rank-hist teams=" << ranked.size() << " intercept="
            << fmt("%.6f", model.intercept) << "\n";
  return 0;
}

int run_rank_bookmaker(const CommonArgs& c, const std::string& odds_path,
                       const std::string& config_path, long sims, long verify_sims,
                       int max_iter) {
  ManifestBuilder manifest("rank-bookmaker", c.seed, c.threads);
  manifest.input(odds_path);
  manifest.input(config_path);
  manifest.param("sims_per_iter", sims);
  manifest.param("verify_sims", verify_sims);
  manifest.param("max_iter", max_iter);

  std::vector<euro::OddsSheet> sheets = euro::load_odds(odds_path);
  euro::TournamentConfig cfg = euro::load_tournament_config(config_path);
  euro::ConsensusFitOptions opts;
  opts.sims_per_iter = sims;
  opts.verify_sims = verify_sims;
  opts.max_iter = max_iter;
  opts.threads = c.threads;
  euro::ConsensusAbilities fit = euro::consensus_from_sheets(sheets, cfg, c.seed, opts);

  std::vector<std::pair<std::string, double>> ranked(fit.logability.begin(),
                                                     fit.logability.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string csv = "team,logability,win_prob\n";
  for (const auto& [team, ability] : ranked) {
    csv += team + "," + fmt("%.6f", ability) + "," + fmt("%.6f", fit.win_prob.at(team)) + "\n";
  }
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.param("overround", fit.overround);
  manifest.param("iterations", fit.loss_trace.size());
  manifest.param("final_loss", fit.loss_trace.back());
  manifest.write(c.manifest_path);
  std::cout << "OK rank-bookmaker teams=" << ranked.size() << " overround="
            << fmt("%.4f", fit.overround) << " iterations=" << fit.loss_trace.size()
            << " loss=" << fmt("%.4f", fit.loss_trace.back()) << "\n";
  return 0;
}

int run_rank_pm(const CommonArgs& c, const std::string& lineups_path,
                const std::string& events_path, const std::string& squads_path,
                double ridge, const std::string& as_of) {
  ManifestBuilder manifest("rank-pm", c.seed, c.threads);
  manifest.input(lineups_path);
  manifest.input(events_path);
  manifest.input(squads_path);
  manifest.param("ridge_strength", ridge);
  manifest.param("as_of", as_of);

  std::map<std::string, euro::PlayerInfo> players;
  std::vector<euro::MatchEvents> matches =
      euro::load_pm_matches(lineups_path, events_path, &players);
  std::vector<euro::SegmentRecord> segments;
  for (const auto& m : matches) {
    std::vector<euro::SegmentRecord> s = euro::build_segments(m);
    segments.insert(segments.end(), s.begin(), s.end());
  }
  euro::PmOptions opts;
  opts.reference_date = euro::Date::parse(as_of);
  euro::PMRatingModel model = euro::fit_pm_ratings(segments, players, ridge, opts);

  std::map<std::string, std::vector<std::string>> squads = euro::load_squads(squads_path);
  std::vector<euro::TeamPMSummary> summaries;
  for (const auto& [team, squad] : squads) {
    summaries.push_back(euro::team_ave_pm(model, team, squad));
  }
  std::sort(summaries.begin(), summaries.end(), [](const auto& a, const auto& b) {
    if (a.ave_pm != b.ave_pm) return a.ave_pm > b.ave_pm;
    return a.team < b.team;
  });
  std::string csv = "team,ave_pm\n";
  for (const auto& s : summaries) csv += s.team + "," + fmt("%.6f", s.ave_pm) + "\n";
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.param("segments", segments.size());
  manifest.param("players", model.player_ratings.size());
  manifest.write(c.manifest_path);
  std::cout << "OK rank-pm teams=" << summaries.size() << " players="
            << model.player_ratings.size() << " segments=" << segments.size() << "\n";
  return 0;
}

int run_build_dataset(const CommonArgs& c, const std::string& matches_path,
                      const std::string& features_path, int year) {
  ManifestBuilder manifest("build-dataset", c.seed, c.threads);
  manifest.input(matches_path);
  manifest.input(features_path);
  manifest.param("year", year);

  std::vector<euro::MatchRecord> matches = euro::load_matches(matches_path);
  std::vector<euro::TeamFeatureVector> features = euro::load_features(features_path);
  std::vector<euro::FeatureDiffRow> rows = euro::build_diff_rows(matches, features, year);
  if (c.out.empty()) throw euro::DataError("build-dataset requires --out");
  euro::write_diff_rows(c.out, rows);
  manifest.output(c.out);
  manifest.write(c.manifest_path);
  std::cout << "OK build-dataset rows=" << rows.size() << " out=" << c.out << "\n";
  return 0;
}

int run_fit(const CommonArgs& c, const std::string& kind_name, const std::string& data_path,
            const std::string& weights_arg, double penalty, int mtry, int trees, int rounds) {
  ManifestBuilder manifest("fit", c.seed, c.threads);
  manifest.input(data_path);
  manifest.param("model", kind_name);
  euro::ModelKind kind = parse_kind(kind_name);
  std::vector<euro::FeatureDiffRow> rows = euro::load_diff_rows(data_path);

  euro::CombinedModel model;
  bool want_lasso = kind == euro::ModelKind::lasso || kind == euro::ModelKind::combined;
  bool want_forest = kind == euro::ModelKind::forest || kind == euro::ModelKind::combined;
  bool want_boosted = kind == euro::ModelKind::boosted || kind == euro::ModelKind::combined;
  switch (kind) {
    case euro::ModelKind::lasso: model.weights = {1, 0, 0}; break;
    case euro::ModelKind::forest: model.weights = {0, 1, 0}; break;
    case euro::ModelKind::boosted: model.weights = {0, 0, 1}; break;
    case euro::ModelKind::combined: model.weights = parse_weights(weights_arg); break;
  }
  manifest.param("weights", model.weights);

  if (want_lasso) {
    double xi = penalty;
    if (xi < 0) {
      euro::LassoTuneResult tune = euro::tune_lasso(rows, 10, c.seed);
      xi = tune.best_penalty;
      manifest.param("lasso_penalty_tuned", true);
    }
    manifest.param("lasso_penalty", xi);
    model.lasso = euro::fit_lasso(rows, xi);
  }
  if (want_forest) {
    int m = mtry;
    if (m <= 0) {
      euro::ForestTuneResult tune = euro::tune_forest(rows, c.seed, std::min(trees, 200));
      m = tune.best_mtry;
      manifest.param("forest_mtry_tuned", true);
    }
    manifest.param("forest_mtry", m);
    manifest.param("forest_trees", trees);
    model.forest = euro::fit_forest(rows, m, trees, c.seed);
  }
  if (want_boosted) {
    euro::BoostedParams p;
    if (rounds > 0) {
      p.rounds = rounds;
    } else {
      std::vector<euro::BoostedParams> grid = {
          {50, 0.0, 1.0, 2}, {50, 0.0, 1.0, 3}, {100, 0.1, 1.0, 3}};
      euro::BoostedTuneResult tune = euro::tune_boosted(rows, grid, c.seed);
      p = tune.best;
      p.rounds = std::max(p.rounds, 1);
      manifest.param("boosted_tuned", true);
    }
    manifest.param("boosted_rounds", p.rounds);
    manifest.param("boosted_max_depth", p.max_depth);
    model.boosted = euro::fit_boosted(rows, p.rounds, 0.1, p.leaf_count_penalty,
                                      p.l2_leaf_penalty, p.max_depth);
  }

  if (c.out.empty()) throw euro::DataError("fit requires --out");
  euro::save_model(model, c.out);
  manifest.output(c.out);
  manifest.write(c.manifest_path);
  std::cout << "OK fit model=" << kind_name << " rows=" << rows.size() << " out=" << c.out
            << "\n";
  return 0;
}

std::string metrics_csv(const euro::MetricReport& r) {
  std::string csv = "ml,cr,rps,mae_goals,mae_goaldiff,n_matches\n";
  csv += fmt("%.6f", r.ml) + "," + fmt("%.6f", r.cr) + "," + fmt("%.6f", r.rps) + "," +
         fmt("%.6f", r.mae_goals) + "," + fmt("%.6f", r.mae_goaldiff) + "," +
         std::to_string(r.n_matches) + "\n";
  return csv;
}

int run_evaluate(const CommonArgs& c, const std::vector<std::string>& data_specs,
                 const std::string& kind_name, const std::string& weights_arg) {
  ManifestBuilder manifest("evaluate", c.seed, c.threads);
  manifest.param("cv", "loto");
  manifest.param("model", kind_name);
  std::vector<euro::TournamentData> tournaments = load_tournaments(data_specs, manifest);
  euro::ModelSpec spec;
  spec.kind = parse_kind(kind_name);
  spec.weights = parse_weights(weights_arg);
  spec.seed = c.seed;
  manifest.param("weights", spec.weights);

  euro::MetricReport report = euro::loto_cv(tournaments, spec);
  write_text(c.out, metrics_csv(report));
  if (!c.out.empty()) manifest.output(c.out);
  manifest.write(c.manifest_path);
  std::cout << "OK evaluate model=" << kind_name << " n=" << report.n_matches << " ml="
            << fmt("%.4f", report.ml) << " cr=" << fmt("%.4f", report.cr) << " rps="
            << fmt("%.4f", report.rps) << "\n";
  return 0;
}

int run_tune_weights(const CommonArgs& c, const std::vector<std::string>& data_specs) {
  ManifestBuilder manifest("tune-weights", c.seed, c.threads);
  std::vector<euro::TournamentData> tournaments = load_tournaments(data_specs, manifest);
  euro::ModelSpec spec;
  spec.seed = c.seed;
  euro::CvPredictions cv = euro::loto_member_predictions(tournaments, spec);
  std::vector<euro::WeightGridEntry> grid = euro::tune_weights(cv);

  std::string csv =
      "w_lasso,w_forest,w_boosted,ml,cr,rps,ml_norm,cr_norm,rps_norm,avg_norm\n";
  for (const auto& e : grid) {
    csv += fmt("%.2f", e.weights[0]) + "," + fmt("%.2f", e.weights[1]) + "," +
           fmt("%.2f", e.weights[2]) + "," + fmt("%.6f", e.metrics.ml) + "," +
           fmt("%.6f", e.metrics.cr) + "," + fmt("%.6f", e.metrics.rps) + "," +
           fmt("%.2f", e.ml_norm) + "," + fmt("%.2f", e.cr_norm) + "," +
           fmt("%.2f", e.rps_norm) + "," + fmt("%.2f", e.avg_norm) + "\n";
  }
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.param("best_weights", grid.front().weights);
  manifest.param("best_avg_norm", grid.front().avg_norm);
  manifest.write(c.manifest_path);
  std::cout << "OK tune-weights entries=" << grid.size() << " best="
            << fmt("%.2f", grid.front().weights[0]) << ","
            << fmt("%.2f", grid.front().weights[1]) << ","
            << fmt("%.2f", grid.front().weights[2]) << " avg_norm="
            << fmt("%.2f", grid.front().avg_norm) << "\n";
  return 0;
}

int run_importance(const CommonArgs& c, const std::string& model_path,
                   const std::string& data_path, int repeats) {
  ManifestBuilder manifest("importance", c.seed, c.threads);
  manifest.input(model_path);
  manifest.input(data_path);
  manifest.param("repeats", repeats);

  euro::CombinedModel model = euro::load_model(model_path);
  std::vector<euro::FeatureDiffRow> rows = euro::load_diff_rows(data_path);
  std::array<double, euro::kNumFeatures> imp =
      euro::permutation_importance(model, rows, repeats, c.seed);

  std::string csv = "feature,importance\n";
  for (int k = 0; k < euro::kNumFeatures; ++k) {
    csv += std::string(euro::kFeatureNames[k]) + "," + fmt("%.6f", imp[k]) + "\n";
  }
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.write(c.manifest_path);
  std::cout << "OK importance features=" << euro::kNumFeatures << " rows=" << rows.size()
            << "\n";
  return 0;
}

int run_simulate(const CommonArgs& c, const std::string& model_path,
                 const std::string& features_path, const std::string& config_path, long reps,
                 bool percent) {
  ManifestBuilder manifest("simulate", c.seed, c.threads);
  manifest.input(model_path);
  manifest.input(features_path);
  manifest.input(config_path);
  manifest.param("replications", reps);
  manifest.param("percent", percent);

  euro::CombinedModel model = euro::load_model(model_path);
  euro::TournamentConfig cfg = euro::load_tournament_config(config_path);
  std::vector<euro::TeamFeatureVector> features = euro::load_features(features_path);
  std::map<std::string, euro::TeamFeatureVector> by_team;
  for (const auto& f : features) {
    if (f.tournament_year == cfg.year) by_team[f.team] = f;
  }
  for (const std::string& team : cfg.all_teams()) {
    if (!by_team.count(team)) {
      throw euro::DataError("simulate: no feature vector for " + team + " in year " +
                            std::to_string(cfg.year));
    }
  }
  euro::IntensityFn intensities = [&](const std::string& a, const std::string& b) {
    std::array<double, euro::kNumFeatures> diff{};
    const auto& fa = by_team.at(a).values;
    const auto& fb = by_team.at(b).values;
    for (int k = 0; k < euro::kNumFeatures; ++k) diff[k] = fa[k] - fb[k];
    double l1 = model.predict(diff);
    for (double& d : diff) d = -d;
    return euro::MatchIntensities::clamped(l1, model.predict(diff));
  };
  euro::StageReport report = euro::run_tournament_mc(cfg, intensities, reps, c.seed, c.threads);

  std::vector<std::pair<std::string, euro::StageProbs>> ranked(report.teams.begin(),
                                                               report.teams.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.champion != b.second.champion) return a.second.champion > b.second.champion;
    return a.first < b.first;
  });
  const char* spec = percent ? "%.2f" : "%.4f";
  const double scale = percent ? 100.0 : 1.0;
  std::string csv = "team,p_r16,p_qf,p_sf,p_final,p_champion\n";
  for (const auto& [team, p] : ranked) {
    csv += team + "," + fmt(spec, p.r16 * scale) + "," + fmt(spec, p.qf * scale) + "," +
           fmt(spec, p.sf * scale) + "," + fmt(spec, p.final_ * scale) + "," +
           fmt(spec, p.champion * scale) + "\n";
  }
  write_text(c.out, csv);
  if (!c.out.empty()) manifest.output(c.out);
  manifest.write(c.manifest_path);
  std::cout << "OK simulate teams=" << ranked.size() << " reps=" << reps << " top="
            << ranked.front().first << " p_champion="
            << fmt("%.4f", ranked.front().second.champion) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Football tournament forecasting pipeline"};
  app.require_subcommand(1);

  CommonArgs c;
  struct {
    std::string matches, features, odds, config, lineups, events, squads, model, data;
    std::vector<std::string> data_specs;
    std::string as_of = "2024-06-01";
    std::string kind = "combined";
    std::string weights = "0.15,0.85,0";
    double window_years = 8.0;
    bool team_home = false;
    long sims = 10000, verify_sims = 100000, reps = 100000;
    int max_iter = 500, mtry = 0, trees = 500, rounds = 0, repeats = 100, year = 0;
    double ridge = 10.0, penalty = -1.0;
    bool percent = false;
  } a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed (recorded in the manifest)");
    sub->add_option("--threads", c.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", c.out, "output CSV path ('-' or empty = stdout)");
    sub->add_option("--manifest", c.manifest_path, "write a JSON run manifest here");
  };

  CLI::App* rank_hist = app.add_subcommand("rank-hist", "historic-ability ranking");
  rank_hist->add_option("--matches", a.matches)->required();
  rank_hist->add_option("--as-of", a.as_of, "reference date YYYY-MM-DD")->required();
  rank_hist->add_option("--window-years", a.window_years);
  rank_hist->add_flag("--team-home", a.team_home, "team-specific home advantage");
  add_common(rank_hist);

  CLI::App* rank_bm = app.add_subcommand("rank-bookmaker", "bookmaker consensus abilities");
  rank_bm->add_option("--odds", a.odds)->required();
  rank_bm->add_option("--tournament", a.config)->required();
  rank_bm->add_option("--sims", a.sims, "simulations per fitting iteration");
  rank_bm->add_option("--verify-sims", a.verify_sims);
  rank_bm->add_option("--max-iter", a.max_iter);
  add_common(rank_bm);

  CLI::App* rank_pm = app.add_subcommand("rank-pm", "plus-minus squad ratings");
  rank_pm->add_option("--lineups", a.lineups)->required();
  rank_pm->add_option("--events", a.events)->required();
  rank_pm->add_option("--squads", a.squads)->required();
  rank_pm->add_option("--ridge", a.ridge);
  rank_pm->add_option("--as-of", a.as_of, "recency anchor YYYY-MM-DD");
  add_common(rank_pm);

  CLI::App* build = app.add_subcommand("build-dataset", "paired feature-difference rows");
  build->add_option("--matches", a.matches)->required();
  build->add_option("--features", a.features)->required();
  build->add_option("--year", a.year, "tournament edition year")->required();
  add_common(build);

  CLI::App* fit = app.add_subcommand("fit", "fit a goal model");
  fit->add_option("--model", a.kind, "lasso|forest|xgb|combined")->required();
  fit->add_option("--data", a.data, "feature-difference CSV")->required();
  fit->add_option("--weights", a.weights, "combined weights w1,w2,w3");
  fit->add_option("--penalty", a.penalty, "lasso penalty (negative = tune)");
  fit->add_option("--mtry", a.mtry, "forest mtry (0 = tune)");
  fit->add_option("--trees", a.trees);
  fit->add_option("--rounds", a.rounds, "boosting rounds (0 = tune)");
  add_common(fit);

  CLI::App* evaluate = app.add_subcommand("evaluate", "leave-one-tournament-out metrics");
  evaluate->add_option("--cv", a.data, "cross-validation scheme")->check(CLI::IsMember({"loto"}));
  evaluate->add_option("--data", a.data_specs, "YEAR=PATH per tournament")->required();
  evaluate->add_option("--model", a.kind, "lasso|forest|xgb|combined");
  evaluate->add_option("--weights", a.weights);
  add_common(evaluate);

  CLI::App* tune = app.add_subcommand("tune-weights", "ensemble weight grid search");
  tune->add_option("--data", a.data_specs, "YEAR=PATH per tournament")->required();
  add_common(tune);

  CLI::App* importance = app.add_subcommand("importance", "permutation variable importance");
  importance->add_option("--model", a.model, "model JSON file")->required();
  importance->add_option("--data", a.data)->required();
  importance->add_option("--repeats", a.repeats);
  add_common(importance);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo tournament forecast");
  simulate->add_option("--model", a.model, "model JSON file")->required();
  simulate->add_option("--features", a.features)->required();
  simulate->add_option("--tournament", a.config)->required();
  simulate->add_option("--reps", a.reps);
  simulate->add_flag("--percent", a.percent, "print probabilities in percent");
  add_common(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rank_hist->parsed()) {
      return run_rank_hist(c, a.matches, a.as_of, a.window_years, a.team_home);
    }
    if (rank_bm->parsed()) {
      return run_rank_bookmaker(c, a.odds, a.config, a.sims, a.verify_sims, a.max_iter);
    }
    if (rank_pm->parsed()) {
      return run_rank_pm(c, a.lineups, a.events, a.squads, a.ridge, a.as_of);
    }
    if (build->parsed()) return run_build_dataset(c, a.matches, a.features, a.year);
    if (fit->parsed()) {
      return run_fit(c, a.kind, a.data, a.weights, a.penalty, a.mtry, a.trees, a.rounds);
    }
    if (evaluate->parsed()) return run_evaluate(c, a.data_specs, a.kind, a.weights);
    if (tune->parsed()) return run_tune_weights(c, a.data_specs);
    if (importance->parsed()) return run_importance(c, a.model, a.data, a.repeats);
    if (simulate->parsed()) {
      return run_simulate(c, a.model, a.features, a.config, a.reps, a.percent);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const euro::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const euro::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
