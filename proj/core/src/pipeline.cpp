// Copyright 2026 The dpsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "dpsynth/budget.hpp"
#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/version.hpp"

namespace dpsynth {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Zero-padded so directories list in ascending epsilon order.
std::string eps_dir_name(double eps) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "eps_%08.3f", eps);
  return buf;
}

const std::vector<std::pair<Stage, const char*>> kStageNames = {
    {Stage::kSynthesize, "synthesize"},
    {Stage::kAttackLinkage, "attack_linkage"},
    {Stage::kAttackMia, "attack_mia"},
    {Stage::kEvaluate, "evaluate"},
};

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json doc;
  doc["data_path"] = cfg.data_path;
  doc["schema_path"] = cfg.schema_path;
  doc["workload_path"] = cfg.workload_path;
  doc["epsilons"] = cfg.epsilons;
  doc["delta"] = cfg.delta;
  doc["seeds"] = cfg.seeds;
  doc["output_dir"] = cfg.output_dir;
  ordered_json stages = ordered_json::array();
  for (const Stage s : cfg.stages) stages.push_back(stage_name(s));
  doc["stages"] = std::move(stages);
  doc["synth"] = {{"init_fraction", cfg.synth.init_fraction},
                  {"select_fraction", cfg.synth.select_fraction},
                  {"rounds_max", cfg.synth.rounds_max},
                  {"treewidth_cap", cfg.synth.treewidth_cap},
                  {"n_output", cfg.synth.n_output}};
  doc["linkage"] = {{"exact_cols", cfg.linkage.exact_cols},
                    {"numeric_col", cfg.linkage.numeric_col},
                    {"offset", cfg.linkage.offset},
                    {"scale", cfg.linkage.scale},
                    {"origin", cfg.linkage.origin},
                    {"sim_threshold", cfg.linkage.sim_threshold}};
  doc["mia"] = {{"metric", cfg.mia.metric == DistanceMetric::kHamming
                               ? "hamming"
                               : "euclidean"},
                {"n_draws", cfg.mia.n_draws},
                {"calib_fraction", cfg.mia.calib_fraction},
                {"synth_size", cfg.mia.synth_size},
                {"seed", cfg.mia.seed}};
  doc["mia_target_row"] = cfg.mia_target_row;
  doc["eval"] = {{"target_col", cfg.eval.target_col},
                 {"top_k", cfg.eval.top_k},
                 {"test_fraction", cfg.eval.test_fraction},
                 {"seed", cfg.eval.seed},
                 {"group_col", cfg.eval.group_col},
                 {"week_col", cfg.eval.week_col},
                 {"gender_col", cfg.eval.gender_col},
                 {"sleep_col", cfg.eval.sleep_col},
                 {"forest",
                  {{"n_trees", cfg.eval.forest.n_trees},
                   {"max_depth", cfg.eval.forest.max_depth},
                   {"min_leaf", cfg.eval.forest.min_leaf},
                   {"mtry", cfg.eval.forest.mtry},
                   {"seed", cfg.eval.forest.seed}}}};
  return doc;
}

}  // namespace

std::string stage_name(Stage stage) {
  for (const auto& [s, name] : kStageNames)
    if (s == stage) return name;
  throw ArgumentError("unknown stage");
}

ConfigValidation validate_config_text(const std::string& json_text) {
  ConfigValidation v;
  RunConfig& cfg = v.config;
  const auto err = [&](std::string m) { v.errors.push_back(std::move(m)); };
  const auto warn = [&](std::string m) { v.warnings.push_back(std::move(m)); };

  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    err(std::string("config is not valid JSON: ") + e.what());
    return v;
  }
  if (!doc.is_object()) {
    err("config must be a JSON object");
    return v;
  }

  const auto unknown_keys = [&](const ordered_json& obj,
                                const std::set<std::string>& known,
                                const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!known.count(it.key()))
        warn("unknown key \"" + prefix + it.key() + "\"");
  };
  const auto get_string = [&](const ordered_json& o, const char* key,
                              const std::string& prefix, std::string* out) {
    if (!o.contains(key)) return;
    if (!o[key].is_string()) {
      err("\"" + prefix + key + "\" must be a string");
      return;
    }
    *out = o[key].get<std::string>();
  };
  const auto get_number = [&](const ordered_json& o, const char* key,
                              const std::string& prefix, double* out) {
    if (!o.contains(key)) return;
    if (!o[key].is_number()) {
      err("\"" + prefix + key + "\" must be a number");
      return;
    }
    *out = o[key].get<double>();
  };
  const auto get_size = [&](const ordered_json& o, const char* key,
                            const std::string& prefix, std::size_t* out) {
    if (!o.contains(key)) return;
    if (!o[key].is_number_unsigned()) {
      err("\"" + prefix + key + "\" must be a non-negative integer");
      return;
    }
    *out = o[key].get<std::size_t>();
  };
  const auto get_seed = [&](const ordered_json& o, const char* key,
                            const std::string& prefix, std::uint64_t* out) {
    if (!o.contains(key)) return;
    if (!o[key].is_number_unsigned()) {
      err("\"" + prefix + key + "\" must be a non-negative integer");
      return;
    }
    *out = o[key].get<std::uint64_t>();
  };

  get_string(doc, "data_path", "", &cfg.data_path);
  get_string(doc, "schema_path", "", &cfg.schema_path);
  get_string(doc, "workload_path", "", &cfg.workload_path);
  get_string(doc, "output_dir", "", &cfg.output_dir);
  get_number(doc, "delta", "", &cfg.delta);
  get_size(doc, "mia_target_row", "", &cfg.mia_target_row);

  if (doc.contains("epsilons")) {
    if (!doc["epsilons"].is_array()) {
      err("\"epsilons\" must be an array of numbers");
    } else {
      cfg.epsilons.clear();
      for (const auto& e : doc["epsilons"]) {
        if (!e.is_number()) {
          err("\"epsilons\" must contain only numbers");
          break;
        }
        cfg.epsilons.push_back(e.get<double>());
      }
    }
  }
  if (doc.contains("seeds")) {
    if (!doc["seeds"].is_array()) {
      err("\"seeds\" must be an array of non-negative integers");
    } else {
      cfg.seeds.clear();
      for (const auto& s : doc["seeds"]) {
        if (!s.is_number_unsigned()) {
          err("\"seeds\" must contain only non-negative integers");
          break;
        }
        cfg.seeds.push_back(s.get<std::uint64_t>());
      }
    }
  }
  if (doc.contains("stages")) {
    if (!doc["stages"].is_array()) {
      err("\"stages\" must be an array of stage names");
    } else {
      cfg.stages.clear();
      for (const auto& s : doc["stages"]) {
        if (!s.is_string()) {
          err("\"stages\" must contain only strings");
          continue;
        }
        const std::string name = s.get<std::string>();
        bool found = false;
        for (const auto& [stage, stage_str] : kStageNames) {
          if (name == stage_str) {
            cfg.stages.push_back(stage);
            found = true;
            break;
          }
        }
        if (!found) err("unknown stage \"" + name + "\"");
      }
    }
  }

  if (doc.contains("synth")) {
    if (!doc["synth"].is_object()) {
      err("\"synth\" must be an object");
    } else {
      const auto& o = doc["synth"];
      get_number(o, "init_fraction", "synth.", &cfg.synth.init_fraction);
      get_number(o, "select_fraction", "synth.", &cfg.synth.select_fraction);
      get_size(o, "rounds_max", "synth.", &cfg.synth.rounds_max);
      get_size(o, "treewidth_cap", "synth.", &cfg.synth.treewidth_cap);
      get_size(o, "n_output", "synth.", &cfg.synth.n_output);
      unknown_keys(o,
                   {"init_fraction", "select_fraction", "rounds_max",
                    "treewidth_cap", "n_output"},
                   "synth.");
    }
  }
  if (doc.contains("linkage")) {
    if (!doc["linkage"].is_object()) {
      err("\"linkage\" must be an object");
    } else {
      const auto& o = doc["linkage"];
      if (o.contains("exact_cols")) {
        if (!o["exact_cols"].is_array()) {
          err("\"linkage.exact_cols\" must be an array of strings");
        } else {
          cfg.linkage.exact_cols.clear();
          for (const auto& c : o["exact_cols"]) {
            if (!c.is_string()) {
              err("\"linkage.exact_cols\" must contain only strings");
              break;
            }
            cfg.linkage.exact_cols.push_back(c.get<std::string>());
          }
        }
      }
      get_string(o, "numeric_col", "linkage.", &cfg.linkage.numeric_col);
      get_number(o, "offset", "linkage.", &cfg.linkage.offset);
      get_number(o, "scale", "linkage.", &cfg.linkage.scale);
      get_number(o, "origin", "linkage.", &cfg.linkage.origin);
      get_number(o, "sim_threshold", "linkage.", &cfg.linkage.sim_threshold);
      unknown_keys(o,
                   {"exact_cols", "numeric_col", "offset", "scale", "origin",
                    "sim_threshold"},
                   "linkage.");
    }
  }
  if (doc.contains("mia")) {
    if (!doc["mia"].is_object()) {
      err("\"mia\" must be an object");
    } else {
      const auto& o = doc["mia"];
      if (o.contains("metric")) {
        const std::string metric =
            o["metric"].is_string() ? o["metric"].get<std::string>() : "";
        if (metric == "hamming") {
          cfg.mia.metric = DistanceMetric::kHamming;
        } else if (metric == "euclidean") {
          cfg.mia.metric = DistanceMetric::kEuclidean;
        } else {
          err("\"mia.metric\" must be \"hamming\" or \"euclidean\"");
        }
      }
      get_size(o, "n_draws", "mia.", &cfg.mia.n_draws);
      get_number(o, "calib_fraction", "mia.", &cfg.mia.calib_fraction);
      get_size(o, "synth_size", "mia.", &cfg.mia.synth_size);
      get_seed(o, "seed", "mia.", &cfg.mia.seed);
      unknown_keys(
          o, {"metric", "n_draws", "calib_fraction", "synth_size", "seed"},
          "mia.");
    }
  }
  if (doc.contains("eval")) {
    if (!doc["eval"].is_object()) {
      err("\"eval\" must be an object");
    } else {
      const auto& o = doc["eval"];
      get_string(o, "target_col", "eval.", &cfg.eval.target_col);
      get_size(o, "top_k", "eval.", &cfg.eval.top_k);
      get_number(o, "test_fraction", "eval.", &cfg.eval.test_fraction);
      get_seed(o, "seed", "eval.", &cfg.eval.seed);
      get_string(o, "group_col", "eval.", &cfg.eval.group_col);
      get_string(o, "week_col", "eval.", &cfg.eval.week_col);
      get_string(o, "gender_col", "eval.", &cfg.eval.gender_col);
      get_string(o, "sleep_col", "eval.", &cfg.eval.sleep_col);
      if (o.contains("forest")) {
        if (!o["forest"].is_object()) {
          err("\"eval.forest\" must be an object");
        } else {
          const auto& f = o["forest"];
          get_size(f, "n_trees", "eval.forest.", &cfg.eval.forest.n_trees);
          get_size(f, "max_depth", "eval.forest.", &cfg.eval.forest.max_depth);
          get_size(f, "min_leaf", "eval.forest.", &cfg.eval.forest.min_leaf);
          get_size(f, "mtry", "eval.forest.", &cfg.eval.forest.mtry);
          get_seed(f, "seed", "eval.forest.", &cfg.eval.forest.seed);
          unknown_keys(f, {"n_trees", "max_depth", "min_leaf", "mtry", "seed"},
                       "eval.forest.");
        }
      }
      unknown_keys(o,
                   {"target_col", "top_k", "test_fraction", "seed",
                    "group_col", "week_col", "gender_col", "sleep_col",
                    "forest"},
                   "eval.");
    }
  }
  unknown_keys(doc,
               {"data_path", "schema_path", "workload_path", "epsilons",
                "delta", "seeds", "output_dir", "stages", "synth", "linkage",
                "mia", "mia_target_row", "eval"},
               "");

  // Cross-field invariants, all collected before returning.
  if (cfg.data_path.empty()) err("data_path is required");
  if (cfg.schema_path.empty()) err("schema_path is required");
  if (cfg.output_dir.empty()) err("output_dir is required");
  if (cfg.epsilons.empty()) err("epsilons must be non-empty");
  for (const double eps : cfg.epsilons) {
    if (!(eps > 0)) {
      err("epsilons must be positive");
      break;
    }
  }
  {
    std::vector<double> sorted = cfg.epsilons;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      err("epsilons must be distinct");
  }
  if (cfg.seeds.empty()) err("seeds must be non-empty");
  if (cfg.stages.empty()) err("stages must be non-empty");
  if (cfg.delta < 0 || cfg.delta >= 1) err("delta must be in [0, 1)");
  if (!(cfg.synth.init_fraction > 0 && cfg.synth.init_fraction < 1))
    err("synth.init_fraction must be in (0, 1)");
  if (!(cfg.synth.select_fraction > 0 && cfg.synth.select_fraction < 1))
    err("synth.select_fraction must be in (0, 1)");

  const auto enabled = [&](Stage s) {
    return std::find(cfg.stages.begin(), cfg.stages.end(), s) !=
           cfg.stages.end();
  };
  if (enabled(Stage::kAttackLinkage)) {
    try {
      cfg.linkage.validate();
    } catch (const Error& e) {
      err(e.what());
    }
  }
  if (enabled(Stage::kAttackMia)) {
    try {
      cfg.mia.validate();
    } catch (const Error& e) {
      err(e.what());
    }
  }
  if (enabled(Stage::kEvaluate) && cfg.eval.target_col.empty())
    err("eval.target_col is required for the evaluate stage");
  return v;
}

ConfigValidation validate_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    ConfigValidation v;
    v.errors.push_back(e.what());
    return v;
  }
  return validate_config_text(text);
}

RunManifest run_pipeline(const RunConfig& config) {
  if (config.epsilons.empty()) throw ConfigError("epsilons must be non-empty");
  if (config.output_dir.empty()) throw ConfigError("output_dir is required");

  const Schema file_schema = load_schema(config.schema_path);
  const RawTable raw = read_csv(config.data_path);
  Table table = encode(raw, file_schema, {}).table;
  if (table.n_rows() == 0) throw ConfigError("input table has no rows");
  const Schema& schema = table.schema;  // includes any missing-value codes
  const auto n = static_cast<double>(table.n_rows());
  const double delta = config.delta > 0 ? config.delta : 1.0 / (n * n);
  const Workload workload =
      config.workload_path.empty()
          ? all_kway_workload(schema, 2)
          : load_workload(config.workload_path, schema);

  fs::create_directories(config.output_dir);

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config_echo = config_to_json(config).dump(2);

  struct Timing {
    std::string stage;
    double epsilon;
    std::uint64_t seed;
    double ms;
  };
  struct Cell {
    std::size_t eps_index;
    double eps;
    std::uint64_t seed;
  };
  struct CellOutput {
    std::vector<StageRecord> records;
    std::vector<Timing> timings;
  };

  std::vector<Cell> cells;
  for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei)
    for (const std::uint64_t seed : config.seeds)
      cells.push_back({ei, config.epsilons[ei], seed});
  std::vector<CellOutput> outputs(cells.size());

  const auto enabled = [&](Stage s) {
    return std::find(config.stages.begin(), config.stages.end(), s) !=
           config.stages.end();
  };

  const auto run_cell = [&](const Cell& cell, CellOutput* out) {
    const double eps = cell.eps;
    const std::uint64_t seed = cell.seed;
    const double rho = eps_delta_to_rho(eps, delta);
    const std::string cell_rel =
        eps_dir_name(eps) + "/seed_" + std::to_string(seed);
    const fs::path cell_dir = fs::path(config.output_dir) / cell_rel;
    fs::create_directories(cell_dir);
    // One noise stream per (epsilon, seed) cell; epsilons must not share
    // draws even under the same run seed.
    const std::uint64_t cell_seed = mix_seed(seed, cell.eps_index);

    bool have_synth = false;
    bool synth_failed = false;
    Table synthetic;
    RawTable synthetic_raw;

    const auto run_stage = [&](Stage s, auto&& body) {
      if (!enabled(s)) return;
      StageRecord rec;
      rec.stage = stage_name(s);
      rec.epsilon = eps;
      rec.seed = seed;
      if (synth_failed && s != Stage::kSynthesize) {
        rec.error = "skipped: synthesize failed for this cell";
        out->records.push_back(std::move(rec));
        return;
      }
      const auto t0 = std::chrono::steady_clock::now();
      try {
        body(&rec);
        rec.ok = true;
      } catch (const std::exception& e) {
        rec.error = e.what();
        if (s == Stage::kSynthesize) synth_failed = true;
      }
      const auto t1 = std::chrono::steady_clock::now();
      out->timings.push_back(
          {rec.stage, eps, seed,
           std::chrono::duration<double, std::milli>(t1 - t0).count()});
      out->records.push_back(std::move(rec));
    };

    // Attacks and evaluation run against a previously written synthetic
    // table when the synthesize stage is not part of this run.
    const auto ensure_synth = [&]() {
      if (have_synth) return;
      const fs::path path = cell_dir / "synthetic.csv";
      if (!fs::exists(path))
        throw StructuralError(
            "no synthetic table for this cell; run the synthesize stage "
            "first");
      synthetic_raw = read_csv(path.string());
      synthetic = encode(synthetic_raw, file_schema, {}).table;
      have_synth = true;
    };

    run_stage(Stage::kSynthesize, [&](StageRecord* rec) {
      SynthesisResult result =
          synthesize(table, workload, rho, cell_seed, config.synth);
      synthetic = std::move(result.synthetic);
      synthetic_raw = decode(synthetic);
      have_synth = true;
      write_text_file(cell_dir / "synthetic.csv", format_csv(synthetic_raw));
      write_text_file(cell_dir / "round_log.json",
                      round_log_to_json(result.rounds, schema));
      write_text_file(cell_dir / "ledger.json", ledger_to_json(result.ledger));
      rec->artifacts = {cell_rel + "/synthetic.csv",
                        cell_rel + "/round_log.json",
                        cell_rel + "/ledger.json"};
    });

    run_stage(Stage::kAttackLinkage, [&](StageRecord* rec) {
      ensure_synth();
      const MatchResult matches =
          linkage_attack(raw, synthetic_raw, config.linkage);
      write_text_file(cell_dir / "matches.json",
                      match_result_to_json(matches));
      rec->artifacts = {cell_rel + "/matches.json"};
    });

    run_stage(Stage::kAttackMia, [&](StageRecord* rec) {
      if (config.mia_target_row >= table.n_rows())
        throw ArgumentError("mia_target_row is out of range");
      const std::vector<std::size_t> target =
          table.rows[config.mia_target_row];
      Table real_without = table;
      real_without.rows.erase(
          real_without.rows.begin() +
          static_cast<std::ptrdiff_t>(config.mia_target_row));
      if (!real_without.row_ids.empty())
        real_without.row_ids.erase(
            real_without.row_ids.begin() +
            static_cast<std::ptrdiff_t>(config.mia_target_row));

      MiaConfig mc = config.mia;
      mc.seed = cell_seed;
      const SyntheticGenerator generator = [&](const Table& training,
                                               std::uint64_t s) {
        SynthesizerOptions so = config.synth;
        if (config.mia.synth_size != 0) so.n_output = config.mia.synth_size;
        return synthesize(training, workload, rho, s, so).synthetic;
      };
      const MiaResult result = run_mia(target, real_without, mc, generator);
      write_text_file(cell_dir / "mia_roc.csv", roc_to_csv(result.roc));
      const ordered_json summary = {{"auc", result.auc},
                                    {"youden_threshold", result.threshold},
                                    {"decision", result.decision}};
      write_text_file(cell_dir / "mia_summary.json", summary.dump(2) + "\n");
      rec->artifacts = {cell_rel + "/mia_roc.csv",
                        cell_rel + "/mia_summary.json"};
    });

    run_stage(Stage::kEvaluate, [&](StageRecord* rec) {
      ensure_synth();
      EvalProtocol protocol = config.eval;
      if (protocol.workload.queries.empty()) protocol.workload = workload;
      std::vector<std::pair<double, Table>> synths;
      synths.emplace_back(eps, synthetic);
      const UtilityReport report = utility_report(table, synths, protocol);
      write_text_file(cell_dir / "report.json",
                      utility_report_to_json(report));
      write_text_file(cell_dir / "corr_real.csv",
                      corr_matrix_to_csv(report.real.corr));
      write_text_file(
          cell_dir / "corr_synth.csv",
          corr_matrix_to_csv(report.by_epsilon.front().second.corr));
      rec->artifacts = {cell_rel + "/report.json",
                        cell_rel + "/corr_real.csv",
                        cell_rel + "/corr_synth.csv"};
    });
  };

  // Cells are independent given their derived seeds, so they run in a small
  // work pool; records are merged in canonical (epsilon, seed) order behind
  // the joins, which keeps the manifest deterministic.
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        run_cell(cells[i], &outputs[i]);
      } catch (const std::exception& e) {
        // Stage handlers absorb expected failures; this catches setup
        // problems so one bad cell cannot take down the whole run.
        StageRecord rec;
        rec.stage = "cell";
        rec.epsilon = cells[i].eps;
        rec.seed = cells[i].seed;
        rec.error = e.what();
        outputs[i].records.push_back(std::move(rec));
      }
    }
  };
  std::size_t n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min(n_threads, cells.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<Timing> timings;
  for (CellOutput& out : outputs) {
    for (StageRecord& rec : out.records)
      manifest.records.push_back(std::move(rec));
    for (Timing& t : out.timings) timings.push_back(std::move(t));
  }

  write_text_file(fs::path(config.output_dir) / "manifest.json",
                  manifest_to_json(manifest));
  ordered_json timing_records = ordered_json::array();
  for (const Timing& t : timings) {
    timing_records.push_back({{"stage", t.stage},
                              {"epsilon", t.epsilon},
                              {"seed", t.seed},
                              {"ms", t.ms}});
  }
  const ordered_json timing_doc = {{"records", std::move(timing_records)}};
  write_text_file(fs::path(config.output_dir) / "timings.json",
                  timing_doc.dump(2) + "\n");
  return manifest;
}

bool pipeline_ok(const RunManifest& manifest) {
  return std::all_of(manifest.records.begin(), manifest.records.end(),
                     [](const StageRecord& r) { return r.ok; });
}

std::string manifest_to_json(const RunManifest& manifest) {
  ordered_json doc;
  doc["version"] = manifest.version;
  doc["config"] = ordered_json::parse(manifest.config_echo);
  ordered_json records = ordered_json::array();
  for (const StageRecord& rec : manifest.records) {
    ordered_json r;
    r["stage"] = rec.stage;
    r["epsilon"] = rec.epsilon;
    r["seed"] = rec.seed;
    r["ok"] = rec.ok;
    if (!rec.error.empty()) r["error"] = rec.error;
    r["artifacts"] = rec.artifacts;
    records.push_back(std::move(r));
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

}  // namespace dpsynth
