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

// Command line front end. Exit codes: 0 success, 1 configuration or input
// error, 2 failure while running a stage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dpsynth/aim.hpp"
#include "dpsynth/budget.hpp"
#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"
#include "dpsynth/evaluate.hpp"
#include "dpsynth/linkage.hpp"
#include "dpsynth/mia.hpp"
#include "dpsynth/pipeline.hpp"
#include "dpsynth/roc.hpp"
#include "dpsynth/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kStageFailure = 2;
constexpr const char* kOutputDirEnv = "DPSYNTH_OUTPUT_DIR";

int fail(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return code;
}

void write_text(const std::string& path, const std::string& content) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dpsynth::IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw dpsynth::IoError("failed writing " + path);
}

// Inputs shared by the synthesizing commands (synthesize, attack-mia).
struct DataArgs {
  std::string data;
  std::string schema;
  std::string workload;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  dpsynth::SynthesizerOptions synth;
};

struct LoadedData {
  dpsynth::Table table;
  dpsynth::Workload workload;
  double rho = 0.0;
};

LoadedData load_data(const DataArgs& a) {
  LoadedData d;
  const dpsynth::Schema schema = dpsynth::load_schema(a.schema);
  d.table = dpsynth::encode(dpsynth::read_csv(a.data), schema, {}).table;
  if (d.table.n_rows() == 0)
    throw dpsynth::ConfigError("input table has no rows");
  const auto n = static_cast<double>(d.table.n_rows());
  const double delta = a.delta > 0 ? a.delta : 1.0 / (n * n);
  d.workload = a.workload.empty()
                   ? dpsynth::all_kway_workload(d.table.schema, 2)
                   : dpsynth::load_workload(a.workload, d.table.schema);
  d.rho = dpsynth::eps_delta_to_rho(a.epsilon, delta);
  return d;
}

// ---------------------------------------------------------------- synthesize

struct SynthesizeArgs {
  DataArgs data;
  std::string out;
  std::string log;
  std::string ledger;
};

int cmd_synthesize(const SynthesizeArgs& a) {
  LoadedData d;
  try {
    d = load_data(a.data);
  } catch (const std::exception& e) {
    return fail(kConfigError, e.what());
  }
  try {
    const dpsynth::SynthesisResult result = dpsynth::synthesize(
        d.table, d.workload, d.rho, a.data.seed, a.data.synth);
    write_text(a.out, dpsynth::format_csv(dpsynth::decode(result.synthetic)));
    if (!a.log.empty())
      write_text(a.log,
                 dpsynth::round_log_to_json(result.rounds, d.table.schema));
    if (!a.ledger.empty())
      write_text(a.ledger, dpsynth::ledger_to_json(result.ledger));
    std::cout << "wrote " << a.out << ": " << result.synthetic.n_rows()
              << " rows, " << result.rounds.size() << " adaptive rounds, rho "
              << dpsynth::format_double(result.rho_charged) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return fail(kStageFailure, e.what());
  }
}

// ------------------------------------------------------------ attack-linkage

struct LinkageArgs {
  std::string target;
  std::string aux;
  std::string out;
  dpsynth::LinkageConfig cfg;
};

int cmd_attack_linkage(const LinkageArgs& a) {
  dpsynth::RawTable target;
  dpsynth::RawTable aux;
  try {
    a.cfg.validate();
    target = dpsynth::read_csv(a.target);
    aux = dpsynth::read_csv(a.aux);
  } catch (const std::exception& e) {
    return fail(kConfigError, e.what());
  }
  try {
    const dpsynth::MatchResult result =
        dpsynth::linkage_attack(target, aux, a.cfg);
    write_text(a.out, dpsynth::match_result_to_json(result));
    std::cout << "wrote " << a.out << ": " << result.pairs.size()
              << " pairs at or above threshold "
              << dpsynth::format_double(a.cfg.sim_threshold) << " ("
              << result.pairs_blocked << " candidates passed blocking)\n";
    return kOk;
  } catch (const std::exception& e) {
    return fail(kStageFailure, e.what());
  }
}

// ----------------------------------------------------------------- attack-mia

struct MiaArgs {
  DataArgs data;
  std::size_t target_row = 0;
  std::string metric = "euclidean";
  std::string out;
  std::string roc;
  dpsynth::MiaConfig cfg;
};

int cmd_attack_mia(const MiaArgs& a) {
  LoadedData d;
  dpsynth::MiaConfig cfg = a.cfg;
  try {
    d = load_data(a.data);
    if (a.target_row >= d.table.n_rows())
      throw dpsynth::ConfigError("--target-row is out of range");
    cfg.metric = a.metric == "hamming" ? dpsynth::DistanceMetric::kHamming
                                       : dpsynth::DistanceMetric::kEuclidean;
    cfg.seed = a.data.seed;
    cfg.validate();
  } catch (const std::exception& e) {
    return fail(kConfigError, e.what());
  }
  try {
    const std::vector<std::size_t> target = d.table.rows[a.target_row];
    dpsynth::Table real = d.table;
    real.rows.erase(real.rows.begin() +
                    static_cast<std::ptrdiff_t>(a.target_row));
    if (!real.row_ids.empty())
      real.row_ids.erase(real.row_ids.begin() +
                         static_cast<std::ptrdiff_t>(a.target_row));
    const dpsynth::SyntheticGenerator generator =
        [&](const dpsynth::Table& training, std::uint64_t seed) {
          dpsynth::SynthesizerOptions so = a.data.synth;
          if (cfg.synth_size != 0) so.n_output = cfg.synth_size;
          return dpsynth::synthesize(training, d.workload, d.rho, seed, so)
              .synthetic;
        };
    const dpsynth::MiaResult result =
        dpsynth::run_mia(target, real, cfg, generator);
    const ordered_json summary = {{"auc", result.auc},
                                  {"youden_threshold", result.threshold},
                                  {"decision", result.decision}};
    write_text(a.out, summary.dump(2) + "\n");
    if (!a.roc.empty()) write_text(a.roc, dpsynth::roc_to_csv(result.roc));
    std::cout << "wrote " << a.out
              << ": auc " << dpsynth::format_double(result.auc)
              << ", decision " << (result.decision ? "in" : "out") << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return fail(kStageFailure, e.what());
  }
}

// ------------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string real;
  std::string schema;
  std::string synth_dir;
  std::string out;
  std::optional<std::uint64_t> seed_dir;
  dpsynth::EvalProtocol protocol;
};

std::optional<double> parse_eps_name(const std::string& stem) {
  if (stem.rfind("eps_", 0) != 0) return std::nullopt;
  const std::string digits = stem.substr(4);
  char* end = nullptr;
  const double eps = std::strtod(digits.c_str(), &end);
  if (end != digits.c_str() + digits.size() || !(eps > 0)) return std::nullopt;
  return eps;
}

// Accepts either flat files eps_<value>.csv or the pipeline layout
// eps_<value>/seed_<n>/synthetic.csv (pick --seed, else the first seed dir).
std::map<double, fs::path> scan_synth_dir(
    const std::string& dir, const std::optional<std::uint64_t>& seed_dir) {
  if (!fs::is_directory(dir))
    throw dpsynth::ConfigError("--synth-dir is not a directory: " + dir);
  std::map<double, fs::path> found;
  const auto add = [&](double eps, const fs::path& path) {
    if (!found.emplace(eps, path).second)
      throw dpsynth::ConfigError("duplicate epsilon in " + dir + ": " +
                                 dpsynth::format_double(eps));
  };
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      const auto eps = parse_eps_name(entry.path().stem().string());
      if (eps) add(*eps, entry.path());
    } else if (entry.is_directory()) {
      const auto eps = parse_eps_name(name);
      if (!eps) continue;
      fs::path cell;
      if (seed_dir) {
        cell = entry.path() / ("seed_" + std::to_string(*seed_dir));
      } else {
        std::vector<fs::path> seeds;
        for (const auto& sub : fs::directory_iterator(entry.path()))
          if (sub.is_directory() &&
              sub.path().filename().string().rfind("seed_", 0) == 0)
            seeds.push_back(sub.path());
        if (seeds.empty()) continue;
        cell = *std::min_element(seeds.begin(), seeds.end());
      }
      const fs::path csv = cell / "synthetic.csv";
      if (fs::exists(csv)) add(*eps, csv);
    }
  }
  if (found.empty())
    throw dpsynth::ConfigError("no synthetic tables found under " + dir);
  return found;
}

int cmd_evaluate(const EvaluateArgs& a) {
  dpsynth::Table real;
  std::vector<std::pair<double, dpsynth::Table>> synths;
  try {
    const dpsynth::Schema schema = dpsynth::load_schema(a.schema);
    real = dpsynth::encode(dpsynth::read_csv(a.real), schema, {}).table;
    for (const auto& [eps, path] : scan_synth_dir(a.synth_dir, a.seed_dir))
      synths.emplace_back(
          eps,
          dpsynth::encode(dpsynth::read_csv(path.string()), schema, {}).table);
  } catch (const std::exception& e) {
    return fail(kConfigError, e.what());
  }
  try {
    const dpsynth::UtilityReport report =
        dpsynth::utility_report(real, synths, a.protocol);
    write_text(a.out, dpsynth::utility_report_to_json(report));
    std::cout << "wrote " << a.out << " (" << report.by_epsilon.size()
              << " epsilon values)\n";
    for (const auto& [eps, eval] : report.by_epsilon) {
      std::cout << "  eps " << dpsynth::format_double(eps) << ": l1 "
                << dpsynth::format_double(eval.l1) << ", r2 "
                << (eval.r2_degenerate ? "n/a"
                                       : dpsynth::format_double(eval.r2))
                << "\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    return fail(kStageFailure, e.what());
  }
}

// ----------------------------------------------------- pipeline and validate

struct PipelineArgs {
  std::string config_path;
  std::string output_dir;
  std::string data;
  std::string schema;
  std::string workload;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> stages;
  double delta = 0.0;
  // Options seen on the command line; only those override the file.
  CLI::Option* output_dir_opt = nullptr;
  CLI::Option* data_opt = nullptr;
  CLI::Option* schema_opt = nullptr;
  CLI::Option* workload_opt = nullptr;
  CLI::Option* epsilons_opt = nullptr;
  CLI::Option* seeds_opt = nullptr;
  CLI::Option* stages_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
};

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dpsynth::IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Flags override file values key by key; the env var supplies output_dir
// only when neither the file nor a flag sets it.
std::string effective_config_text(const PipelineArgs& a) {
  std::string text = read_file_or_throw(a.config_path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception&) {
    return text;  // let validate_config_text report the parse error
  }
  if (!doc.is_object()) return text;
  const auto given = [](const CLI::Option* opt) {
    return opt != nullptr && opt->count() > 0;
  };
  if (given(a.data_opt)) doc["data_path"] = a.data;
  if (given(a.schema_opt)) doc["schema_path"] = a.schema;
  if (given(a.workload_opt)) doc["workload_path"] = a.workload;
  if (given(a.epsilons_opt)) doc["epsilons"] = a.epsilons;
  if (given(a.seeds_opt)) doc["seeds"] = a.seeds;
  if (given(a.stages_opt)) doc["stages"] = a.stages;
  if (given(a.delta_opt)) doc["delta"] = a.delta;
  if (given(a.output_dir_opt)) {
    doc["output_dir"] = a.output_dir;
  } else if (!doc.contains("output_dir") ||
             (doc["output_dir"].is_string() &&
              doc["output_dir"].get<std::string>().empty())) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env)
      doc["output_dir"] = env;
  }
  return doc.dump();
}

void report_validation(const dpsynth::ConfigValidation& v) {
  for (const std::string& w : v.warnings)
    std::cerr << "warning: " << w << "\n";
  for (const std::string& e : v.errors) std::cerr << "error: " << e << "\n";
}

int cmd_pipeline(const PipelineArgs& a) {
  dpsynth::ConfigValidation v;
  try {
    v = dpsynth::validate_config_text(effective_config_text(a));
  } catch (const std::exception& e) {
    return fail(kConfigError, e.what());
  }
  report_validation(v);
  if (!v.ok()) return kConfigError;
  dpsynth::RunManifest manifest;
  try {
    manifest = dpsynth::run_pipeline(v.config);
  } catch (const std::exception& e) {
    return fail(kStageFailure, e.what());
  }
  for (const dpsynth::StageRecord& rec : manifest.records) {
    std::cout << (rec.ok ? "[ ok ] " : "[fail] ") << rec.stage << " eps "
              << dpsynth::format_double(rec.epsilon) << " seed " << rec.seed;
    if (!rec.error.empty()) std::cout << ": " << rec.error;
    std::cout << "\n";
  }
  std::cout << "manifest: "
            << (fs::path(v.config.output_dir) / "manifest.json").string()
            << "\n";
  return dpsynth::pipeline_ok(manifest) ? kOk : kStageFailure;
}

int cmd_validate(const std::string& config_path) {
  const dpsynth::ConfigValidation v =
      dpsynth::validate_config_file(config_path);
  report_validation(v);
  if (!v.ok()) return kConfigError;
  std::cout << "config ok: " << v.config.epsilons.size() << " epsilons x "
            << v.config.seeds.size() << " seeds, stages";
  for (const dpsynth::Stage s : v.config.stages)
    std::cout << " " << dpsynth::stage_name(s);
  std::cout << "\n";
  return kOk;
}

void add_synth_options(CLI::App* cmd, DataArgs* a, bool epsilon_required) {
  cmd->add_option("--data", a->data, "input CSV")->required();
  cmd->add_option("--schema", a->schema, "schema JSON")->required();
  auto* eps =
      cmd->add_option("--epsilon", a->epsilon, "privacy budget epsilon")
          ->check(CLI::PositiveNumber);
  if (epsilon_required) eps->required();
  cmd->add_option("--delta", a->delta,
                  "privacy parameter delta (default 1/n^2)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workload", a->workload,
                  "workload JSON (default: all 2-way marginals)");
  cmd->add_option("--seed", a->seed, "root seed (default 0)");
  cmd->add_option("--rounds-max", a->synth.rounds_max,
                  "adaptive round cap (0 = 4x attribute count)");
  cmd->add_option("--treewidth-cap", a->synth.treewidth_cap,
                  "junction tree width cap");
  cmd->add_option("--init-fraction", a->synth.init_fraction,
                  "budget share of the one-way warm start");
  cmd->add_option("--select-fraction", a->synth.select_fraction,
                  "per-round share spent on selection");
  cmd->add_option("--n-output", a->synth.n_output,
                  "synthetic rows (0 = input row count)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpsynth: differentially private synthetic tabular data "
               "toolkit"};
  app.set_version_flag("--version", dpsynth::kVersion);
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* syn_cmd = app.add_subcommand(
      "synthesize", "Generate one synthetic table under a DP budget");
  add_synth_options(syn_cmd, &syn.data, /*epsilon_required=*/true);
  syn_cmd->add_option("--out", syn.out, "output CSV path")->required();
  syn_cmd->add_option("--log", syn.log, "write per-round log JSON here");
  syn_cmd->add_option("--ledger", syn.ledger, "write budget ledger JSON here");

  LinkageArgs link;
  auto* link_cmd = app.add_subcommand(
      "attack-linkage", "Re-identification by blocked similarity join");
  link_cmd->add_option("--target", link.target, "target table CSV")
      ->required();
  link_cmd->add_option("--aux", link.aux, "auxiliary table CSV")->required();
  link_cmd
      ->add_option("--exact", link.cfg.exact_cols,
                   "blocking columns (comma separated or repeated)")
      ->required()
      ->delimiter(',');
  link_cmd->add_option("--numeric", link.cfg.numeric_col,
                       "numeric column scored by similarity")
      ->required();
  link_cmd->add_option("--offset", link.cfg.offset, "similarity dead zone");
  link_cmd->add_option("--scale", link.cfg.scale, "similarity decay width");
  link_cmd->add_option("--origin", link.cfg.origin,
                       "accepted for config compatibility; no effect");
  link_cmd->add_option("--threshold", link.cfg.sim_threshold,
                       "minimum similarity for a match");
  link_cmd->add_option("--out", link.out, "output matches JSON")->required();

  MiaArgs mia;
  auto* mia_cmd = app.add_subcommand(
      "attack-mia", "Closest-distance membership inference audit");
  add_synth_options(mia_cmd, &mia.data, /*epsilon_required=*/true);
  mia_cmd->add_option("--target-row", mia.target_row,
                      "0-based row index of the audited record")
      ->required();
  mia_cmd->add_option("--draws", mia.cfg.n_draws,
                      "shadow draws, half in, half out (even)");
  mia_cmd
      ->add_option("--metric", mia.metric, "distance metric")
      ->check(CLI::IsMember({"hamming", "euclidean"}));
  mia_cmd->add_option("--calib-fraction", mia.cfg.calib_fraction,
                      "share of rows the attacker holds");
  mia_cmd->add_option("--synth-size", mia.cfg.synth_size,
                      "rows per shadow table (0 = training size)");
  mia_cmd->add_option("--out", mia.out, "output summary JSON")->required();
  mia_cmd->add_option("--roc", mia.roc, "write the ROC curve CSV here");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand(
      "evaluate", "Utility report for synthetic tables against the original");
  ev_cmd->add_option("--real", ev.real, "original table CSV")->required();
  ev_cmd->add_option("--schema", ev.schema, "schema JSON")->required();
  ev_cmd
      ->add_option("--synth-dir", ev.synth_dir,
                   "directory of eps_<value>.csv files or pipeline cells")
      ->required();
  std::uint64_t ev_seed = 0;
  auto* ev_seed_opt = ev_cmd->add_option(
      "--seed-dir", ev_seed, "pipeline seed directory to evaluate");
  ev_cmd->add_option("--target", ev.protocol.target_col,
                     "regression outcome column")
      ->required();
  ev_cmd->add_option("--top-k", ev.protocol.top_k,
                     "forest features by rank correlation");
  ev_cmd->add_option("--test-fraction", ev.protocol.test_fraction,
                     "held-out share for the forest");
  ev_cmd->add_option("--split-seed", ev.protocol.seed,
                     "train/test split seed");
  ev_cmd->add_option("--group-col", ev.protocol.group_col,
                     "mixed-model grouping column");
  ev_cmd->add_option("--week-col", ev.protocol.week_col,
                     "mixed-model time column");
  ev_cmd->add_option("--gender-col", ev.protocol.gender_col,
                     "mixed-model categorical column");
  ev_cmd->add_option("--sleep-col", ev.protocol.sleep_col,
                     "column centered within group into a deviation");
  ev_cmd->add_option("--out", ev.out, "output report JSON")->required();

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "Run the configured stages over the full epsilon sweep");
  pipe_cmd->add_option("--config", pipe.config_path, "run config JSON")
      ->required();
  pipe.output_dir_opt = pipe_cmd->add_option(
      "--output-dir", pipe.output_dir,
      std::string("artifact root (overrides config; default from $") +
          kOutputDirEnv + ")");
  pipe.data_opt = pipe_cmd->add_option("--data", pipe.data, "input CSV");
  pipe.schema_opt =
      pipe_cmd->add_option("--schema", pipe.schema, "schema JSON");
  pipe.workload_opt =
      pipe_cmd->add_option("--workload", pipe.workload, "workload JSON");
  pipe.epsilons_opt =
      pipe_cmd->add_option("--epsilons", pipe.epsilons, "epsilon grid")
          ->delimiter(',');
  pipe.seeds_opt = pipe_cmd->add_option("--seeds", pipe.seeds, "run seeds")
                       ->delimiter(',');
  pipe.stages_opt =
      pipe_cmd->add_option("--stages", pipe.stages, "stages to run")
          ->delimiter(',');
  pipe.delta_opt =
      pipe_cmd->add_option("--delta", pipe.delta, "privacy parameter delta");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand(
      "validate", "Check a run config and report every problem");
  validate_cmd->add_option("--config", validate_path, "run config JSON")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (syn_cmd->parsed()) return cmd_synthesize(syn);
  if (link_cmd->parsed()) return cmd_attack_linkage(link);
  if (mia_cmd->parsed()) return cmd_attack_mia(mia);
  if (ev_cmd->parsed()) {
    if (ev_seed_opt->count() > 0) ev.seed_dir = ev_seed;
    return cmd_evaluate(ev);
  }
  if (pipe_cmd->parsed()) return cmd_pipeline(pipe);
  if (validate_cmd->parsed()) return cmd_validate(validate_path);
  return kConfigError;
}
