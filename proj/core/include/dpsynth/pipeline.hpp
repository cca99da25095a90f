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

#ifndef DPSYNTH_PIPELINE_HPP_
#define DPSYNTH_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dpsynth/aim.hpp"
#include "dpsynth/evaluate.hpp"
#include "dpsynth/linkage.hpp"
#include "dpsynth/mia.hpp"

namespace dpsynth {

enum class Stage { kSynthesize, kAttackLinkage, kAttackMia, kEvaluate };

std::string stage_name(Stage stage);

// Everything one end-to-end run needs. Parsed from a single JSON document;
// command-line flags override file values field by field.
struct RunConfig {
  std::string data_path;
  std::string schema_path;
  std::string workload_path;  // optional; empty means all 2-way
  std::vector<double> epsilons = {1, 2, 5, 10, 20, 50, 100};
  double delta = 0.0;  // 0 means 1 / n^2 of the loaded table
  std::vector<std::uint64_t> seeds = {0};
  std::string output_dir;
  std::vector<Stage> stages = {Stage::kSynthesize, Stage::kAttackLinkage,
                               Stage::kAttackMia, Stage::kEvaluate};

  SynthesizerOptions synth;
  LinkageConfig linkage;       // used by the linkage stage
  MiaConfig mia;               // used by the MIA stage
  std::size_t mia_target_row = 0;
  EvalProtocol eval;
};

// Outcome of validate_config: the parsed config plus every problem found.
// errors block the run; warnings (unknown keys) do not.
struct ConfigValidation {
  RunConfig config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Parses and checks a config document, collecting all violations instead of
// stopping at the first. I/O problems surface as a single error entry.
ConfigValidation validate_config_text(const std::string& json_text);
ConfigValidation validate_config_file(const std::string& path);

struct StageRecord {
  std::string stage;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<std::string> artifacts;  // paths relative to output_dir
};

struct RunManifest {
  std::string version;
  std::string config_echo;  // canonical JSON of the effective config
  std::vector<StageRecord> records;
};

// Executes the configured stages for every (epsilon, seed) cell, laying out
// artifacts under output_dir/eps_<zero-padded>/seed_<s>/. Synthesis
// failures mark dependent stages for that cell as skipped. The manifest
// (manifest.json) is fully deterministic; wall-clock timings go to a
// separate timings.json so re-runs stay byte-identical. Returns the
// manifest; overall success = every executed record ok.
RunManifest run_pipeline(const RunConfig& config);

bool pipeline_ok(const RunManifest& manifest);

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace dpsynth

#endif  // DPSYNTH_PIPELINE_HPP_
