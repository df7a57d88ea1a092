#pragma once

#include <optional>
#include <string>

#include "sgvqa/evaluation.hpp"
#include "sgvqa/executor_prob.hpp"
#include "sgvqa/perception.hpp"
#include "sgvqa/question_gen.hpp"
#include "sgvqa/sampler.hpp"

namespace sgvqa {

/// Tool-wide configuration loaded from --config (all fields optional);
/// compiled defaults apply otherwise. Flags override config values.
struct ToolConfig {
  Vocabulary vocab = Vocabulary::builtin();
  double co_peak = 0.8;        // peaked-row mass for co-1/co-2
  double head_cut = 0.5;       // head/tail split fraction
  PlacementConfig placement;
  Json raw = Json::object();

  static ToolConfig load(const std::string& path);  // empty path -> defaults
};

struct GenerateOptions {
  std::string out_dir = ".";
  int num_scenes = 100;
  VisualVariant visual = VisualVariant::Mid;
  DistVariant dist = DistVariant::Bal;
  CoVariant comp = CoVariant::Co0;
  Redundancy redundancy = Redundancy::Default;
  int questions_object = 10;
  int questions_part = 10;
  std::string split = "train";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string templates_file;  // optional override of the builtin inventory
};

struct GenerateResult {
  std::string scenes_path;
  std::string questions_path;
  int num_scenes = 0;
  int num_questions = 0;
};

GenerateResult run_generate(const GenerateOptions& opts, const ToolConfig& config);

struct PerturbOptions {
  std::string scenes_path;
  std::string out_dir = ".";
  NoiseConfig noise;
  std::uint64_t seed = 0;
};

std::string run_perturb(const PerturbOptions& opts, const ToolConfig& config);

enum class ExecMode { Det, Prob, DetHardened };
const char* exec_mode_name(ExecMode m);
ExecMode exec_mode_from_name(const std::string& name);

struct ExecuteOptions {
  ExecMode mode = ExecMode::Det;
  std::string questions_path;
  std::string scenes_path;     // det mode
  std::string perceived_path;  // prob / det-hardened modes
  std::string out_dir = ".";
  ProbExecConfig prob;
};

std::string run_execute(const ExecuteOptions& opts, const ToolConfig& config);

struct EvaluateOptions {
  std::string predictions_path;  // single-pair mode
  std::string gold_path;
  std::string grid_manifest_path;  // grid mode
  std::string out_dir = ".";
};

struct EvaluateResult {
  std::string report_json_path;
  std::string report_text_path;
  double accuracy = -1.0;            // single-pair mode
  double rd_percent = 0.0;           // grid mode
};

EvaluateResult run_evaluate(const EvaluateOptions& opts, const ToolConfig& config);

/// Every subcommand writes resolved-config provenance next to its outputs.
void write_provenance(const std::string& out_dir, const std::string& command,
                      const Json& resolved);

}  // namespace sgvqa
