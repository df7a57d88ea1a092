#include <CLI11.hpp>

#include <cstdio>

#include "sgvqa/pipeline.hpp"

using namespace sgvqa;

namespace {

// Exit codes: 0 success, 2 configuration/usage errors, 3 data errors.
constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::InvalidParameter:
      return kConfigExit;
    default:
      return kDataExit;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scene-graph question generation and symbolic execution toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config overriding compiled defaults");
  app.add_option("--seed", seed, "master seed (64-bit)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads (output is identical for any value)");

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "sample scenes and questions");
  GenerateOptions gopts;
  std::string gen_visual = "mid", gen_dist = "bal", gen_comp = "co-0", gen_rd = "rd";
  std::string questions_per_scene = "object=10,part=10";
  gen->add_option("--num-scenes", gopts.num_scenes, "number of scenes");
  gen->add_option("--visual", gen_visual, "easy|mid|hard")
      ->check(CLI::IsMember({"easy", "mid", "hard"}));
  gen->add_option("--dist", gen_dist, "bal|slt|long|head|tail|oppo")
      ->check(CLI::IsMember({"bal", "slt", "long", "head", "tail", "oppo"}));
  gen->add_option("--comp", gen_comp, "co-0|co-1|co-2")
      ->check(CLI::IsMember({"co-0", "co-1", "co-2"}));
  gen->add_option("--redundancy", gen_rd, "rd-|rd|rd+")
      ->check(CLI::IsMember({"rd-", "rd", "rd+"}));
  gen->add_option("--questions-per-scene", questions_per_scene, "object=N,part=M");
  gen->add_option("--split", gopts.split, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}));
  gen->add_option("--templates", gopts.templates_file, "template definitions file");

  // perturb ----------------------------------------------------------------
  auto* pert = app.add_subcommand("perturb", "simulate noisy perception over scenes");
  PerturbOptions popts;
  pert->add_option("--scenes", popts.scenes_path, "scene file")->required();
  pert->add_option("--epsilon", popts.noise.epsilon, "attribute smoothing mass in [0,1)");
  pert->add_option("--confusion-scale", popts.noise.confusion_scale,
                   "peak misplacement probability = scale * epsilon");
  pert->add_option("--pos-sigma", popts.noise.position_sigma, "center jitter (scene units)");
  pert->add_option("--miss", popts.noise.miss_rate, "probability a detection is dropped");
  pert->add_option("--spurious", popts.noise.spurious_rate,
                   "expected spurious detections per scene");

  // execute ------------------------------------------------------------------
  auto* exec = app.add_subcommand("execute", "run a symbolic executor over questions");
  ExecuteOptions eopts;
  std::string exec_mode = "det", relation_mode = "hard", query_rule = "joint-argmax";
  exec->add_option("--mode", exec_mode, "det|prob|det-hardened")
      ->check(CLI::IsMember({"det", "prob", "det-hardened"}));
  exec->add_option("--questions", eopts.questions_path, "question file")->required();
  exec->add_option("--scenes", eopts.scenes_path, "ground-truth scenes (det mode)");
  exec->add_option("--perceived", eopts.perceived_path,
                   "perceived scenes (prob / det-hardened)");
  exec->add_option("--threshold", eopts.prob.select_threshold,
                   "count/exist selection threshold (strict >)");
  exec->add_option("--relate-a", eopts.prob.relate_a, "soft relation offset");
  exec->add_option("--relate-b", eopts.prob.relate_b, "soft relation sharpness");
  exec->add_option("--relation-mode", relation_mode, "soft|hard")
      ->check(CLI::IsMember({"soft", "hard"}));
  exec->add_option("--query-rule", query_rule, "joint-argmax|expected-sum")
      ->check(CLI::IsMember({"joint-argmax", "expected-sum"}));

  // evaluate -----------------------------------------------------------------
  auto* eval = app.add_subcommand("evaluate", "score predictions or build a degrade report");
  EvaluateOptions vopts;
  eval->add_option("--pred", vopts.predictions_path, "prediction file");
  eval->add_option("--gold", vopts.gold_path, "gold question file");
  eval->add_option("--grid", vopts.grid_manifest_path, "grid manifest file");

  CLI11_PARSE(app, argc, argv);

  try {
    const ToolConfig config = ToolConfig::load(config_path);

    if (gen->parsed()) {
      gopts.out_dir = out_dir;
      gopts.seed = seed;
      gopts.jobs = jobs;
      gopts.visual = visual_variant_from_name(gen_visual);
      gopts.dist = dist_variant_from_name(gen_dist);
      gopts.comp = co_variant_from_name(gen_comp);
      gopts.redundancy = redundancy_from_name(gen_rd);
      if (std::sscanf(questions_per_scene.c_str(), "object=%d,part=%d",
                      &gopts.questions_object, &gopts.questions_part) != 2)
        throw Error(ErrorKind::Config, "--questions-per-scene must look like object=10,part=10");
      const GenerateResult r = run_generate(gopts, config);
      std::printf("wrote %d scenes to %s\n", r.num_scenes, r.scenes_path.c_str());
      std::printf("wrote %d questions to %s\n", r.num_questions, r.questions_path.c_str());
    } else if (pert->parsed()) {
      popts.out_dir = out_dir;
      popts.seed = seed;
      const std::string path = run_perturb(popts, config);
      std::printf("wrote perceived scenes to %s\n", path.c_str());
    } else if (exec->parsed()) {
      eopts.out_dir = out_dir;
      eopts.mode = exec_mode_from_name(exec_mode);
      eopts.prob.relation_mode =
          relation_mode == "soft" ? RelationMode::Soft : RelationMode::Hard;
      eopts.prob.query_rule =
          query_rule == "expected-sum" ? QueryRule::ExpectedSum : QueryRule::JointArgmax;
      const std::string path = run_execute(eopts, config);
      std::printf("wrote predictions to %s\n", path.c_str());
    } else if (eval->parsed()) {
      vopts.out_dir = out_dir;
      const EvaluateResult r = run_evaluate(vopts, config);
      if (r.accuracy >= 0.0)
        std::printf("accuracy: %.4f\n", r.accuracy);
      else
        std::printf("relative degrade: %.3f%%\n", r.rd_percent);
      std::printf("report: %s\n", r.report_json_path.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDataExit;
  }
  return 0;
}
