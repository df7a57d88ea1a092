#include "sgvqa/pipeline.hpp"

#include <filesystem>
#include <thread>

#include "sgvqa/errors.hpp"
#include "sgvqa/scene_io.hpp"

namespace sgvqa {

ToolConfig ToolConfig::load(const std::string& path) {
  ToolConfig cfg;
  if (path.empty()) return cfg;
  const Json j = load_json_file(path);
  cfg.raw = j;
  cfg.vocab = Vocabulary::from_config(j);
  if (j.contains("generation")) {
    const Json& g = j.at("generation");
    cfg.co_peak = g.value("co_peak", cfg.co_peak);
    cfg.head_cut = g.value("head_cut", cfg.head_cut);
    cfg.placement.margin = g.value("margin", cfg.placement.margin);
    cfg.placement.plane_half = g.value("plane_half", cfg.placement.plane_half);
    cfg.placement.max_retries = g.value("placement_retries", cfg.placement.max_retries);
  }
  return cfg;
}

void write_provenance(const std::string& out_dir, const std::string& command,
                      const Json& resolved) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["resolved_config"] = resolved;
  j["config_digest"] = json_digest(resolved);
  write_json_file(out_dir + "/provenance_" + command + ".json", j);
}

namespace {

std::uint64_t split_seed(std::uint64_t master, const std::string& split) {
  std::uint64_t tag = 0;
  if (split == "train") tag = 1;
  else if (split == "val") tag = 2;
  else if (split == "test") tag = 3;
  else throw Error(ErrorKind::Config, "split must be train, val, or test");
  return mix64(master, tag);
}

}  // namespace

GenerateResult run_generate(const GenerateOptions& opts, const ToolConfig& config) {
  const Vocabulary& vocab = config.vocab;
  if (opts.num_scenes < 1) throw Error(ErrorKind::Config, "num-scenes must be positive");
  if (opts.dist != DistVariant::Bal && opts.comp != CoVariant::Co0)
    throw Error(ErrorKind::Config,
                "--dist and --comp both control colors; use --comp with --dist bal "
                "(compositionality owns colors when set)");

  GenConfig gen;
  gen.visual = opts.visual;
  gen.shape_dist = variant_distribution(opts.dist, Axis::Shape, vocab, config.head_cut);
  gen.color_dist = variant_distribution(opts.dist, Axis::Color, vocab, config.head_cut);
  gen.material_dist = variant_distribution(opts.dist, Axis::Material, vocab, config.head_cut);
  if (opts.comp != CoVariant::Co0) gen.co_matrix = co_matrix(opts.comp, vocab, config.co_peak);
  gen.placement = config.placement;
  gen.seed = split_seed(opts.seed, opts.split);

  Json resolved;
  resolved["num_scenes"] = opts.num_scenes;
  resolved["visual"] = visual_variant_name(opts.visual);
  resolved["dist"] = dist_variant_name(opts.dist);
  resolved["comp"] = co_variant_name(opts.comp);
  resolved["redundancy"] = redundancy_name(opts.redundancy);
  resolved["questions_per_scene"] =
      Json{{"object", opts.questions_object}, {"part", opts.questions_part}};
  resolved["split"] = opts.split;
  resolved["seed"] = opts.seed;
  resolved["split_seed"] = gen.seed;
  resolved["jobs"] = opts.jobs;
  resolved["co_peak"] = config.co_peak;
  resolved["head_cut"] = config.head_cut;
  resolved["placement"] = Json{{"margin", config.placement.margin},
                               {"plane_half", config.placement.plane_half},
                               {"max_retries", config.placement.max_retries}};
  resolved["templates"] = opts.templates_file.empty() ? "builtin" : opts.templates_file;
  gen.config_digest = json_digest(resolved);

  const std::vector<Template> templates = opts.templates_file.empty()
                                              ? builtin_templates()
                                              : templates_from_file(opts.templates_file);
  const QuestionCounts counts{opts.questions_object, opts.questions_part};

  std::vector<Scene> scenes(opts.num_scenes);
  std::vector<std::vector<QuestionRecord>> questions(opts.num_scenes);

  // Deterministic regardless of the worker count: every scene id derives
  // its own random streams and lands in its own slot.
  auto produce = [&](int scene_id) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt >= 16)
        throw Error(ErrorKind::TemplateExhausted,
                    "scene " + std::to_string(scene_id) + " kept failing generation");
      Scene scene;
      try {
        scene = sample_scene(gen, vocab, scene_id, attempt);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::PlacementExhausted) continue;
        throw;
      }
      Rng qrng = derive_rng(gen.seed, static_cast<std::uint64_t>(scene_id), Stream::Questions,
                            attempt);
      try {
        questions[scene_id] =
            generate_for_scene(scene, templates, counts, opts.redundancy, vocab, qrng);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::TemplateExhausted) continue;
        throw;
      }
      scenes[scene_id] = std::move(scene);
      return;
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    for (int id = 0; id < opts.num_scenes; ++id) produce(id);
  } else {
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int id = w; id < opts.num_scenes; id += jobs) produce(id);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::filesystem::create_directories(opts.out_dir);
  Json info_extra;
  info_extra["split"] = opts.split;
  info_extra["seed"] = opts.seed;
  info_extra["visual"] = visual_variant_name(opts.visual);
  info_extra["dist"] = dist_variant_name(opts.dist);
  info_extra["comp"] = co_variant_name(opts.comp);
  info_extra["redundancy"] = redundancy_name(opts.redundancy);
  info_extra["config_digest"] = gen.config_digest;

  GenerateResult result;
  result.scenes_path = opts.out_dir + "/scenes.json";
  result.questions_path = opts.out_dir + "/questions.json";
  write_json_file(result.scenes_path, scenes_file_json(scenes, vocab, info_extra));

  std::vector<QuestionRecord> flat;
  for (const auto& per_scene : questions)
    flat.insert(flat.end(), per_scene.begin(), per_scene.end());
  write_json_file(result.questions_path, questions_file_json(flat, info_extra));
  write_provenance(opts.out_dir, "generate", resolved);

  result.num_scenes = opts.num_scenes;
  result.num_questions = static_cast<int>(flat.size());
  return result;
}

std::string run_perturb(const PerturbOptions& opts, const ToolConfig& config) {
  const Vocabulary& vocab = config.vocab;
  NoiseConfig noise = opts.noise;
  noise.seed = opts.seed;
  noise.plane_half = config.placement.plane_half;
  noise.validate();

  const auto scenes = scenes_from_file(opts.scenes_path, vocab);
  std::vector<PerceivedScene> perceived;
  perceived.reserve(scenes.size());
  for (const auto& scene : scenes) perceived.push_back(perceive(scene, noise, vocab));

  Json resolved;
  resolved["scenes"] = opts.scenes_path;
  resolved["epsilon"] = noise.epsilon;
  resolved["confusion_scale"] = noise.confusion_scale;
  resolved["position_sigma"] = noise.position_sigma;
  resolved["miss_rate"] = noise.miss_rate;
  resolved["spurious_rate"] = noise.spurious_rate;
  resolved["seed"] = opts.seed;

  Json info_extra;
  info_extra["noise"] = resolved;

  std::filesystem::create_directories(opts.out_dir);
  const std::string path = opts.out_dir + "/perceived.json";
  write_json_file(path, perceived_file_json(perceived, info_extra));
  write_provenance(opts.out_dir, "perturb", resolved);
  return path;
}

const char* exec_mode_name(ExecMode m) {
  switch (m) {
    case ExecMode::Det: return "det";
    case ExecMode::Prob: return "prob";
    case ExecMode::DetHardened: return "det-hardened";
  }
  return "?";
}

ExecMode exec_mode_from_name(const std::string& name) {
  if (name == "det") return ExecMode::Det;
  if (name == "prob") return ExecMode::Prob;
  if (name == "det-hardened") return ExecMode::DetHardened;
  throw Error(ErrorKind::Config, "unknown execution mode " + name);
}

namespace {

template <typename SceneMap>
std::vector<Prediction> execute_batch(const std::vector<QuestionRecord>& questions,
                                      SceneMap&& answer_one) {
  std::vector<Prediction> predictions;
  predictions.reserve(questions.size());
  for (std::size_t i = 0; i < questions.size(); ++i) {
    Prediction p;
    p.question_index = static_cast<int>(i);
    p.scene_id = questions[i].scene_id;
    try {
      p.answer = answer_one(questions[i]);
    } catch (const Error& e) {
      p.error = error_kind_name(e.kind());
    }
    predictions.push_back(std::move(p));
  }
  return predictions;
}

}  // namespace

std::string run_execute(const ExecuteOptions& opts, const ToolConfig& config) {
  const Vocabulary& vocab = config.vocab;
  if (opts.questions_path.empty()) throw Error(ErrorKind::Config, "--questions is required");
  const auto questions = questions_from_file(opts.questions_path, vocab);

  std::vector<Prediction> predictions;
  if (opts.mode == ExecMode::Det) {
    if (opts.scenes_path.empty())
      throw Error(ErrorKind::Config, "det mode reads ground-truth scenes via --scenes");
    const auto scenes = scenes_from_file(opts.scenes_path, vocab);
    std::map<int, const Scene*> by_id;
    for (const auto& s : scenes) by_id[s.scene_id] = &s;
    predictions = execute_batch(questions, [&](const QuestionRecord& q) {
      const auto it = by_id.find(q.scene_id);
      if (it == by_id.end())
        throw Error(ErrorKind::Alignment, "no scene " + std::to_string(q.scene_id));
      return execute(q.program, *it->second, vocab);
    });
  } else {
    if (opts.perceived_path.empty())
      throw Error(ErrorKind::Config, "prob and det-hardened modes read --perceived");
    const auto perceived = perceived_from_file(opts.perceived_path, vocab);
    std::map<int, const PerceivedScene*> by_id;
    for (const auto& p : perceived) by_id[p.scene_id] = &p;
    if (opts.mode == ExecMode::Prob) {
      opts.prob.validate();
      predictions = execute_batch(questions, [&](const QuestionRecord& q) {
        const auto it = by_id.find(q.scene_id);
        if (it == by_id.end())
          throw Error(ErrorKind::Alignment, "no perceived scene " + std::to_string(q.scene_id));
        return execute_prob(q.program, *it->second, vocab, opts.prob);
      });
    } else {
      std::map<int, Scene> hardened;
      for (const auto& [id, pscene] : by_id) hardened.emplace(id, harden(*pscene, vocab));
      predictions = execute_batch(questions, [&](const QuestionRecord& q) {
        const auto it = hardened.find(q.scene_id);
        if (it == hardened.end())
          throw Error(ErrorKind::Alignment, "no perceived scene " + std::to_string(q.scene_id));
        return execute(q.program, it->second, vocab);
      });
    }
  }

  Json resolved;
  resolved["mode"] = exec_mode_name(opts.mode);
  resolved["questions"] = opts.questions_path;
  resolved["scenes"] = opts.scenes_path;
  resolved["perceived"] = opts.perceived_path;
  resolved["select_threshold"] = opts.prob.select_threshold;
  resolved["relate_a"] = opts.prob.relate_a;
  resolved["relate_b"] = opts.prob.relate_b;
  resolved["relation_mode"] =
      opts.prob.relation_mode == RelationMode::Soft ? "soft" : "hard";
  resolved["query_rule"] =
      opts.prob.query_rule == QueryRule::JointArgmax ? "joint-argmax" : "expected-sum";

  Json info_extra;
  info_extra["executor"] = resolved;

  std::filesystem::create_directories(opts.out_dir);
  const std::string path = opts.out_dir + "/predictions.json";
  write_json_file(path, predictions_file_json(predictions, info_extra));
  write_provenance(opts.out_dir, "execute", resolved);
  return path;
}

EvaluateResult run_evaluate(const EvaluateOptions& opts, const ToolConfig& config) {
  const Vocabulary& vocab = config.vocab;
  EvaluateResult result;
  std::filesystem::create_directories(opts.out_dir);

  Json resolved;
  resolved["predictions"] = opts.predictions_path;
  resolved["gold"] = opts.gold_path;
  resolved["grid"] = opts.grid_manifest_path;

  if (!opts.grid_manifest_path.empty()) {
    const Json manifest = load_json_file(opts.grid_manifest_path);
    const std::string base =
        std::filesystem::path(opts.grid_manifest_path).parent_path().string();
    const AccuracyGrid grid = grid_from_manifest(manifest, vocab, base);
    const Json report = grid_report_json(grid);
    result.rd_percent = report.at("relative_degrade_percent").get<double>();
    result.report_json_path = opts.out_dir + "/report.json";
    result.report_text_path = opts.out_dir + "/report.txt";
    write_json_file(result.report_json_path, report);
    std::ofstream text(result.report_text_path);
    text << grid_report_text(grid);
  } else {
    if (opts.predictions_path.empty() || opts.gold_path.empty())
      throw Error(ErrorKind::Config, "evaluate needs --grid or both --pred and --gold");
    const auto predictions = predictions_from_file(opts.predictions_path);
    const auto gold = questions_from_file(opts.gold_path, vocab);
    const ScoreResult s = score(predictions, gold);
    result.accuracy = s.accuracy();
    Json report;
    report["info"] = {{"format_version", kFormatVersion},
                      {"tool", kToolName},
                      {"version", kToolVersion}};
    report["accuracy"] = s.accuracy();
    report["correct"] = s.correct;
    report["total"] = s.total;
    Json per_family = Json::object();
    for (const auto& [family, counts] : s.per_family) {
      per_family[family] = Json{{"correct", counts.first},
                                {"total", counts.second},
                                {"accuracy", counts.second ? double(counts.first) / counts.second
                                                           : 0.0}};
    }
    report["per_family"] = per_family;
    result.report_json_path = opts.out_dir + "/report.json";
    write_json_file(result.report_json_path, report);
  }
  write_provenance(opts.out_dir, "evaluate", resolved);
  return result;
}

}  // namespace sgvqa
