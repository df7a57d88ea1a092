#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgvqa/pipeline.hpp"

using namespace sgvqa;

namespace {

namespace fs = std::filesystem;

std::string tool() { return SGVQA_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd = tool() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sgvqa_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("full pipeline runs are byte-identical") {
  TempDir dir;
  auto pipeline = [&](const std::string& sub) {
    const std::string base = dir / sub;
    REQUIRE(run("--seed 11 --out " + base + " generate --num-scenes 8") == 0);
    REQUIRE(run("--seed 3 --out " + base + " perturb --scenes " + base +
                "/scenes.json --epsilon 0.3") == 0);
    REQUIRE(run("--out " + base + " execute --mode prob --questions " + base +
                "/questions.json --perceived " + base + "/perceived.json") == 0);
    REQUIRE(run("--out " + base + " evaluate --pred " + base + "/predictions.json --gold " +
                base + "/questions.json") == 0);
  };
  pipeline("a");
  pipeline("b");
  for (const char* name : {"scenes.json", "questions.json", "perceived.json",
                           "predictions.json", "report.json", "provenance_generate.json"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
    CHECK(!slurp(dir.path / "a" / name).empty());
  }
}

TEST_CASE("worker count does not change outputs") {
  TempDir dir;
  REQUIRE(run("--seed 5 --jobs 1 --out " + (dir / "j1") + " generate --num-scenes 12") == 0);
  REQUIRE(run("--seed 5 --jobs 4 --out " + (dir / "j4") + " generate --num-scenes 12") == 0);
  CHECK(slurp(dir.path / "j1" / "scenes.json") == slurp(dir.path / "j4" / "scenes.json"));
  CHECK(slurp(dir.path / "j1" / "questions.json") == slurp(dir.path / "j4" / "questions.json"));
}

TEST_CASE("conflicting dist and comp color control is a config error") {
  TempDir dir;
  CHECK(run("--out " + (dir / "x") + " generate --num-scenes 2 --dist long --comp co-1") == 2);
  CHECK(run("--out " + (dir / "y") + " generate --num-scenes 2 --dist bal --comp co-1") == 0);
}

TEST_CASE("config errors exit 2 and data errors exit 3") {
  TempDir dir;
  // unknown mode flag value -> CLI11 usage error is config-class
  CHECK(run("--out " + (dir / "a") + " execute --mode nonsense --questions q.json") != 0);
  // missing file -> data error
  CHECK(run("--out " + (dir / "b") + " execute --mode det --questions " + (dir / "missing.json") +
            " --scenes " + (dir / "missing2.json")) == 3);
  // malformed redundancy -> config error
  CHECK(run("--out " + (dir / "c") + " generate --num-scenes 0") == 2);
}

TEST_CASE("provenance records the resolved config and digest") {
  TempDir dir;
  REQUIRE(run("--seed 9 --out " + (dir / "p") + " generate --num-scenes 3 --visual hard") == 0);
  const Json prov = load_json_file(dir / "p/provenance_generate.json");
  CHECK(prov.at("command") == "generate");
  CHECK(prov.at("resolved_config").at("visual") == "hard");
  CHECK(prov.at("resolved_config").at("seed") == 9);
  CHECK(prov.at("config_digest").get<std::string>().size() == 16);
  const Json scenes = load_json_file(dir / "p/scenes.json");
  CHECK(scenes.at("info").at("format_version") == "1");
  const Json questions = load_json_file(dir / "p/questions.json");
  CHECK(questions.at("info").at("format_version") == "1");
}

TEST_CASE("zero-noise perturb writes a one-hot file") {
  TempDir dir;
  REQUIRE(run("--seed 2 --out " + (dir / "g") + " generate --num-scenes 3") == 0);
  REQUIRE(run("--seed 2 --out " + (dir / "g") + " perturb --scenes " + (dir / "g/scenes.json")) ==
          0);
  const Json perceived = load_json_file(dir / "g/perceived.json");
  for (const auto& scene : perceived.at("scenes"))
    for (const auto& det : scene.at("detections"))
      for (const auto& p : det.at("probs").at("color")) {
        const double v = p.get<double>();
        CHECK((v == 0.0 || v == 1.0));
      }
}

TEST_CASE("miss rate one empties every detection list") {
  TempDir dir;
  REQUIRE(run("--seed 2 --out " + (dir / "g") + " generate --num-scenes 2") == 0);
  REQUIRE(run("--seed 2 --out " + (dir / "m") + " perturb --scenes " + (dir / "g/scenes.json") +
              " --miss 1.0") == 0);
  const Json perceived = load_json_file(dir / "m/perceived.json");
  for (const auto& scene : perceived.at("scenes")) CHECK(scene.at("detections").empty());
}

TEST_CASE("long shape distribution shows up in generated scenes") {
  TempDir dir;
  REQUIRE(run("--seed 4 --out " + (dir / "d") + " generate --num-scenes 200 --dist long") == 0);
  const Json scenes = load_json_file(dir / "d/scenes.json");
  const Vocabulary vocab = Vocabulary::builtin();
  std::vector<int> counts(21, 0);
  int total = 0;
  for (const auto& scene : scenes.at("scenes"))
    for (const auto& o : scene.at("objects")) {
      counts[vocab.index_of(Axis::Shape, o.at("shape").get<std::string>())]++;
      ++total;
    }
  // index 0 dominates and the tail is rare under a = 2
  CHECK(counts[0] > total / 3);
  CHECK(counts[20] < total / 50);
}

TEST_CASE("custom template files drive generation") {
  TempDir dir;
  Json file;
  file["templates"] = Json::array();
  Json t;
  t["id"] = "just_count";
  t["family"] = "count";
  t["text"] = "How many <P:s> are there?";
  t["program"] = Json::array(
      {Json{{"function", "scene"}},
       Json{{"function", "%filters"}, {"inputs", Json::array({0})}, {"ref", "s"},
            {"level", "set"}},
       Json{{"function", "count"}, {"inputs", Json::array({1})}}});
  file["templates"].push_back(t);
  write_json_file(dir / "templates.json", file);
  REQUIRE(run("--seed 1 --out " + (dir / "t") + " generate --num-scenes 2 --templates " +
              (dir / "templates.json") +
              " --questions-per-scene object=4,part=0") == 0);
  const Json questions = load_json_file(dir / "t/questions.json");
  CHECK(questions.at("questions").size() == 8);
  for (const auto& q : questions.at("questions")) CHECK(q.at("template_id") == "just_count");
}
