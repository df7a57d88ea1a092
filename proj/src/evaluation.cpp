#include "sgvqa/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "sgvqa/errors.hpp"

namespace sgvqa {

Json predictions_file_json(const std::vector<Prediction>& predictions, const Json& info_extra) {
  Json j;
  Json info;
  info["format_version"] = kFormatVersion;
  info["tool"] = kToolName;
  info["version"] = kToolVersion;
  for (auto it = info_extra.begin(); it != info_extra.end(); ++it) info[it.key()] = it.value();
  j["info"] = info;
  Json arr = Json::array();
  for (const auto& p : predictions) {
    Json jp;
    jp["question_index"] = p.question_index;
    jp["image_index"] = p.scene_id;
    jp["answer"] = p.answer ? p.answer->to_json() : Json(nullptr);
    if (!p.error.empty()) jp["error"] = p.error;
    arr.push_back(jp);
  }
  j["predictions"] = arr;
  return j;
}

std::vector<Prediction> predictions_from_file(const std::string& path) {
  const Json j = load_json_file(path);
  if (!j.contains("predictions"))
    throw Error(ErrorKind::ParseError, path + ": no predictions array");
  std::vector<Prediction> out;
  for (const auto& jp : j.at("predictions")) {
    Prediction p;
    p.question_index = jp.at("question_index").get<int>();
    p.scene_id = jp.value("image_index", -1);
    if (!jp.at("answer").is_null()) p.answer = Answer::from_json(jp.at("answer"));
    p.error = jp.value("error", std::string());
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool answers_match(const Answer& predicted, const Answer& gold) {
  if (predicted.kind != gold.kind) return false;
  switch (gold.kind) {
    case AnswerKind::Attribute:
      return lowercase(predicted.attribute) == lowercase(gold.attribute);
    case AnswerKind::Integer:
      return predicted.integer == gold.integer;
    case AnswerKind::Boolean:
      return predicted.boolean == gold.boolean;
  }
  return false;
}

}  // namespace

ScoreResult score(const std::vector<Prediction>& predictions,
                  const std::vector<QuestionRecord>& gold) {
  if (gold.empty()) throw Error(ErrorKind::Alignment, "gold file has no questions");
  if (predictions.empty()) throw Error(ErrorKind::Alignment, "prediction file is empty");
  std::map<int, const Prediction*> by_index;
  for (const auto& p : predictions) {
    if (!by_index.emplace(p.question_index, &p).second)
      throw Error(ErrorKind::Alignment,
                  "duplicate prediction for question " + std::to_string(p.question_index));
  }
  if (by_index.size() != gold.size())
    throw Error(ErrorKind::Alignment,
                "prediction count " + std::to_string(by_index.size()) +
                    " does not match gold count " + std::to_string(gold.size()));
  ScoreResult result;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto it = by_index.find(static_cast<int>(i));
    if (it == by_index.end())
      throw Error(ErrorKind::Alignment, "missing prediction for question " + std::to_string(i));
    const bool ok = it->second->answer && answers_match(*it->second->answer, gold[i].answer);
    auto& fam = result.per_family[family_name(gold[i].family)];
    fam.second += 1;
    fam.first += ok ? 1 : 0;
    result.total += 1;
    result.correct += ok ? 1 : 0;
  }
  return result;
}

const char* factor_name(Factor f) {
  switch (f) {
    case Factor::Visual: return "visual";
    case Factor::Redundancy: return "redundancy";
    case Factor::Distribution: return "distribution";
    case Factor::Compositionality: return "compositionality";
  }
  return "?";
}

Factor factor_from_name(const std::string& name) {
  for (Factor f : {Factor::Visual, Factor::Redundancy, Factor::Distribution,
                   Factor::Compositionality})
    if (name == factor_name(f)) return f;
  throw Error(ErrorKind::Config, "unknown factor " + name);
}

std::vector<std::string> factor_train_variants(Factor f) {
  switch (f) {
    case Factor::Visual: return {"easy", "mid", "hard"};
    case Factor::Redundancy: return {"rd-", "rd", "rd+"};
    case Factor::Distribution: return {"bal", "slt", "long"};
    case Factor::Compositionality: return {"co-0", "co-1", "co-2"};
  }
  return {};
}

std::vector<std::string> factor_test_variants(Factor f) {
  if (f == Factor::Distribution) return {"bal", "slt", "long", "head", "tail", "oppo"};
  return factor_train_variants(f);
}

double AccuracyGrid::at(const std::string& train, const std::string& test) const {
  const auto it = cells.find({train, test});
  if (it == cells.end())
    throw Error(ErrorKind::IncompleteGrid,
                "missing cell train=" + train + " test=" + test + " for factor " +
                    factor_name(factor));
  return it->second;
}

bool AccuracyGrid::has(const std::string& train, const std::string& test) const {
  return cells.count({train, test}) > 0;
}

RdReport relative_degrade(const AccuracyGrid& grid) {
  RdReport report;
  report.factor = grid.factor;
  if (grid.factor == Factor::Distribution) {
    double sum = 0.0;
    for (const std::string k : {"bal", "slt", "long"}) {
      const double in_domain = grid.at(k, k);
      if (in_domain == 0.0)
        throw Error(ErrorKind::InvalidParameter, "zero in-domain accuracy for " + k);
      sum += ((grid.at(k, "head") - grid.at(k, "tail")) +
              (grid.at(k, "long") - grid.at(k, "oppo"))) /
             (2.0 * in_domain);
    }
    report.rd = sum / 3.0;
    return report;
  }
  const auto variants = factor_train_variants(grid.factor);
  double sum = 0.0;
  int terms = 0;
  for (const auto& train : variants) {
    const double in_domain = grid.at(train, train);
    if (in_domain == 0.0)
      throw Error(ErrorKind::InvalidParameter, "zero in-domain accuracy for " + train);
    for (const auto& test : variants) {
      if (test == train) continue;
      sum += (in_domain - grid.at(train, test)) / in_domain;
      ++terms;
    }
  }
  report.rd = sum / terms;
  return report;
}

const char* rd_formula_note() {
  return "Note: relative degrade is evaluated exactly as defined above "
         "(superscript = training variant, subscript = testing variant). "
         "Externally published summary numbers computed from comparable "
         "accuracy tables do not in general satisfy these formulas, so this "
         "report states the formula value without any calibration.";
}

AccuracyGrid grid_from_manifest(const Json& manifest, const Vocabulary& vocab,
                                const std::string& base_dir) {
  AccuracyGrid grid;
  grid.factor = factor_from_name(manifest.at("factor").get<std::string>());
  const std::string prefix = base_dir.empty() ? "" : base_dir + "/";
  for (const auto& cell : manifest.at("cells")) {
    const std::string train = cell.at("train").get<std::string>();
    const std::string test = cell.at("test").get<std::string>();
    double accuracy;
    if (cell.contains("accuracy")) {
      accuracy = cell.at("accuracy").get<double>();
    } else {
      const auto preds = predictions_from_file(prefix + cell.at("predictions").get<std::string>());
      const auto gold = questions_from_file(prefix + cell.at("gold").get<std::string>(), vocab);
      accuracy = score(preds, gold).accuracy();
    }
    if (accuracy < 0.0 || accuracy > 1.0)
      throw Error(ErrorKind::InvalidParameter, "accuracy outside [0,1] for cell " + train + "/" +
                                                   test);
    grid.cells[{train, test}] = accuracy;
  }
  // Completeness check up front so partial grids fail loudly.
  for (const auto& train : factor_train_variants(grid.factor))
    for (const auto& test : factor_test_variants(grid.factor)) grid.at(train, test);
  return grid;
}

Json grid_report_json(const AccuracyGrid& grid) {
  const RdReport rd = relative_degrade(grid);
  Json j;
  j["info"] = {{"format_version", kFormatVersion}, {"tool", kToolName}, {"version", kToolVersion}};
  j["factor"] = factor_name(grid.factor);
  j["train_variants"] = factor_train_variants(grid.factor);
  j["test_variants"] = factor_test_variants(grid.factor);
  Json cells = Json::array();
  for (const auto& test : factor_test_variants(grid.factor))
    for (const auto& train : factor_train_variants(grid.factor)) {
      Json c;
      c["train"] = train;
      c["test"] = test;
      c["accuracy"] = grid.at(train, test);
      cells.push_back(c);
    }
  j["cells"] = cells;
  j["relative_degrade_percent"] = rd.rd_percent();
  j["note"] = rd_formula_note();
  return j;
}

std::string grid_report_text(const AccuracyGrid& grid) {
  const RdReport rd = relative_degrade(grid);
  std::ostringstream out;
  out << "factor: " << factor_name(grid.factor) << "\n";
  out << "columns = training variant, rows = testing variant\n\n";
  char buf[64];
  out << "          ";
  for (const auto& train : factor_train_variants(grid.factor)) {
    std::snprintf(buf, sizeof(buf), "%10s", train.c_str());
    out << buf;
  }
  out << "\n";
  for (const auto& test : factor_test_variants(grid.factor)) {
    std::snprintf(buf, sizeof(buf), "%-10s", test.c_str());
    out << buf;
    for (const auto& train : factor_train_variants(grid.factor)) {
      std::snprintf(buf, sizeof(buf), "%10.4f", grid.at(train, test));
      out << buf;
    }
    out << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%.3f%%", rd.rd_percent());
  out << "\nrelative degrade: " << buf << "\n\n" << rd_formula_note() << "\n";
  return out.str();
}

}  // namespace sgvqa
