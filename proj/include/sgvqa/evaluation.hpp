#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgvqa/jsonio.hpp"
#include "sgvqa/question_gen.hpp"

namespace sgvqa {

struct Prediction {
  int question_index = -1;
  int scene_id = -1;
  std::optional<Answer> answer;  // empty when execution failed
  std::string error;             // structured error name when it did
};

Json predictions_file_json(const std::vector<Prediction>& predictions,
                           const Json& info_extra = Json::object());
std::vector<Prediction> predictions_from_file(const std::string& path);

struct ScoreResult {
  int correct = 0;
  int total = 0;
  std::map<std::string, std::pair<int, int>> per_family;  // family -> (correct, total)

  double accuracy() const { return total == 0 ? 0.0 : double(correct) / total; }
};

/// Exact-match accuracy; attribute answers compare case-normalized, integer
/// and boolean answers compare exactly. Predictions and gold align by
/// question index; any mismatch is an alignment error.
ScoreResult score(const std::vector<Prediction>& predictions,
                  const std::vector<QuestionRecord>& gold);

enum class Factor { Visual, Redundancy, Distribution, Compositionality };
const char* factor_name(Factor f);
Factor factor_from_name(const std::string& name);

/// Train variants (columns) and test variants (rows) for each factor; the
/// distribution factor adds test-only head/tail/oppo rows.
std::vector<std::string> factor_train_variants(Factor f);
std::vector<std::string> factor_test_variants(Factor f);

struct AccuracyGrid {
  Factor factor = Factor::Visual;
  // cells[{train, test}] = accuracy; superscript/subscript convention:
  // A^train_test, matching column = training / row = testing layouts.
  std::map<std::pair<std::string, std::string>, double> cells;

  double at(const std::string& train, const std::string& test) const;
  bool has(const std::string& train, const std::string& test) const;
};

struct RdReport {
  Factor factor = Factor::Visual;
  double rd = 0.0;  // fraction, may be negative
  double rd_percent() const { return rd * 100.0; }
};

/// The per-factor relative-degrade formulas. Visual, redundancy and
/// compositionality average (A^t_t - A^t_u) / A^t_t over the six ordered
/// out-of-domain pairs; distribution averages the head-to-tail and
/// long-to-oppo drops over 2 * A^k_k for k in {bal, slt, long}.
RdReport relative_degrade(const AccuracyGrid& grid);

/// The caveat emitted with every grid report.
const char* rd_formula_note();

/// Grid manifest: {"factor": ..., "cells": [{"train", "test", and either
/// "accuracy" or "predictions"+"gold" file paths}]}.
AccuracyGrid grid_from_manifest(const Json& manifest, const Vocabulary& vocab,
                                const std::string& base_dir = "");

Json grid_report_json(const AccuracyGrid& grid);
std::string grid_report_text(const AccuracyGrid& grid);

}  // namespace sgvqa
