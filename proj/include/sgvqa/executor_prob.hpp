#pragma once

#include <string>
#include <vector>

#include "sgvqa/perceived.hpp"
#include "sgvqa/program.hpp"

namespace sgvqa {

enum class RelationMode { Soft, Hard };
enum class QueryRule { JointArgmax, ExpectedSum };

/// Knobs of the probabilistic executor. The relation offset/sharpness feed
/// the soft-relate sigmoid sigma(b * (delta + a)); count/exist select
/// objects with probability strictly above select_threshold.
struct ProbExecConfig {
  double relate_a = 20.0;
  double relate_b = 0.02;
  double select_threshold = 0.7;
  RelationMode relation_mode = RelationMode::Hard;
  QueryRule query_rule = QueryRule::JointArgmax;

  void validate() const;
};

/// Selection probabilities over the detections, one entry per detected
/// object; all values stay in [0, 1].
using ProbState = std::vector<double>;

/// Per-op rules. Each is pure; `state` arguments are selection vectors
/// aligned with pscene.detections.

ProbState op_scene(const PerceivedScene& pscene);
ProbState op_filter(const ProbState& state, const PerceivedScene& pscene,
                    const Vocabulary& vocab, Axis axis, const std::string& value);
ProbState op_filter_category(const ProbState& state, const PerceivedScene& pscene,
                             const Vocabulary& vocab, const std::string& category);
ProbState op_relate(int anchor, const PerceivedScene& pscene, Relation relation,
                    const ProbExecConfig& cfg);
ProbState op_same(int anchor, const PerceivedScene& pscene, Axis axis);
ProbState op_intersect(const ProbState& a, const ProbState& b);
ProbState op_union(const ProbState& a, const ProbState& b);

struct Selected {
  int index = -1;
  double confidence = 0.0;
};
/// Argmax selection with lowest-index tie break; errors on an empty state.
Selected op_unique_select(const ProbState& state);

int op_count(const ProbState& state, const ProbExecConfig& cfg);
bool op_exist(const ProbState& state, const ProbExecConfig& cfg);

/// Answer attribute under the configured rule:
///   joint-argmax:  argmax_v max_k p[k] * P_k(v)
///   expected-sum:  argmax_v sum_k p[k] * P_k(v)
std::string op_query(const ProbState& state, const PerceivedScene& pscene,
                     const Vocabulary& vocab, Axis axis, const ProbExecConfig& cfg);

/// Interprets a typechecked program over likelihood tables. Same structured
/// errors as the per-op rules; never inspects ground truth.
Answer execute_prob(const Program& program, const PerceivedScene& pscene,
                    const Vocabulary& vocab, const ProbExecConfig& cfg = {});

}  // namespace sgvqa
