#include "sgvqa/executor_prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>

#include "sgvqa/errors.hpp"

namespace sgvqa {

void ProbExecConfig::validate() const {
  if (relate_b <= 0.0)
    throw Error(ErrorKind::InvalidParameter, "relation sharpness must be positive");
  if (select_threshold <= 0.0 || select_threshold >= 1.0)
    throw Error(ErrorKind::InvalidParameter, "selection threshold must be in (0,1)");
}

ProbState op_scene(const PerceivedScene& pscene) {
  return ProbState(pscene.detections.size(), 1.0);
}

namespace {

double table_prob(const std::vector<double>& table, int index) {
  if (table.empty()) return 0.0;  // absent axis (e.g. texture) never matches
  return table[index];
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

ProbState op_filter(const ProbState& state, const PerceivedScene& pscene,
                    const Vocabulary& vocab, Axis axis, const std::string& value) {
  const int idx = vocab.index_of(axis, value);
  if (idx < 0)
    throw Error(ErrorKind::InvalidLiteral,
                std::string("unknown ") + axis_name(axis) + " " + value);
  ProbState out(state.size());
  for (std::size_t k = 0; k < state.size(); ++k)
    out[k] = state[k] * table_prob(pscene.detections[k].probs.table(axis), idx);
  return out;
}

ProbState op_filter_category(const ProbState& state, const PerceivedScene& pscene,
                             const Vocabulary& vocab, const std::string& category) {
  if (!vocab.is_category(category))
    throw Error(ErrorKind::InvalidLiteral, "unknown category " + category);
  // Category likelihood is the total probability of its member shapes.
  std::vector<int> members;
  for (int s = 0; s < vocab.axis_size(Axis::Shape); ++s)
    if (vocab.category_of(vocab.shapes()[s]) == category) members.push_back(s);
  ProbState out(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    double mass = 0.0;
    for (int s : members) mass += table_prob(pscene.detections[k].probs.shape, s);
    out[k] = state[k] * mass;
  }
  return out;
}

ProbState op_relate(int anchor, const PerceivedScene& pscene, Relation relation,
                    const ProbExecConfig& cfg) {
  const Detection& a = pscene.detections.at(anchor);
  ProbState out(pscene.detections.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (static_cast<int>(k) == anchor) continue;
    const Detection& d = pscene.detections[k];
    double offset = 0.0;
    switch (relation) {
      case Relation::Front: offset = d.y - a.y; break;
      case Relation::Behind: offset = a.y - d.y; break;
      case Relation::Right: offset = d.x - a.x; break;
      case Relation::Left: offset = a.x - d.x; break;
    }
    if (cfg.relation_mode == RelationMode::Soft)
      out[k] = sigmoid(cfg.relate_b * (offset + cfg.relate_a));
    else
      out[k] = offset > 0.0 ? 1.0 : 0.0;
  }
  return out;
}

ProbState op_same(int anchor, const PerceivedScene& pscene, Axis axis) {
  const std::vector<double>& ref = pscene.detections.at(anchor).probs.table(axis);
  ProbState out(pscene.detections.size(), 0.0);
  const double ref_norm = std::sqrt(
      std::inner_product(ref.begin(), ref.end(), ref.begin(), 0.0));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (static_cast<int>(k) == anchor) continue;
    const std::vector<double>& t = pscene.detections[k].probs.table(axis);
    if (t.empty() || ref.empty()) continue;
    const double dot = std::inner_product(t.begin(), t.end(), ref.begin(), 0.0);
    const double norm = std::sqrt(std::inner_product(t.begin(), t.end(), t.begin(), 0.0));
    out[k] = (norm > 0.0 && ref_norm > 0.0) ? dot / (norm * ref_norm) : 0.0;
  }
  return out;
}

ProbState op_intersect(const ProbState& a, const ProbState& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::LengthMismatch, "intersect over different lengths");
  ProbState out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

ProbState op_union(const ProbState& a, const ProbState& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::LengthMismatch, "union over different lengths");
  ProbState out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = 1.0 - (1.0 - a[k]) * (1.0 - b[k]);
  return out;
}

Selected op_unique_select(const ProbState& state) {
  if (state.empty()) throw Error(ErrorKind::EmptySelection, "selection over no detections");
  Selected s;
  s.index = 0;
  s.confidence = state[0];
  for (std::size_t k = 1; k < state.size(); ++k) {
    if (state[k] > s.confidence) {  // strict: ties keep the lowest index
      s.index = static_cast<int>(k);
      s.confidence = state[k];
    }
  }
  return s;
}

int op_count(const ProbState& state, const ProbExecConfig& cfg) {
  int n = 0;
  for (double p : state)
    if (p > cfg.select_threshold) ++n;
  return n;
}

bool op_exist(const ProbState& state, const ProbExecConfig& cfg) {
  return op_count(state, cfg) > 0;
}

std::string op_query(const ProbState& state, const PerceivedScene& pscene,
                     const Vocabulary& vocab, Axis axis, const ProbExecConfig& cfg) {
  if (state.empty()) throw Error(ErrorKind::EmptySelection, "query over no detections");
  bool any_table = false;
  for (const auto& d : pscene.detections)
    if (!d.probs.table(axis).empty()) any_table = true;
  if (!any_table)
    throw Error(ErrorKind::MissingTexture,
                std::string("no ") + axis_name(axis) + " tables in perceived scene");
  const int k_values = vocab.axis_size(axis);
  int best_value = 0;
  double best_score = -1.0;
  for (int v = 0; v < k_values; ++v) {
    double score = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k) {
      const double joint = state[k] * table_prob(pscene.detections[k].probs.table(axis), v);
      if (cfg.query_rule == QueryRule::JointArgmax)
        score = std::max(score, joint);
      else
        score += joint;
    }
    if (score > best_score) {
      best_score = score;
      best_value = v;
    }
  }
  return vocab.axis_values(axis)[best_value];
}

namespace {

/// Flattened part pool: one entry per (detection, part).
struct PartPool {
  std::vector<std::pair<int, int>> refs;  // (detection index, part index)

  static PartPool of(const PerceivedScene& pscene) {
    PartPool pool;
    for (std::size_t k = 0; k < pscene.detections.size(); ++k)
      for (std::size_t p = 0; p < pscene.detections[k].parts.size(); ++p)
        pool.refs.emplace_back(static_cast<int>(k), static_cast<int>(p));
    return pool;
  }
};

struct ObjSel {
  ProbState p;
};
struct PartSel {
  std::vector<double> p;  // aligned with PartPool
};

struct ProbValue {
  std::variant<ObjSel, PartSel, long, bool, std::string> v;

  const ProbState& objects() const { return std::get<ObjSel>(v).p; }
  const std::vector<double>& parts() const { return std::get<PartSel>(v).p; }
};

}  // namespace

Answer execute_prob(const Program& program, const PerceivedScene& pscene,
                    const Vocabulary& vocab, const ProbExecConfig& cfg) {
  cfg.validate();
  const ProgramTypes types = typecheck(program, vocab);
  const PartPool pool = PartPool::of(pscene);
  const int n = static_cast<int>(pscene.detections.size());

  std::vector<ProbValue> values(program.size());

  auto part_table = [&](int flat, Axis axis) -> const std::vector<double>& {
    const auto [det, pi] = pool.refs[flat];
    return pscene.detections[det].parts[pi].probs.table(axis);
  };

  // Resolves the anchor for relate/same/object_to_part from a selection
  // state that flowed through unique.
  auto resolve_anchor = [&](const ProbValue& val) -> Selected {
    return op_unique_select(val.objects());
  };

  auto query_parts = [&](const std::vector<double>& state, Axis axis) -> std::string {
    if (state.empty()) throw Error(ErrorKind::EmptySelection, "query over no detected parts");
    bool any = false;
    for (std::size_t k = 0; k < state.size(); ++k)
      if (!part_table(static_cast<int>(k), axis).empty()) any = true;
    if (!any)
      throw Error(ErrorKind::MissingTexture,
                  std::string("no part ") + axis_name(axis) + " tables");
    const int k_values = vocab.axis_size(axis);
    int best_value = 0;
    double best_score = -1.0;
    for (int v = 0; v < k_values; ++v) {
      double score = 0.0;
      for (std::size_t k = 0; k < state.size(); ++k) {
        const double joint = state[k] * table_prob(part_table(static_cast<int>(k), axis), v);
        if (cfg.query_rule == QueryRule::JointArgmax)
          score = std::max(score, joint);
        else
          score += joint;
      }
      if (score > best_score) {
        best_score = score;
        best_value = v;
      }
    }
    return vocab.axis_values(axis)[best_value];
  };

  for (int i = 0; i < program.size(); ++i) {
    const Operation& op = program.ops[i];
    const std::string& f = op.function;
    ProbValue out;

    auto in = [&](int k) -> const ProbValue& { return values[op.inputs[k]]; };
    auto in_type = [&](int k) { return types.op_types[op.inputs[k]]; };

    if (f == "scene") {
      out.v = ObjSel{op_scene(pscene)};
    } else if (f == "filter_category") {
      out.v = ObjSel{op_filter_category(in(0).objects(), pscene, vocab, op.value_inputs[0])};
    } else if (const auto axis = filter_axis(f)) {
      if (in_type(0) == ValueType::ObjectSet || in_type(0) == ValueType::Object) {
        out.v = ObjSel{op_filter(in(0).objects(), pscene, vocab, *axis, op.value_inputs[0])};
      } else {
        const int idx = vocab.index_of(*axis, op.value_inputs[0]);
        if (idx < 0)
          throw Error(ErrorKind::InvalidLiteral,
                      std::string("unknown ") + axis_name(*axis) + " " + op.value_inputs[0]);
        std::vector<double> state = in(0).parts();
        for (std::size_t k = 0; k < state.size(); ++k)
          state[k] *= table_prob(part_table(static_cast<int>(k), *axis), idx);
        out.v = PartSel{std::move(state)};
      }
    } else if (f == "filter_part_name") {
      // Part identity is crisp in the perception format; mismatches zero out.
      std::vector<double> state = in(0).parts();
      for (std::size_t k = 0; k < state.size(); ++k) {
        const auto [det, pi] = pool.refs[k];
        if (pscene.detections[det].parts[pi].name != op.value_inputs[0]) state[k] = 0.0;
      }
      out.v = PartSel{std::move(state)};
    } else if (f == "unique") {
      // Selection flows through; downstream ops either use the whole state
      // (query) or resolve an argmax anchor (relate/same/object_to_part).
      if (in_type(0) == ValueType::ObjectSet) {
        if (n == 0) throw Error(ErrorKind::EmptySelection, "unique over no detections");
        out.v = ObjSel{in(0).objects()};
      } else {
        if (pool.refs.empty())
          throw Error(ErrorKind::EmptySelection, "unique over no detected parts");
        out.v = PartSel{in(0).parts()};
      }
    } else if (f == "relate") {
      const Selected anchor = resolve_anchor(in(0));
      out.v = ObjSel{op_relate(anchor.index, pscene, *relation_from_name(op.value_inputs[0]), cfg)};
    } else if (const auto saxis = same_axis(f)) {
      const Selected anchor = resolve_anchor(in(0));
      out.v = ObjSel{op_same(anchor.index, pscene, *saxis)};
    } else if (f == "intersect") {
      out.v = ObjSel{op_intersect(in(0).objects(), in(1).objects())};
    } else if (f == "union") {
      out.v = ObjSel{op_union(in(0).objects(), in(1).objects())};
    } else if (f == "count") {
      out.v = static_cast<long>(op_count(in(0).objects(), cfg));
    } else if (f == "exist") {
      out.v = op_exist(in(0).objects(), cfg);
    } else if (const auto qaxis = query_axis(f)) {
      if (in_type(0) == ValueType::Object)
        out.v = op_query(in(0).objects(), pscene, vocab, *qaxis, cfg);
      else
        out.v = query_parts(in(0).parts(), *qaxis);
    } else if (f == "equal_integer") {
      out.v = std::get<long>(in(0).v) == std::get<long>(in(1).v);
    } else if (f == "less_than") {
      out.v = std::get<long>(in(0).v) < std::get<long>(in(1).v);
    } else if (f == "greater_than") {
      out.v = std::get<long>(in(0).v) > std::get<long>(in(1).v);
    } else if (equal_attr_axis(f)) {
      out.v = std::get<std::string>(in(0).v) == std::get<std::string>(in(1).v);
    } else if (f == "object_to_part") {
      std::vector<double> state(pool.refs.size(), 0.0);
      if (in_type(0) == ValueType::Object) {
        // Expand the resolved anchor to its parts at the anchor's probability.
        const Selected anchor = resolve_anchor(in(0));
        for (std::size_t k = 0; k < pool.refs.size(); ++k)
          if (pool.refs[k].first == anchor.index) state[k] = anchor.confidence;
      } else {
        const ProbState& objs = in(0).objects();
        for (std::size_t k = 0; k < pool.refs.size(); ++k)
          state[k] = objs[pool.refs[k].first];
      }
      out.v = PartSel{std::move(state)};
    } else if (f == "part_to_object") {
      // Each object's probability is the max over its parts.
      ProbState objs(n, 0.0);
      const std::vector<double>& parts = in(0).parts();
      for (std::size_t k = 0; k < pool.refs.size(); ++k)
        objs[pool.refs[k].first] = std::max(objs[pool.refs[k].first], parts[k]);
      out.v = ObjSel{std::move(objs)};
    } else {
      throw Error(ErrorKind::ParseError, "unhandled function " + f);
    }
    values[i] = std::move(out);
  }

  const ProbValue& sink = values[types.sink];
  const ValueType st = types.sink_type();
  if (st == ValueType::Integer) return Answer::of_integer(static_cast<int>(std::get<long>(sink.v)));
  if (st == ValueType::Boolean) return Answer::of_boolean(std::get<bool>(sink.v));
  return Answer::of_attribute(std::get<std::string>(sink.v));
}

}  // namespace sgvqa
