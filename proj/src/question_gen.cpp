#include "sgvqa/question_gen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sgvqa/errors.hpp"

namespace sgvqa {

const char* redundancy_name(Redundancy r) {
  switch (r) {
    case Redundancy::Minus: return "rd-";
    case Redundancy::Default: return "rd";
    case Redundancy::Plus: return "rd+";
  }
  return "?";
}

Redundancy redundancy_from_name(const std::string& name) {
  if (name == "rd-") return Redundancy::Minus;
  if (name == "rd") return Redundancy::Default;
  if (name == "rd+") return Redundancy::Plus;
  throw Error(ErrorKind::InvalidParameter, "unknown redundancy variant " + name);
}

namespace {

bool is_filter_fn(const std::string& f) { return f.rfind("filter_", 0) == 0; }

std::vector<std::vector<int>> consumers_of(const Program& program) {
  std::vector<std::vector<int>> cons(program.size());
  for (int i = 0; i < program.size(); ++i)
    for (int in : program.ops[i].inputs) cons[in].push_back(i);
  return cons;
}

int sink_of(const Program& program) {
  std::vector<bool> used(program.size(), false);
  for (const auto& op : program.ops)
    for (int in : op.inputs) used[in] = true;
  for (int i = program.size() - 1; i >= 0; --i)
    if (!used[i]) return i;
  return program.size() - 1;
}

/// True iff every forward path from op lands in a unique before any
/// set-consuming terminal (count/exist/intersect/union/comparison).
bool paths_end_in_unique(const Program& program, const std::vector<std::vector<int>>& cons,
                         int op) {
  if (cons[op].empty()) return false;
  for (int c : cons[op]) {
    const std::string& f = program.ops[c].function;
    if (f == "unique") continue;
    if (is_filter_fn(f) || f == "object_to_part" || f == "part_to_object") {
      if (!paths_end_in_unique(program, cons, c)) return false;
      continue;
    }
    return false;
  }
  return true;
}

struct Surgery {
  Program program;
  std::vector<int> old_to_new;  // -1 for dropped ops
};

Surgery delete_filter_op(const Program& program, int idx) {
  Surgery s;
  s.old_to_new.assign(program.size(), -1);
  const int bypass = program.ops[idx].inputs.at(0);
  for (int i = 0; i < program.size(); ++i) {
    if (i == idx) continue;
    Operation op = program.ops[i];
    for (int& in : op.inputs) {
      if (in == idx) in = bypass;
      in = s.old_to_new[in];
    }
    s.old_to_new[i] = s.program.size();
    s.program.ops.push_back(std::move(op));
  }
  return s;
}

Surgery delete_relate_clause(const Program& program, int idx) {
  // Replace the relate with a fresh scene source, then drop everything the
  // sink no longer reaches (the anchor chain).
  Program patched = program;
  patched.ops[idx] = Operation{"scene", {}, {}};
  const int sink = sink_of(program);
  std::vector<bool> keep(patched.size(), false);
  std::vector<int> stack = {sink};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (keep[cur]) continue;
    keep[cur] = true;
    for (int in : patched.ops[cur].inputs) stack.push_back(in);
  }
  Surgery s;
  s.old_to_new.assign(program.size(), -1);
  for (int i = 0; i < patched.size(); ++i) {
    if (!keep[i]) continue;
    Operation op = patched.ops[i];
    for (int& in : op.inputs) in = s.old_to_new[in];
    s.old_to_new[i] = s.program.size();
    s.program.ops.push_back(std::move(op));
  }
  return s;
}

bool same_unique_resolutions(const Program& before, const ExecTrace& trace_before,
                             const ExecTrace& trace_after,
                             const std::vector<int>& old_to_new) {
  for (int i = 0; i < before.size(); ++i) {
    if (before.ops[i].function != "unique") continue;
    const int j = old_to_new[i];
    if (j < 0) continue;  // the unique itself was garbage-collected
    if (!(trace_before.values[i].v == trace_after.values[j].v)) return false;
  }
  return true;
}

}  // namespace

std::vector<RedundantSlot> redundancy_audit(const Program& program, const Scene& scene,
                                            const Vocabulary& vocab) {
  const ExecTrace base = execute_trace(program, scene, vocab);
  const auto cons = consumers_of(program);
  std::vector<RedundantSlot> slots;
  for (int i = 0; i < program.size(); ++i) {
    const std::string& f = program.ops[i].function;
    const bool filter = is_filter_fn(f);
    const bool relate = f == "relate";
    if (!filter && !relate) continue;
    if (!paths_end_in_unique(program, cons, i)) continue;
    const Surgery s = relate ? delete_relate_clause(program, i) : delete_filter_op(program, i);
    try {
      const ExecTrace after = execute_trace(s.program, scene, vocab);
      if (same_unique_resolutions(program, base, after, s.old_to_new))
        slots.push_back({i, relate});
    } catch (const Error&) {
      // deletion broke a unique: the element is load-bearing
    }
  }
  return slots;
}

Program strip_redundancy(const Program& program, const Scene& scene, const Vocabulary& vocab) {
  const Answer original = execute(program, scene, vocab);
  Program current = program;
  for (int round = 0; round < 512; ++round) {
    const auto slots = redundancy_audit(current, scene, vocab);
    if (slots.empty()) break;
    current = slots.front().is_relate
                  ? delete_relate_clause(current, slots.front().op_index).program
                  : delete_filter_op(current, slots.front().op_index).program;
  }
  if (!(execute(current, scene, vocab) == original))
    throw Error(ErrorKind::InvalidParameter, "strip_redundancy broke answer invariance");
  return current;
}

namespace {

const std::string& object_attr(const ObjectInstance& o, Axis axis) {
  static const std::string empty;
  switch (axis) {
    case Axis::Size: return o.size;
    case Axis::Color: return o.color;
    case Axis::Material: return o.material;
    case Axis::Shape: return o.shape;
    case Axis::Texture: return o.texture ? *o.texture : empty;
  }
  return empty;
}

/// Query axes read off this unique's output; those axes stay out of the
/// referent's own filter chain so the question does not state its answer.
std::set<Axis> excluded_axes_of_unique(const Program& program,
                                       const std::vector<std::vector<int>>& cons, int unique_op) {
  std::set<Axis> excluded;
  for (int c : cons[unique_op])
    if (const auto axis = query_axis(program.ops[c].function)) excluded.insert(*axis);
  return excluded;
}

bool object_unique_by_full_attrs(const Scene& scene, int id) {
  const auto& o = scene.objects[id];
  int matches = 0;
  for (const auto& other : scene.objects)
    if (other.size == o.size && other.color == o.color && other.material == o.material &&
        other.shape == o.shape && other.texture == o.texture)
      ++matches;
  return matches == 1;
}

std::vector<std::pair<std::string, std::string>> saturation_values_impl(
    const Program& program, int unique_op, const Scene& scene, const ExecTrace& trace,
    const ProgramTypes& types, const std::vector<std::vector<int>>& cons) {
  const std::set<Axis> excluded = excluded_axes_of_unique(program, cons, unique_op);
  std::vector<std::pair<std::string, std::string>> required;
  if (types.op_types[unique_op] == ValueType::Object) {
    const ObjectInstance& o = scene.objects[trace.values[unique_op].object()];
    for (Axis axis : {Axis::Size, Axis::Color, Axis::Material, Axis::Shape}) {
      if (excluded.count(axis)) continue;
      required.emplace_back(std::string("filter_") + axis_name(axis), object_attr(o, axis));
    }
    if (o.texture && !excluded.count(Axis::Texture))
      required.emplace_back("filter_texture", *o.texture);
  } else {
    const PartRef ref = trace.values[unique_op].part();
    const PartInstance& p = scene.objects[ref.first].parts[ref.second];
    required.emplace_back("filter_part_name", p.name);
    if (!excluded.count(Axis::Color)) required.emplace_back("filter_color", p.color);
    if (!excluded.count(Axis::Material)) required.emplace_back("filter_material", p.material);
  }
  return required;
}

}  // namespace

std::vector<std::string> required_saturation_values(const Program& program, int unique_op,
                                                    const Scene& scene,
                                                    const Vocabulary& vocab) {
  const ProgramTypes types = typecheck(program, vocab);
  const ExecTrace trace = execute_trace(program, scene, vocab);
  const auto cons = consumers_of(program);
  std::vector<std::string> out;
  for (const auto& [fn, value] :
       saturation_values_impl(program, unique_op, scene, trace, types, cons))
    out.push_back(fn + ":" + value);
  return out;
}

Program saturate_redundancy(const Program& program, const Scene& scene, const Vocabulary& vocab,
                            Rng& rng) {
  const ProgramTypes types = typecheck(program, vocab);
  const ExecTrace trace = execute_trace(program, scene, vocab);
  const auto cons = consumers_of(program);
  const Answer original = trace.answer;

  struct RelatePlan {
    int anchor = -1;
    Relation rel = Relation::Left;
  };
  std::map<int, std::vector<Operation>> inserts;       // unique op -> missing filters
  std::map<int, RelatePlan> scene_replacements;        // scene op -> relate construction

  for (int u = 0; u < program.size(); ++u) {
    if (program.ops[u].function != "unique") continue;
    // Existing filter run between the unique and its chain source.
    std::set<std::string> present;
    int cur = program.ops[u].inputs[0];
    while (is_filter_fn(program.ops[cur].function)) {
      present.insert(program.ops[cur].function);
      cur = program.ops[cur].inputs[0];
    }
    const int source = cur;

    std::vector<Operation> missing;
    for (const auto& [fn, value] :
         saturation_values_impl(program, u, scene, trace, types, cons)) {
      if (present.count(fn)) continue;
      missing.push_back(Operation{fn, {}, {value}});
    }
    if (!missing.empty()) inserts[u] = std::move(missing);

    // One relate clause per object referent, only when its chain is rooted
    // at its own scene op (set algebra sources cannot take a relate).
    if (types.op_types[u] == ValueType::Object &&
        program.ops[source].function == "scene" && cons[source].size() == 1) {
      const int referent = trace.values[u].object();
      std::vector<int> anchors;
      for (const auto& o : scene.objects)
        if (o.id != referent && object_unique_by_full_attrs(scene, o.id)) anchors.push_back(o.id);
      if (!anchors.empty()) {
        RelatePlan plan;
        plan.anchor = anchors[rng.uniform_int(anchors.size())];
        const auto& t = scene.objects[referent];
        const auto& a = scene.objects[plan.anchor];
        const Relation x_rel = t.x < a.x ? Relation::Left : Relation::Right;
        const Relation y_rel = t.y > a.y ? Relation::Front : Relation::Behind;
        plan.rel = rng.bernoulli(0.5) ? x_rel : y_rel;
        scene_replacements[source] = plan;
      }
    }
  }

  Program out;
  std::vector<int> old_to_new(program.size(), -1);
  auto emit = [&](Operation op) {
    out.ops.push_back(std::move(op));
    return out.size() - 1;
  };
  for (int i = 0; i < program.size(); ++i) {
    const Operation& op = program.ops[i];
    if (auto it = scene_replacements.find(i); it != scene_replacements.end()) {
      const auto& plan = it->second;
      const ObjectInstance& a = scene.objects[plan.anchor];
      int cur = emit(Operation{"scene", {}, {}});
      for (Axis axis : {Axis::Size, Axis::Color, Axis::Material, Axis::Shape})
        cur = emit(Operation{std::string("filter_") + axis_name(axis), {cur},
                             {object_attr(a, axis)}});
      if (a.texture) cur = emit(Operation{"filter_texture", {cur}, {*a.texture}});
      const int anchor_unique = emit(Operation{"unique", {cur}, {}});
      old_to_new[i] = emit(Operation{"relate", {anchor_unique}, {relation_name(plan.rel)}});
      continue;
    }
    if (op.function == "unique") {
      int base = old_to_new[op.inputs[0]];
      if (auto it = inserts.find(i); it != inserts.end())
        for (Operation filter : it->second) {
          filter.inputs = {base};
          base = emit(std::move(filter));
        }
      old_to_new[i] = emit(Operation{"unique", {base}, {}});
      continue;
    }
    Operation copy = op;
    for (int& in : copy.inputs) in = old_to_new[in];
    old_to_new[i] = emit(std::move(copy));
  }

  typecheck(out, vocab);
  if (!(execute(out, scene, vocab) == original))
    throw Error(ErrorKind::InvalidParameter, "saturate_redundancy broke answer invariance");
  return out;
}

// ---------------------------------------------------------------------------
// Surface realization
// ---------------------------------------------------------------------------

namespace {

const char* relation_phrase(const std::string& rel) {
  if (rel == "left") return "to the left of";
  if (rel == "right") return "to the right of";
  if (rel == "front") return "in front of";
  if (rel == "behind") return "behind";
  return "near";
}

std::string pluralize(std::string text) {
  if (text.empty()) return text;
  if (text.back() == 's') return text + "es";
  return text + "s";
}

std::string with_article(const std::string& text) {
  static const std::string vowels = "aeiou";
  const bool an = !text.empty() && vowels.find(text[0]) != std::string::npos;
  return (an ? "an " : "a ") + text;
}

/// Matched structure of a program against its template skeleton.
struct TemplateMatch {
  std::map<std::string, int> role_tail;    // role -> top op of its filter run
  std::map<std::string, int> relate_op;    // relate role -> program op
  std::map<std::string, const SkeletonOp*> placeholder;
};

int skeleton_sink(const Template& tmpl) {
  std::vector<bool> used(tmpl.skeleton.size(), false);
  for (const auto& op : tmpl.skeleton)
    for (int in : op.inputs) used[in] = true;
  for (int i = static_cast<int>(tmpl.skeleton.size()) - 1; i >= 0; --i)
    if (!used[i]) return i;
  return static_cast<int>(tmpl.skeleton.size()) - 1;
}

void match_rec(const Program& program, const Template& tmpl, int sk_i, int pr_i,
               TemplateMatch& match) {
  const SkeletonOp& sk = tmpl.skeleton[sk_i];
  if (sk.function == "%filters") {
    match.role_tail[sk.ref] = pr_i;
    match.placeholder[sk.ref] = &sk;
    int cur = pr_i;
    while (is_filter_fn(program.ops[cur].function)) cur = program.ops[cur].inputs[0];
    match_rec(program, tmpl, sk.inputs[0], cur, match);
    return;
  }
  if (sk.function == "scene") {
    // A policy-added relate clause may stand where the skeleton has a bare
    // scene; its anchor chain is rendered recursively, not matched.
    const std::string& f = program.ops[pr_i].function;
    if (f != "scene" && f != "relate")
      throw Error(ErrorKind::InvalidParameter,
                  "program does not match template: expected scene-rooted chain");
    return;
  }
  if (program.ops[pr_i].function != sk.function)
    throw Error(ErrorKind::InvalidParameter, "program does not match template at op " +
                                                 std::to_string(pr_i) + " (" +
                                                 program.ops[pr_i].function + " vs " +
                                                 sk.function + ")");
  if (!sk.ref.empty() && sk.function == "relate") match.relate_op[sk.ref] = pr_i;
  for (std::size_t k = 0; k < sk.inputs.size(); ++k)
    match_rec(program, tmpl, sk.inputs[k], program.ops[pr_i].inputs[k], match);
}

TemplateMatch match_template(const Program& program, const Template& tmpl,
                             const Vocabulary& vocab) {
  TemplateMatch match;
  const ProgramTypes types = typecheck(program, vocab);
  match_rec(program, tmpl, skeleton_sink(tmpl), types.sink, match);
  return match;
}

struct ChainDescription {
  std::map<std::string, std::string> values;  // filter fn -> value
  int source = -1;
};

ChainDescription read_chain(const Program& program, int tail) {
  ChainDescription chain;
  int cur = tail;
  while (is_filter_fn(program.ops[cur].function)) {
    chain.values.emplace(program.ops[cur].function, program.ops[cur].value_inputs[0]);
    cur = program.ops[cur].inputs[0];
  }
  chain.source = cur;
  return chain;
}

std::string describe_chain(const Program& program, int tail, bool part_level, bool plural,
                           bool render_source_relate);

std::string describe_relate_suffix(const Program& program, int relate_op) {
  const std::string rel = program.ops[relate_op].value_inputs[0];
  const int anchor_unique = program.ops[relate_op].inputs[0];
  const int anchor_tail = program.ops[anchor_unique].inputs[0];
  return std::string(" that is ") + relation_phrase(rel) + " the " +
         describe_chain(program, anchor_tail, false, false, true);
}

std::string describe_chain(const Program& program, int tail, bool part_level, bool plural,
                           bool render_source_relate) {
  const ChainDescription chain = read_chain(program, tail);
  auto value = [&](const char* fn) {
    auto it = chain.values.find(fn);
    return it == chain.values.end() ? std::string() : it->second;
  };

  std::string text;
  auto append = [&](const std::string& word) {
    if (word.empty()) return;
    if (!text.empty()) text += ' ';
    text += word;
  };

  std::string noun;
  if (part_level) {
    append(value("filter_color"));
    append(value("filter_material"));
    noun = value("filter_part_name");
    if (noun.empty()) noun = "part";
  } else {
    append(value("filter_size"));
    append(value("filter_color"));
    append(value("filter_material"));
    append(value("filter_texture"));
    noun = value("filter_shape");
    if (noun.empty()) noun = value("filter_category");
    if (noun.empty()) noun = "vehicle";
  }
  append(plural ? pluralize(noun) : noun);

  const std::string& src_fn = program.ops[chain.source].function;
  if (render_source_relate && src_fn == "relate")
    text += describe_relate_suffix(program, chain.source);
  if (const auto axis = same_axis(src_fn)) {
    const int anchor_unique = program.ops[chain.source].inputs[0];
    const int anchor_tail = program.ops[anchor_unique].inputs[0];
    text += std::string(" that has the same ") + axis_name(*axis) + " as the " +
            describe_chain(program, anchor_tail, false, false, true);
  }
  return text;
}

}  // namespace

std::string realize_text(const Program& program, const Template& tmpl, const Vocabulary& vocab) {
  const TemplateMatch match = match_template(program, tmpl, vocab);
  std::string out;
  const std::string& text = tmpl.text;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      out += text[i++];
      continue;
    }
    const std::size_t close = text.find('>', i);
    const std::size_t colon = text.find(':', i);
    if (close == std::string::npos || colon == std::string::npos || colon > close)
      throw Error(ErrorKind::Config, "malformed slot in template text: " + text);
    const std::string kind = text.substr(i + 1, colon - i - 1);
    const std::string role = text.substr(colon + 1, close - colon - 1);
    if (kind == "REL") {
      auto it = match.relate_op.find(role);
      if (it == match.relate_op.end())
        throw Error(ErrorKind::Config, "unknown relate role " + role);
      out += relation_phrase(program.ops[it->second].value_inputs[0]);
    } else {
      auto it = match.role_tail.find(role);
      if (it == match.role_tail.end())
        throw Error(ErrorKind::Config, "unknown description role " + role);
      const SkeletonOp* ph = match.placeholder.at(role);
      const bool part_level =
          ph->level == RoleLevel::Part || ph->level == RoleLevel::PartScene;
      const std::string desc = describe_chain(program, it->second, part_level, kind == "P",
                                              ph->describe_relate);
      out += (kind == "A") ? with_article(desc) : desc;
    }
    i = close + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Template instantiation
// ---------------------------------------------------------------------------

namespace {

struct FilterSpec {
  std::string function;
  std::string value;
};

struct NecessityRelate {
  int anchor = -1;
  Relation rel = Relation::Left;
  std::vector<FilterSpec> anchor_filters;
};

struct RoleState {
  const SkeletonOp* ph = nullptr;
  int skeleton_index = -1;
  int object_id = -1;      // Object roles and Set pivots
  PartRef part{-1, -1};    // Part / PartScene pivots
  bool has_pivot = false;
  std::vector<FilterSpec> filters;
  std::set<std::string> used_fns;
  std::optional<NecessityRelate> relate;
  std::set<Axis> excluded;
};

struct Assembly {
  Program program;
  std::map<std::string, int> role_unique;  // role -> unique op index
};

/// Query axes consumed from a role's unique in the *skeleton*.
std::set<Axis> skeleton_excluded_axes(const Template& tmpl, const std::string& role) {
  std::set<Axis> excluded;
  int unique_idx = -1;
  for (std::size_t i = 0; i < tmpl.skeleton.size(); ++i)
    if (tmpl.skeleton[i].function == "unique" && tmpl.skeleton[i].ref == role)
      unique_idx = static_cast<int>(i);
  if (unique_idx < 0) return excluded;
  for (const auto& op : tmpl.skeleton)
    for (int in : op.inputs)
      if (in == unique_idx)
        if (const auto axis = query_axis(op.function)) excluded.insert(*axis);
  return excluded;
}

const ObjectInstance& pivot_object(const Scene& scene, const RoleState& role) {
  return scene.objects[role.object_id];
}

std::string fn_for_axis(Axis axis) { return std::string("filter_") + axis_name(axis); }

/// Sample the rd-style random filter subset for one role.
void sample_role_filters(RoleState& role, const Scene& scene, const Vocabulary& vocab,
                         Rng& rng) {
  role.filters.clear();
  role.used_fns.clear();
  auto add = [&](const std::string& fn, const std::string& value) {
    role.filters.push_back({fn, value});
    role.used_fns.insert(fn);
  };

  const RoleLevel level = role.ph->level;
  if (level == RoleLevel::Part || level == RoleLevel::PartScene) {
    const PartInstance& part = scene.objects[role.part.first].parts[role.part.second];
    if (rng.bernoulli(0.7)) add("filter_part_name", part.name);
    if (!role.excluded.count(Axis::Color) && rng.bernoulli(0.4))
      add("filter_color", part.color);
    if (!role.excluded.count(Axis::Material) && rng.bernoulli(0.4))
      add("filter_material", part.material);
    int guard = 0;
    while (static_cast<int>(role.filters.size()) < role.ph->min_filters && guard++ < 4) {
      for (const char* fn : {"filter_part_name", "filter_color", "filter_material"}) {
        if (role.used_fns.count(fn)) continue;
        if (std::string(fn) == "filter_color" && role.excluded.count(Axis::Color)) continue;
        if (std::string(fn) == "filter_material" && role.excluded.count(Axis::Material)) continue;
        const std::string value = std::string(fn) == "filter_part_name" ? part.name
                                  : std::string(fn) == "filter_color"   ? part.color
                                                                        : part.material;
        add(fn, value);
        break;
      }
    }
    return;
  }

  if (role.has_pivot) {
    const ObjectInstance& o = pivot_object(scene, role);
    // Noun slot: shape, else maybe category, else bare "vehicle(s)".
    if (!role.excluded.count(Axis::Shape) && rng.bernoulli(0.5))
      add("filter_shape", o.shape);
    else if (rng.bernoulli(0.5))
      add("filter_category", o.category);
    for (Axis axis : {Axis::Size, Axis::Color, Axis::Material}) {
      if (role.excluded.count(axis)) continue;
      if (rng.bernoulli(0.5)) add(fn_for_axis(axis), object_attr(o, axis));
    }
    if (o.texture && !role.excluded.count(Axis::Texture) && rng.bernoulli(0.5))
      add("filter_texture", *o.texture);
  } else {
    // Ungrounded set chain: values drawn from the vocabulary; may be empty
    // on the scene, which is a legitimate zero count / "no" answer.
    const double r = rng.uniform();
    if (r < 0.3)
      add("filter_shape", vocab.shapes()[rng.uniform_int(vocab.shapes().size())]);
    else if (r < 0.6)
      add("filter_category", vocab.categories()[rng.uniform_int(vocab.categories().size())]);
    for (Axis axis : {Axis::Size, Axis::Color, Axis::Material}) {
      if (role.excluded.count(axis)) continue;
      if (rng.bernoulli(0.3))
        add(fn_for_axis(axis),
            vocab.axis_values(axis)[rng.uniform_int(vocab.axis_values(axis).size())]);
    }
  }
  int guard = 0;
  while (static_cast<int>(role.filters.size()) < role.ph->min_filters && guard++ < 8) {
    std::vector<Axis> pool = {Axis::Shape, Axis::Size, Axis::Color, Axis::Material};
    bool added = false;
    for (Axis axis : pool) {
      const std::string fn = fn_for_axis(axis);
      if (role.used_fns.count(fn) || role.excluded.count(axis)) continue;
      const std::string value =
          role.has_pivot ? object_attr(pivot_object(scene, role), axis)
                         : vocab.axis_values(axis)[rng.uniform_int(vocab.axis_values(axis).size())];
      add(fn, value);
      added = true;
      break;
    }
    if (!added) break;
  }
}

/// One more ground-truth filter for a chain that still grounds ambiguously.
/// Returns false when the role has no axes left.
bool add_discriminating_filter(RoleState& role, const Scene& scene) {
  if (role.ph->level == RoleLevel::Part || role.ph->level == RoleLevel::PartScene) {
    const PartInstance& part = scene.objects[role.part.first].parts[role.part.second];
    for (const char* fn : {"filter_part_name", "filter_color", "filter_material"}) {
      if (role.used_fns.count(fn)) continue;
      if (std::string(fn) == "filter_color" && role.excluded.count(Axis::Color)) continue;
      if (std::string(fn) == "filter_material" && role.excluded.count(Axis::Material)) continue;
      const std::string value = std::string(fn) == "filter_part_name" ? part.name
                                : std::string(fn) == "filter_color"   ? part.color
                                                                      : part.material;
      role.filters.push_back({fn, value});
      role.used_fns.insert(fn);
      return true;
    }
    return false;
  }
  const ObjectInstance& o = pivot_object(scene, role);
  for (Axis axis : {Axis::Shape, Axis::Color, Axis::Size, Axis::Material, Axis::Texture}) {
    if (role.excluded.count(axis)) continue;
    if (axis == Axis::Texture && !o.texture) continue;
    const std::string fn = fn_for_axis(axis);
    if (role.used_fns.count(fn)) continue;
    role.filters.push_back({fn, object_attr(o, axis)});
    role.used_fns.insert(fn);
    return true;
  }
  return false;
}

/// Filter subset uniquely grounding `id` scene-wide; nullopt if even the
/// full attribute set leaves a twin.
std::optional<std::vector<FilterSpec>> ground_object_uniquely(const Scene& scene, int id,
                                                              Rng& rng) {
  if (!object_unique_by_full_attrs(scene, id)) return std::nullopt;
  const ObjectInstance& o = scene.objects[id];
  std::vector<Axis> axes = {Axis::Shape, Axis::Size, Axis::Color, Axis::Material};
  if (o.texture) axes.push_back(Axis::Texture);
  auto selects_only_target = [&](const std::vector<FilterSpec>& filters) {
    int matches = 0;
    for (const auto& other : scene.objects) {
      bool ok = true;
      for (const auto& f : filters) {
        const Axis axis = *axis_from_name(f.function.substr(7));
        if (object_attr(other, axis) != f.value) ok = false;
      }
      if (ok) ++matches;
    }
    return matches == 1;
  };
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<FilterSpec> filters;
    for (Axis axis : axes)
      if (rng.bernoulli(0.5)) filters.push_back({fn_for_axis(axis), object_attr(o, axis)});
    if (!filters.empty() && selects_only_target(filters)) return filters;
  }
  std::vector<FilterSpec> full;
  for (Axis axis : axes) full.push_back({fn_for_axis(axis), object_attr(o, axis)});
  return full;
}

Assembly assemble(const Template& tmpl, std::map<std::string, RoleState>& roles,
                  const std::map<std::string, std::string>& relations) {
  Assembly out;
  std::vector<int> sk_to_pr(tmpl.skeleton.size(), -1);
  // Scene ops replaced by a necessity-relate construction are not emitted.
  std::vector<bool> skip(tmpl.skeleton.size(), false);
  for (const auto& sk : tmpl.skeleton)
    if (sk.function == "%filters" && roles.at(sk.ref).relate) skip[sk.inputs[0]] = true;
  auto emit = [&](Operation op) {
    out.program.ops.push_back(std::move(op));
    return out.program.size() - 1;
  };
  for (std::size_t i = 0; i < tmpl.skeleton.size(); ++i) {
    if (skip[i]) continue;
    const SkeletonOp& sk = tmpl.skeleton[i];
    if (sk.function == "%filters") {
      RoleState& role = roles.at(sk.ref);
      int base;
      if (role.relate) {
        // Necessity relate: the chain grounds inside the anchor's relate set.
        int cur = emit(Operation{"scene", {}, {}});
        for (const auto& f : role.relate->anchor_filters)
          cur = emit(Operation{f.function, {cur}, {f.value}});
        const int anchor_unique = emit(Operation{"unique", {cur}, {}});
        base = emit(Operation{"relate", {anchor_unique}, {relation_name(role.relate->rel)}});
      } else {
        base = sk_to_pr[sk.inputs[0]];
      }
      for (const auto& f : role.filters) base = emit(Operation{f.function, {base}, {f.value}});
      sk_to_pr[i] = base;
      continue;
    }
    Operation op{sk.function, {}, sk.value_inputs};
    for (int in : sk.inputs) op.inputs.push_back(sk_to_pr[in]);
    if (sk.function == "relate" && !sk.ref.empty()) op.value_inputs = {relations.at(sk.ref)};
    sk_to_pr[i] = emit(std::move(op));
    if (sk.function == "unique" && !sk.ref.empty()) out.role_unique[sk.ref] = sk_to_pr[i];
  }
  return out;
}

struct TryResult {
  std::optional<ExecTrace> trace;
  ErrorKind kind = ErrorKind::InvalidParameter;
  int error_op = -1;
};

TryResult try_execute(const Program& program, const Scene& scene, const Vocabulary& vocab) {
  TryResult r;
  try {
    r.trace = execute_trace(program, scene, vocab);
  } catch (const Error& e) {
    r.kind = e.kind();
    r.error_op = e.op_index();
  }
  return r;
}

}  // namespace

std::optional<QuestionRecord> instantiate(const Template& tmpl, const Scene& scene,
                                          Redundancy redundancy, const Vocabulary& vocab,
                                          Rng& rng) {
  if (tmpl.requires_texture && !scene.has_textures()) return std::nullopt;
  const int n_objects = static_cast<int>(scene.objects.size());
  if (n_objects == 0) return std::nullopt;

  for (int attempt = 0; attempt < 30; ++attempt) {
    // --- bind roles -------------------------------------------------------
    std::map<std::string, RoleState> roles;
    std::map<std::string, std::string> relations;  // relate role -> relation name
    bool bind_failed = false;

    for (std::size_t i = 0; i < tmpl.skeleton.size() && !bind_failed; ++i) {
      const SkeletonOp& sk = tmpl.skeleton[i];
      if (sk.function == "relate" && !sk.ref.empty()) {
        relations[sk.ref] =
            relation_name(kAllRelations[rng.uniform_int(kAllRelations.size())]);
        continue;
      }
      if (sk.function != "%filters") continue;
      RoleState role;
      role.ph = &sk;
      role.skeleton_index = static_cast<int>(i);
      role.excluded = skeleton_excluded_axes(tmpl, sk.ref);
      switch (sk.level) {
        case RoleLevel::Object: {
          if (!sk.bind_owner_of.empty()) {
            auto it = roles.find(sk.bind_owner_of);
            if (it == roles.end() || it->second.part.first < 0) {
              bind_failed = true;
              break;
            }
            role.object_id = it->second.part.first;
          } else {
            role.object_id = static_cast<int>(rng.uniform_int(n_objects));
          }
          role.has_pivot = true;
          break;
        }
        case RoleLevel::Part: {
          auto it = roles.find(sk.of);
          if (it == roles.end() || it->second.object_id < 0) {
            bind_failed = true;
            break;
          }
          const auto& parent = scene.objects[it->second.object_id];
          role.part = {parent.id, static_cast<int>(rng.uniform_int(parent.parts.size()))};
          role.has_pivot = true;
          break;
        }
        case RoleLevel::PartScene: {
          std::vector<PartRef> pool;
          for (const auto& o : scene.objects)
            for (std::size_t p = 0; p < o.parts.size(); ++p)
              pool.emplace_back(o.id, static_cast<int>(p));
          if (pool.empty()) {
            bind_failed = true;
            break;
          }
          role.part = pool[rng.uniform_int(pool.size())];
          role.has_pivot = true;
          break;
        }
        case RoleLevel::Set: {
          if (!sk.pivot_in_relate.empty()) {
            // Pivot inside the structural relate set, so the chain usually
            // has non-zero support there.
            const std::string& rel_name = relations.at(sk.pivot_in_relate);
            int anchor_id = -1;
            // The anchor is the object role feeding that relate in the
            // skeleton: find the relate op, walk to its unique's ref.
            for (std::size_t k = 0; k < tmpl.skeleton.size(); ++k) {
              if (tmpl.skeleton[k].function == "relate" &&
                  tmpl.skeleton[k].ref == sk.pivot_in_relate) {
                const auto& uniq = tmpl.skeleton[tmpl.skeleton[k].inputs[0]];
                anchor_id = roles.at(uniq.ref).object_id;
              }
            }
            const Relation rel = *relation_from_name(rel_name);
            const auto& members = scene.related(rel, anchor_id);
            if (!members.empty() && rng.bernoulli(0.85)) {
              role.object_id = members[rng.uniform_int(members.size())];
              role.has_pivot = true;
            }
          } else if (rng.bernoulli(0.85)) {
            role.object_id = static_cast<int>(rng.uniform_int(n_objects));
            role.has_pivot = true;
          }
          break;
        }
      }
      roles.emplace(sk.ref, std::move(role));
    }
    if (bind_failed) continue;

    bool distinct_ok = true;
    for (const auto& [a, b] : tmpl.distinct) {
      const auto ita = roles.find(a);
      const auto itb = roles.find(b);
      if (ita != roles.end() && itb != roles.end() &&
          ita->second.object_id == itb->second.object_id)
        distinct_ok = false;
    }
    if (!distinct_ok) continue;

    for (auto& [ref, role] : roles) {
      (void)ref;
      sample_role_filters(role, scene, vocab, rng);
    }

    // --- grounding fixup loop ----------------------------------------------
    bool gave_up = false;
    Assembly assembly;
    std::optional<ExecTrace> trace;
    for (int fix = 0; fix < 24 && !gave_up; ++fix) {
      assembly = assemble(tmpl, roles, relations);
      TryResult result = try_execute(assembly.program, scene, vocab);

      std::string problem_role;
      if (!result.trace) {
        if (result.kind != ErrorKind::NonUnique) {
          gave_up = true;
          break;
        }
        for (const auto& [ref, u] : assembly.role_unique)
          if (u == result.error_op) problem_role = ref;
        if (problem_role.empty()) {
          gave_up = true;
          break;
        }
      } else {
        // All uniques resolved; verify they picked the bound entities.
        for (const auto& [ref, u] : assembly.role_unique) {
          const RoleState& role = roles.at(ref);
          const ExecValue& v = result.trace->values[u];
          const bool object_level = role.ph->level == RoleLevel::Object;
          if (object_level && v.object() != role.object_id) problem_role = ref;
          if (!object_level && !(v.part() == role.part)) problem_role = ref;
          if (!problem_role.empty()) break;
        }
        if (problem_role.empty()) {
          trace = std::move(result.trace);
          break;
        }
      }

      RoleState& role = roles.at(problem_role);
      if (add_discriminating_filter(role, scene)) continue;
      // Attribute grounding exhausted: fall back to a relate clause when the
      // chain is rooted at its own scene op.
      const bool scene_rooted =
          !role.relate &&
          role.ph->level == RoleLevel::Object && role.ph->bind_owner_of.empty() &&
          tmpl.skeleton[role.ph->inputs[0]].function == "scene";
      if (!scene_rooted) {
        gave_up = true;
        break;
      }
      std::vector<int> anchors;
      for (const auto& o : scene.objects)
        if (o.id != role.object_id && object_unique_by_full_attrs(scene, o.id))
          anchors.push_back(o.id);
      if (anchors.empty()) {
        gave_up = true;
        break;
      }
      NecessityRelate plan;
      plan.anchor = anchors[rng.uniform_int(anchors.size())];
      const auto& t = scene.objects[role.object_id];
      const auto& a = scene.objects[plan.anchor];
      const Relation x_rel = t.x < a.x ? Relation::Left : Relation::Right;
      const Relation y_rel = t.y > a.y ? Relation::Front : Relation::Behind;
      plan.rel = rng.bernoulli(0.5) ? x_rel : y_rel;
      auto anchor_filters = ground_object_uniquely(scene, plan.anchor, rng);
      if (!anchor_filters) {
        gave_up = true;
        break;
      }
      plan.anchor_filters = std::move(*anchor_filters);
      role.relate = std::move(plan);
    }
    if (gave_up || !trace) continue;

    // --- redundancy policy --------------------------------------------------
    Program final_program = assembly.program;
    if (redundancy == Redundancy::Minus)
      final_program = strip_redundancy(final_program, scene, vocab);
    else if (redundancy == Redundancy::Plus)
      final_program = saturate_redundancy(final_program, scene, vocab, rng);

    QuestionRecord record;
    record.scene_id = scene.scene_id;
    record.program = final_program;
    record.answer = execute(final_program, scene, vocab);
    record.template_id = tmpl.id;
    record.family = tmpl.family;
    record.redundancy = redundancy;
    record.text = realize_text(final_program, tmpl, vocab);
    return record;
  }
  return std::nullopt;
}

std::vector<QuestionRecord> generate_for_scene(const Scene& scene,
                                               const std::vector<Template>& templates,
                                               QuestionCounts counts, Redundancy redundancy,
                                               const Vocabulary& vocab, Rng& rng) {
  const std::vector<Family> object_families = {Family::Query, Family::Count, Family::Exist,
                                               Family::CompareInteger, Family::CompareAttribute};
  const std::vector<Family> part_families = {Family::PartQuery, Family::PartIdentify};

  std::set<std::string> seen_texts;
  std::vector<QuestionRecord> out;

  auto fill = [&](const std::vector<Family>& families, int need) {
    std::vector<const Template*> pool;
    for (const auto& t : templates) {
      if (std::find(families.begin(), families.end(), t.family) == families.end()) continue;
      if (t.requires_texture && !scene.has_textures()) continue;
      pool.push_back(&t);
    }
    if (need > 0 && pool.empty())
      throw Error(ErrorKind::TemplateExhausted, "no usable templates for requested families");

    // Family-balanced sampling: rotate through the families that have
    // templates, one instantiation attempt per turn.
    std::vector<Family> rotation;
    for (Family f : families)
      for (const auto* t : pool)
        if (t->family == f) {
          rotation.push_back(f);
          break;
        }
    int produced = 0;
    int attempts = 0;
    const int max_attempts = need * 80 + 80;
    std::size_t turn = 0;
    while (produced < need && attempts < max_attempts) {
      ++attempts;
      const Family family = rotation[turn++ % rotation.size()];
      std::vector<const Template*> family_pool;
      for (const auto* t : pool)
        if (t->family == family) family_pool.push_back(t);
      const Template& tmpl = *family_pool[rng.uniform_int(family_pool.size())];
      auto record = instantiate(tmpl, scene, redundancy, vocab, rng);
      if (!record) continue;
      if (!seen_texts.insert(record->text).second) continue;
      out.push_back(std::move(*record));
      ++produced;
    }
    if (produced < need)
      throw Error(ErrorKind::TemplateExhausted,
                  "scene " + std::to_string(scene.scene_id) + " produced " +
                      std::to_string(produced) + " of " + std::to_string(need) + " questions");
  };

  fill(object_families, counts.object_based);
  fill(part_families, counts.part_based);
  return out;
}

Json question_to_json(const QuestionRecord& q, int question_index) {
  Json j;
  j["image_index"] = q.scene_id;
  j["question_index"] = question_index;
  j["question"] = q.text;
  j["program"] = serialize_program(q.program);
  j["answer"] = q.answer.to_json();
  j["template_id"] = q.template_id;
  j["family"] = family_name(q.family);
  j["redundancy_variant"] = redundancy_name(q.redundancy);
  return j;
}

Json questions_file_json(const std::vector<QuestionRecord>& questions, const Json& info_extra) {
  Json j;
  Json info;
  info["format_version"] = kFormatVersion;
  info["tool"] = kToolName;
  info["version"] = kToolVersion;
  for (auto it = info_extra.begin(); it != info_extra.end(); ++it) info[it.key()] = it.value();
  j["info"] = info;
  Json arr = Json::array();
  int index = 0;
  for (const auto& q : questions) arr.push_back(question_to_json(q, index++));
  j["questions"] = arr;
  return j;
}

std::vector<QuestionRecord> questions_from_file(const std::string& path,
                                                const Vocabulary& vocab) {
  const Json j = load_json_file(path);
  if (!j.contains("questions"))
    throw Error(ErrorKind::ParseError, path + ": no questions array");
  std::vector<QuestionRecord> out;
  for (const auto& jq : j.at("questions")) {
    QuestionRecord q;
    q.scene_id = jq.at("image_index").get<int>();
    q.text = jq.at("question").get<std::string>();
    q.program = parse_program(jq.at("program"), vocab);
    q.answer = Answer::from_json(jq.at("answer"));
    q.template_id = jq.value("template_id", std::string());
    if (jq.contains("family")) q.family = family_from_name(jq.at("family").get<std::string>());
    if (jq.contains("redundancy_variant"))
      q.redundancy = redundancy_from_name(jq.at("redundancy_variant").get<std::string>());
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace sgvqa
