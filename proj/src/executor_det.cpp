#include "sgvqa/executor_det.hpp"

#include <algorithm>

#include "sgvqa/errors.hpp"

namespace sgvqa {

namespace {

const std::string& object_attribute(const ObjectInstance& o, Axis axis) {
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

std::vector<int> set_op(const std::vector<int>& a, const std::vector<int>& b, bool intersect) {
  std::vector<int> out;
  if (intersect)
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  else
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ExecTrace execute_trace(const Program& program, const Scene& scene, const Vocabulary& vocab) {
  const ProgramTypes types = typecheck(program, vocab);
  ExecTrace trace;
  trace.values.resize(program.size());

  auto part_of = [&](PartRef ref) -> const PartInstance& {
    return scene.objects[ref.first].parts[ref.second];
  };

  for (int i = 0; i < program.size(); ++i) {
    const Operation& op = program.ops[i];
    const std::string& f = op.function;
    ExecValue out;

    auto in = [&](int k) -> const ExecValue& { return trace.values[op.inputs[k]]; };
    auto in_type = [&](int k) { return types.op_types[op.inputs[k]]; };

    if (f == "scene") {
      std::vector<int> all(scene.objects.size());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
      out.v = all;
    } else if (f == "filter_category") {
      std::vector<int> kept;
      for (int id : in(0).object_set())
        if (scene.objects[id].category == op.value_inputs[0]) kept.push_back(id);
      out.v = kept;
    } else if (const auto axis = filter_axis(f)) {
      if (in_type(0) == ValueType::ObjectSet) {
        std::vector<int> kept;
        for (int id : in(0).object_set())
          if (object_attribute(scene.objects[id], *axis) == op.value_inputs[0])
            kept.push_back(id);
        out.v = kept;
      } else {
        std::vector<PartRef> kept;
        for (const PartRef& ref : in(0).part_set()) {
          const PartInstance& p = part_of(ref);
          const std::string& got = (*axis == Axis::Color) ? p.color : p.material;
          if (got == op.value_inputs[0]) kept.push_back(ref);
        }
        out.v = kept;
      }
    } else if (f == "filter_part_name") {
      std::vector<PartRef> kept;
      for (const PartRef& ref : in(0).part_set())
        if (part_of(ref).name == op.value_inputs[0]) kept.push_back(ref);
      out.v = kept;
    } else if (f == "unique") {
      if (in_type(0) == ValueType::ObjectSet) {
        const auto& set = in(0).object_set();
        if (set.size() != 1)
          throw Error(ErrorKind::NonUnique,
                      "unique over " + std::to_string(set.size()) + " objects", i);
        out.v = set[0];
      } else {
        const auto& set = in(0).part_set();
        if (set.size() != 1)
          throw Error(ErrorKind::NonUnique,
                      "unique over " + std::to_string(set.size()) + " parts", i);
        out.v = set[0];
      }
    } else if (f == "relate") {
      const Relation r = *relation_from_name(op.value_inputs[0]);
      out.v = scene.related(r, in(0).object());
    } else if (const auto saxis = same_axis(f)) {
      const int anchor = in(0).object();
      const std::string& target = object_attribute(scene.objects[anchor], *saxis);
      std::vector<int> matches;
      for (const auto& o : scene.objects)
        if (o.id != anchor && object_attribute(o, *saxis) == target) matches.push_back(o.id);
      out.v = matches;
    } else if (f == "intersect" || f == "union") {
      out.v = set_op(in(0).object_set(), in(1).object_set(), f == "intersect");
    } else if (f == "count") {
      out.v = static_cast<long>(in(0).object_set().size());
    } else if (f == "exist") {
      out.v = !in(0).object_set().empty();
    } else if (const auto qaxis = query_axis(f)) {
      if (in_type(0) == ValueType::Object) {
        const ObjectInstance& o = scene.objects[in(0).object()];
        if (*qaxis == Axis::Texture && !o.texture)
          throw Error(ErrorKind::MissingTexture,
                      "object " + std::to_string(o.id) + " has no texture", i);
        out.v = object_attribute(o, *qaxis);
      } else {
        const PartInstance& p = part_of(in(0).part());
        out.v = (*qaxis == Axis::Color) ? p.color : p.material;
      }
    } else if (f == "equal_integer") {
      out.v = in(0).integer() == in(1).integer();
    } else if (f == "less_than") {
      out.v = in(0).integer() < in(1).integer();
    } else if (f == "greater_than") {
      out.v = in(0).integer() > in(1).integer();
    } else if (equal_attr_axis(f)) {
      out.v = in(0).attribute() == in(1).attribute();
    } else if (f == "object_to_part") {
      std::vector<PartRef> parts;
      auto expand = [&](int id) {
        for (std::size_t pi = 0; pi < scene.objects[id].parts.size(); ++pi)
          parts.emplace_back(id, static_cast<int>(pi));
      };
      if (in_type(0) == ValueType::Object) expand(in(0).object());
      else
        for (int id : in(0).object_set()) expand(id);
      out.v = parts;
    } else if (f == "part_to_object") {
      std::vector<int> owners;
      for (const PartRef& ref : in(0).part_set())
        if (owners.empty() || owners.back() != ref.first) owners.push_back(ref.first);
      owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
      out.v = owners;
    } else {
      throw Error(ErrorKind::ParseError, "unhandled function " + f);
    }
    trace.values[i] = std::move(out);
  }

  const ExecValue& sink = trace.values[types.sink];
  const ValueType st = types.sink_type();
  if (st == ValueType::Integer)
    trace.answer = Answer::of_integer(static_cast<int>(sink.integer()));
  else if (st == ValueType::Boolean)
    trace.answer = Answer::of_boolean(sink.boolean());
  else
    trace.answer = Answer::of_attribute(sink.attribute());
  return trace;
}

Answer execute(const Program& program, const Scene& scene, const Vocabulary& vocab) {
  return execute_trace(program, scene, vocab).answer;
}

}  // namespace sgvqa
