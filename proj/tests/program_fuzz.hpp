// Random well-typed program generator for fuzzing the executors.
#pragma once

#include <string>
#include <vector>

#include "sgvqa/program.hpp"
#include "sgvqa/rng.hpp"
#include "sgvqa/scene.hpp"

namespace fuzz {

using sgvqa::Axis;
using sgvqa::Operation;
using sgvqa::Program;
using sgvqa::Rng;
using sgvqa::Scene;
using sgvqa::Vocabulary;

/// Builds a random typechecking program against the vocabulary. The shape
/// mirrors generated questions: filter chains over scene/relate/same
/// sources, optional part hops, and a random answer-type sink. Texture ops
/// are only emitted when `with_texture` (pair those with hard scenes).
inline Program random_program(const Vocabulary& vocab, Rng& rng, bool with_texture) {
  Program prog;
  auto push = [&](std::string f, std::vector<int> in, std::vector<std::string> val = {}) {
    prog.ops.push_back(Operation{std::move(f), std::move(in), std::move(val)});
    return static_cast<int>(prog.ops.size()) - 1;
  };
  auto pick = [&](const std::vector<std::string>& values) {
    return values[rng.uniform_int(values.size())];
  };

  std::vector<Axis> object_axes = {Axis::Size, Axis::Color, Axis::Material, Axis::Shape};
  if (with_texture) object_axes.push_back(Axis::Texture);

  // Object-set chain: filters over a scene, relate, or same source.
  auto build_object_set = [&](auto&& self, int depth) -> int {
    int cur;
    if (depth > 0 && rng.bernoulli(0.35)) {
      // Anchor another chain and relate or same off it.
      const int anchor_set = self(self, depth - 1);
      const int anchor = push("unique", {anchor_set});
      if (rng.bernoulli(0.5)) {
        const std::vector<std::string> rels = {"left", "right", "front", "behind"};
        cur = push("relate", {anchor}, {pick(rels)});
      } else {
        const std::vector<std::string> sames = {"same_size", "same_color", "same_material",
                                                "same_shape"};
        cur = push(pick(sames), {anchor});
      }
    } else {
      cur = push("scene", {});
    }
    const int n_filters = static_cast<int>(rng.uniform_int(3));
    for (int i = 0; i < n_filters; ++i) {
      if (rng.bernoulli(0.15)) {
        cur = push("filter_category", {cur}, {pick(vocab.categories())});
      } else {
        const Axis axis = object_axes[rng.uniform_int(object_axes.size())];
        cur = push(std::string("filter_") + sgvqa::axis_name(axis), {cur},
                   {pick(vocab.axis_values(axis))});
      }
    }
    if (depth > 0 && rng.bernoulli(0.15)) {
      const int other = self(self, depth - 1);
      cur = push(rng.bernoulli(0.5) ? "intersect" : "union", {cur, other});
    }
    return cur;
  };

  auto all_part_names = [&]() {
    std::vector<std::string> names;
    for (const auto& s : vocab.shapes())
      for (const auto& p : vocab.parts_of(s))
        if (std::find(names.begin(), names.end(), p) == names.end()) names.push_back(p);
    return names;
  };

  const int mode = static_cast<int>(rng.uniform_int(6));
  if (mode == 0) {  // count / exist
    const int set = build_object_set(build_object_set, 1);
    push(rng.bernoulli(0.5) ? "count" : "exist", {set});
  } else if (mode == 1) {  // query on an object
    const int set = build_object_set(build_object_set, 1);
    const int obj = push("unique", {set});
    const Axis axis = object_axes[rng.uniform_int(object_axes.size())];
    push(std::string("query_") + sgvqa::axis_name(axis), {obj});
  } else if (mode == 2) {  // integer comparison
    const int a = push("count", {build_object_set(build_object_set, 0)});
    const int b = push("count", {build_object_set(build_object_set, 0)});
    const std::vector<std::string> cmps = {"equal_integer", "less_than", "greater_than"};
    push(pick(cmps), {a, b});
  } else if (mode == 3) {  // attribute comparison
    const Axis axis = object_axes[rng.uniform_int(4)];
    const int a = push(std::string("query_") + sgvqa::axis_name(axis),
                       {push("unique", {build_object_set(build_object_set, 0)})});
    const int b = push(std::string("query_") + sgvqa::axis_name(axis),
                       {push("unique", {build_object_set(build_object_set, 0)})});
    push(std::string("equal_") + sgvqa::axis_name(axis), {a, b});
  } else if (mode == 4) {  // part query via an anchored object
    const int obj = push("unique", {build_object_set(build_object_set, 0)});
    int parts = push("object_to_part", {obj});
    if (rng.bernoulli(0.7))
      parts = push("filter_part_name", {parts}, {pick(all_part_names())});
    if (rng.bernoulli(0.3))
      parts = push("filter_color", {parts}, {pick(vocab.colors())});
    const int part = push("unique", {parts});
    push(rng.bernoulli(0.5) ? "query_color" : "query_material", {part});
  } else {  // scene-wide part pool back to objects
    int parts = push("object_to_part", {build_object_set(build_object_set, 0)});
    if (rng.bernoulli(0.7))
      parts = push("filter_part_name", {parts}, {pick(all_part_names())});
    if (rng.bernoulli(0.7)) parts = push("filter_color", {parts}, {pick(vocab.colors())});
    const int objs = push("part_to_object", {parts});
    const int r = static_cast<int>(rng.uniform_int(3));
    if (r == 0) push("count", {objs});
    else if (r == 1) push("exist", {objs});
    else {
      const int obj = push("unique", {objs});
      push("query_shape", {obj});
    }
  }
  return prog;
}

}  // namespace fuzz
