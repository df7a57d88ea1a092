#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "sgvqa/program.hpp"
#include "sgvqa/scene.hpp"

namespace sgvqa {

/// Part identity within a scene: (object id, part index into that object).
using PartRef = std::pair<int, int>;

/// Runtime value of one executed operation.
struct ExecValue {
  std::variant<std::vector<int>,      // ObjectSet (sorted ids)
               int,                   // Object
               std::vector<PartRef>,  // PartSet (sorted)
               PartRef,               // Part
               long,                  // Integer (long disambiguates from Object)
               bool,                  // Boolean
               std::string>           // Attribute
      v;

  const std::vector<int>& object_set() const { return std::get<std::vector<int>>(v); }
  int object() const { return std::get<int>(v); }
  const std::vector<PartRef>& part_set() const { return std::get<std::vector<PartRef>>(v); }
  PartRef part() const { return std::get<PartRef>(v); }
  long integer() const { return std::get<long>(v); }
  bool boolean() const { return std::get<bool>(v); }
  const std::string& attribute() const { return std::get<std::string>(v); }
};

/// Full run record: one value per op plus the final answer. unique
/// resolutions are readable from values[i] of the unique ops.
struct ExecTrace {
  std::vector<ExecValue> values;
  Answer answer;
};

/// Runs a typechecked program on a scene. Throws Error with kind NonUnique
/// or MissingTexture for the two declared runtime failures.
ExecTrace execute_trace(const Program& program, const Scene& scene, const Vocabulary& vocab);
Answer execute(const Program& program, const Scene& scene, const Vocabulary& vocab);

}  // namespace sgvqa
