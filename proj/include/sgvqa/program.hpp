#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgvqa/jsonio.hpp"
#include "sgvqa/vocabulary.hpp"

namespace sgvqa {

/// Static value kinds flowing between operations. Attribute results carry
/// their axis so equality comparisons can be checked per axis.
enum class ValueType {
  ObjectSet,
  Object,
  PartSet,
  Part,
  Integer,
  Boolean,
  AttrSize,
  AttrColor,
  AttrMaterial,
  AttrShape,
  AttrTexture,
};

const char* value_type_name(ValueType t);
bool is_attribute_type(ValueType t);
ValueType attr_type_for_axis(Axis axis);

struct Operation {
  std::string function;
  std::vector<int> inputs;
  std::vector<std::string> value_inputs;

  bool operator==(const Operation&) const = default;
};

/// A typed reasoning program: an op list forming a DAG with exactly one
/// sink. Programs are immutable values; all analysis is done functionally.
struct Program {
  std::vector<Operation> ops;

  bool operator==(const Program&) const = default;
  int size() const { return static_cast<int>(ops.size()); }
};

enum class AnswerKind { Attribute, Integer, Boolean };

struct Answer {
  AnswerKind kind = AnswerKind::Attribute;
  std::string attribute;
  int integer = 0;
  bool boolean = false;

  static Answer of_attribute(std::string v) {
    Answer a;
    a.kind = AnswerKind::Attribute;
    a.attribute = std::move(v);
    return a;
  }
  static Answer of_integer(int v) {
    Answer a;
    a.kind = AnswerKind::Integer;
    a.integer = v;
    return a;
  }
  static Answer of_boolean(bool v) {
    Answer a;
    a.kind = AnswerKind::Boolean;
    a.boolean = v;
    return a;
  }

  bool operator==(const Answer&) const = default;
  std::string to_string() const;
  Json to_json() const;
  static Answer from_json(const Json& j);
};

/// Result of typechecking: per-op output types plus the sink index.
struct ProgramTypes {
  std::vector<ValueType> op_types;
  int sink = -1;
  ValueType sink_type() const { return op_types.at(sink); }
};

/// Function catalogue queries.
bool is_known_function(const std::string& function);
/// Attribute-filter functions at object level (filter_size ... filter_category).
bool is_object_attribute_filter(const std::string& function);
/// Attribute-filter functions at part level, including filter_part_name.
bool is_part_attribute_filter(const std::string& function);
std::optional<Axis> filter_axis(const std::string& function);
std::optional<Axis> query_axis(const std::string& function);
std::optional<Axis> equal_attr_axis(const std::string& function);
std::optional<Axis> same_axis(const std::string& function);

/// Verifies structure, arity, literal vocabulary membership, edge types,
/// and single-sink shape. Throws TypeError/ParseError naming the op index.
ProgramTypes typecheck(const Program& program, const Vocabulary& vocab);

/// Record form: [{"function": ..., "inputs": [...], "value_inputs": [...]}].
/// parse(serialize(p)) == p and serialize(parse(j)) == j for valid inputs.
Program parse_program(const Json& records, const Vocabulary& vocab);
Json serialize_program(const Program& program);

}  // namespace sgvqa
