#include "sgvqa/program.hpp"

#include <algorithm>
#include <map>

#include "sgvqa/errors.hpp"
#include "sgvqa/scene.hpp"

namespace sgvqa {

const char* value_type_name(ValueType t) {
  switch (t) {
    case ValueType::ObjectSet: return "object set";
    case ValueType::Object: return "object";
    case ValueType::PartSet: return "part set";
    case ValueType::Part: return "part";
    case ValueType::Integer: return "integer";
    case ValueType::Boolean: return "boolean";
    case ValueType::AttrSize: return "size attribute";
    case ValueType::AttrColor: return "color attribute";
    case ValueType::AttrMaterial: return "material attribute";
    case ValueType::AttrShape: return "shape attribute";
    case ValueType::AttrTexture: return "texture attribute";
  }
  return "?";
}

bool is_attribute_type(ValueType t) {
  switch (t) {
    case ValueType::AttrSize:
    case ValueType::AttrColor:
    case ValueType::AttrMaterial:
    case ValueType::AttrShape:
    case ValueType::AttrTexture:
      return true;
    default:
      return false;
  }
}

ValueType attr_type_for_axis(Axis axis) {
  switch (axis) {
    case Axis::Size: return ValueType::AttrSize;
    case Axis::Color: return ValueType::AttrColor;
    case Axis::Material: return ValueType::AttrMaterial;
    case Axis::Shape: return ValueType::AttrShape;
    case Axis::Texture: return ValueType::AttrTexture;
  }
  return ValueType::AttrShape;
}

std::string Answer::to_string() const {
  switch (kind) {
    case AnswerKind::Attribute: return attribute;
    case AnswerKind::Integer: return std::to_string(integer);
    case AnswerKind::Boolean: return boolean ? "yes" : "no";
  }
  return "";
}

Json Answer::to_json() const {
  switch (kind) {
    case AnswerKind::Attribute: return attribute;
    case AnswerKind::Integer: return integer;
    case AnswerKind::Boolean: return boolean;
  }
  return nullptr;
}

Answer Answer::from_json(const Json& j) {
  if (j.is_string()) return of_attribute(j.get<std::string>());
  if (j.is_boolean()) return of_boolean(j.get<bool>());
  if (j.is_number_integer()) return of_integer(j.get<int>());
  throw Error(ErrorKind::ParseError, "answer must be string, integer, or boolean");
}

namespace {

const std::vector<std::string>& function_names() {
  static const std::vector<std::string> names = {
      "scene",
      "filter_size", "filter_color", "filter_material", "filter_shape",
      "filter_texture", "filter_category",
      "unique", "relate",
      "same_size", "same_color", "same_material", "same_shape",
      "intersect", "union",
      "count", "exist",
      "query_size", "query_color", "query_material", "query_shape", "query_texture",
      "equal_integer", "less_than", "greater_than",
      "equal_size", "equal_color", "equal_material", "equal_shape",
      "object_to_part", "part_to_object", "filter_part_name",
  };
  return names;
}

int expected_value_inputs(const std::string& f) {
  if (f == "relate" || f == "filter_part_name") return 1;
  if (filter_axis(f) || f == "filter_category") return 1;
  return 0;
}

int expected_inputs(const std::string& f) {
  if (f == "scene") return 0;
  if (f == "intersect" || f == "union" || f == "equal_integer" || f == "less_than" ||
      f == "greater_than" || equal_attr_axis(f))
    return 2;
  return 1;
}

}  // namespace

bool is_known_function(const std::string& function) {
  const auto& names = function_names();
  return std::find(names.begin(), names.end(), function) != names.end();
}

bool is_object_attribute_filter(const std::string& function) {
  return function == "filter_size" || function == "filter_color" ||
         function == "filter_material" || function == "filter_shape" ||
         function == "filter_texture" || function == "filter_category";
}

bool is_part_attribute_filter(const std::string& function) {
  return function == "filter_color" || function == "filter_material" ||
         function == "filter_part_name";
}

std::optional<Axis> filter_axis(const std::string& function) {
  if (function == "filter_size") return Axis::Size;
  if (function == "filter_color") return Axis::Color;
  if (function == "filter_material") return Axis::Material;
  if (function == "filter_shape") return Axis::Shape;
  if (function == "filter_texture") return Axis::Texture;
  return std::nullopt;
}

std::optional<Axis> query_axis(const std::string& function) {
  if (function == "query_size") return Axis::Size;
  if (function == "query_color") return Axis::Color;
  if (function == "query_material") return Axis::Material;
  if (function == "query_shape") return Axis::Shape;
  if (function == "query_texture") return Axis::Texture;
  return std::nullopt;
}

std::optional<Axis> equal_attr_axis(const std::string& function) {
  if (function == "equal_size") return Axis::Size;
  if (function == "equal_color") return Axis::Color;
  if (function == "equal_material") return Axis::Material;
  if (function == "equal_shape") return Axis::Shape;
  return std::nullopt;
}

std::optional<Axis> same_axis(const std::string& function) {
  if (function == "same_size") return Axis::Size;
  if (function == "same_color") return Axis::Color;
  if (function == "same_material") return Axis::Material;
  if (function == "same_shape") return Axis::Shape;
  return std::nullopt;
}

namespace {

[[noreturn]] void type_fail(int op_index, const std::string& message) {
  throw Error(ErrorKind::TypeError, "op " + std::to_string(op_index) + ": " + message);
}

void check_literal(int op_index, const Operation& op, const Vocabulary& vocab, bool part_level) {
  const std::string& f = op.function;
  const std::string& value = op.value_inputs.at(0);
  if (f == "relate") {
    if (!relation_from_name(value)) type_fail(op_index, "unknown relation " + value);
    return;
  }
  if (f == "filter_category") {
    if (!vocab.is_category(value)) type_fail(op_index, "unknown category " + value);
    return;
  }
  if (f == "filter_part_name") {
    if (!vocab.is_part_name(value)) type_fail(op_index, "unknown part name " + value);
    return;
  }
  const auto axis = filter_axis(f);
  if (axis && vocab.index_of(*axis, value) < 0)
    type_fail(op_index, "unknown " + std::string(axis_name(*axis)) + " " + value);
  (void)part_level;
}

/// Output type of one op given its input types; nullopt if no signature
/// matches. filter/unique/query are overloaded over object and part level.
std::optional<ValueType> signature(const std::string& f, const std::vector<ValueType>& in) {
  const auto one = [&](ValueType t) { return in.size() == 1 && in[0] == t; };
  const auto two = [&](ValueType a, ValueType b) {
    return in.size() == 2 && in[0] == a && in[1] == b;
  };

  if (f == "scene") return in.empty() ? std::optional(ValueType::ObjectSet) : std::nullopt;

  if (f == "filter_category" || f == "filter_size" || f == "filter_shape" ||
      f == "filter_texture") {
    if (one(ValueType::ObjectSet)) return ValueType::ObjectSet;
    return std::nullopt;
  }
  if (f == "filter_color" || f == "filter_material") {
    if (one(ValueType::ObjectSet)) return ValueType::ObjectSet;
    if (one(ValueType::PartSet)) return ValueType::PartSet;
    return std::nullopt;
  }
  if (f == "filter_part_name") {
    if (one(ValueType::PartSet)) return ValueType::PartSet;
    return std::nullopt;
  }
  if (f == "unique") {
    if (one(ValueType::ObjectSet)) return ValueType::Object;
    if (one(ValueType::PartSet)) return ValueType::Part;
    return std::nullopt;
  }
  if (f == "relate") {
    if (one(ValueType::Object)) return ValueType::ObjectSet;
    return std::nullopt;
  }
  if (same_axis(f)) {
    if (one(ValueType::Object)) return ValueType::ObjectSet;
    return std::nullopt;
  }
  if (f == "intersect" || f == "union") {
    if (two(ValueType::ObjectSet, ValueType::ObjectSet)) return ValueType::ObjectSet;
    return std::nullopt;
  }
  if (f == "count") {
    if (one(ValueType::ObjectSet)) return ValueType::Integer;
    return std::nullopt;
  }
  if (f == "exist") {
    if (one(ValueType::ObjectSet)) return ValueType::Boolean;
    return std::nullopt;
  }
  if (const auto axis = query_axis(f)) {
    const ValueType out = attr_type_for_axis(*axis);
    if (one(ValueType::Object)) return out;
    if ((f == "query_color" || f == "query_material") && one(ValueType::Part)) return out;
    return std::nullopt;
  }
  if (f == "equal_integer" || f == "less_than" || f == "greater_than") {
    if (two(ValueType::Integer, ValueType::Integer)) return ValueType::Boolean;
    return std::nullopt;
  }
  if (const auto axis = equal_attr_axis(f)) {
    const ValueType attr = attr_type_for_axis(*axis);
    if (two(attr, attr)) return ValueType::Boolean;
    return std::nullopt;
  }
  if (f == "object_to_part") {
    // Accepts a resolved object (parts of that object) or a whole set
    // (scene-wide part pool); both yield a part set.
    if (one(ValueType::Object) || one(ValueType::ObjectSet)) return ValueType::PartSet;
    return std::nullopt;
  }
  if (f == "part_to_object") {
    if (one(ValueType::PartSet)) return ValueType::ObjectSet;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

ProgramTypes typecheck(const Program& program, const Vocabulary& vocab) {
  if (program.ops.empty()) throw Error(ErrorKind::TypeError, "empty program");
  ProgramTypes types;
  types.op_types.reserve(program.ops.size());
  std::vector<bool> consumed(program.ops.size(), false);

  for (int i = 0; i < program.size(); ++i) {
    const Operation& op = program.ops[i];
    if (!is_known_function(op.function))
      throw Error(ErrorKind::ParseError,
                  "op " + std::to_string(i) + ": unknown function " + op.function);
    if (static_cast<int>(op.inputs.size()) != expected_inputs(op.function))
      type_fail(i, op.function + " expects " + std::to_string(expected_inputs(op.function)) +
                       " inputs");
    if (static_cast<int>(op.value_inputs.size()) != expected_value_inputs(op.function))
      type_fail(i, op.function + " expects " +
                       std::to_string(expected_value_inputs(op.function)) + " value inputs");

    std::vector<ValueType> in_types;
    for (int input : op.inputs) {
      if (input < 0 || input >= i)
        throw Error(ErrorKind::ParseError,
                    "op " + std::to_string(i) + ": input " + std::to_string(input) +
                        " is not an earlier operation");
      in_types.push_back(types.op_types[input]);
      consumed[input] = true;
    }

    const auto out = signature(op.function, in_types);
    if (!out) {
      std::string got;
      for (const auto t : in_types) {
        if (!got.empty()) got += ", ";
        got += value_type_name(t);
      }
      type_fail(i, op.function + " cannot take (" + got + ")");
    }
    if (!op.value_inputs.empty())
      check_literal(i, op, vocab, in_types.size() == 1 && in_types[0] == ValueType::PartSet);
    types.op_types.push_back(*out);
  }

  int sink = -1;
  for (int i = 0; i < program.size(); ++i) {
    if (consumed[i]) continue;
    if (sink >= 0)
      throw Error(ErrorKind::TypeError, "program has more than one sink (ops " +
                                            std::to_string(sink) + " and " + std::to_string(i) +
                                            ")");
    sink = i;
  }
  types.sink = sink;
  const ValueType st = types.sink_type();
  if (st != ValueType::Integer && st != ValueType::Boolean && !is_attribute_type(st))
    throw Error(ErrorKind::TypeError,
                std::string("sink type must be an answer type, got ") + value_type_name(st));
  return types;
}

Program parse_program(const Json& records, const Vocabulary& vocab) {
  if (!records.is_array()) throw Error(ErrorKind::ParseError, "program must be an array");
  Program program;
  int index = 0;
  for (const auto& rec : records) {
    Operation op;
    if (!rec.contains("function") || !rec.at("function").is_string())
      throw Error(ErrorKind::ParseError,
                  "op " + std::to_string(index) + ": missing function name");
    op.function = rec.at("function").get<std::string>();
    if (rec.contains("inputs"))
      for (const auto& v : rec.at("inputs")) op.inputs.push_back(v.get<int>());
    if (rec.contains("value_inputs"))
      for (const auto& v : rec.at("value_inputs"))
        op.value_inputs.push_back(v.get<std::string>());
    program.ops.push_back(std::move(op));
    ++index;
  }
  typecheck(program, vocab);  // validation is part of parsing
  return program;
}

Json serialize_program(const Program& program) {
  Json arr = Json::array();
  for (const auto& op : program.ops) {
    Json rec;
    rec["function"] = op.function;
    rec["inputs"] = op.inputs;
    rec["value_inputs"] = op.value_inputs;
    arr.push_back(rec);
  }
  return arr;
}

}  // namespace sgvqa
