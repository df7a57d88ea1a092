#include "sgvqa/templates.hpp"

#include "sgvqa/errors.hpp"

namespace sgvqa {

const char* family_name(Family f) {
  switch (f) {
    case Family::Query: return "query";
    case Family::Count: return "count";
    case Family::Exist: return "exist";
    case Family::CompareInteger: return "compare_integer";
    case Family::CompareAttribute: return "compare_attribute";
    case Family::PartQuery: return "part_query";
    case Family::PartIdentify: return "part_identify";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::Query, Family::Count, Family::Exist, Family::CompareInteger,
                   Family::CompareAttribute, Family::PartQuery, Family::PartIdentify})
    if (name == family_name(f)) return f;
  throw Error(ErrorKind::Config, "unknown template family " + name);
}

namespace {

RoleLevel level_from_name(const std::string& name) {
  if (name == "object") return RoleLevel::Object;
  if (name == "set") return RoleLevel::Set;
  if (name == "part") return RoleLevel::Part;
  if (name == "part_scene") return RoleLevel::PartScene;
  throw Error(ErrorKind::Config, "unknown role level " + name);
}

}  // namespace

std::vector<Template> templates_from_json(const Json& j) {
  if (!j.contains("templates"))
    throw Error(ErrorKind::Config, "template file needs a templates array");
  std::vector<Template> out;
  for (const auto& jt : j.at("templates")) {
    Template t;
    t.id = jt.at("id").get<std::string>();
    t.family = family_from_name(jt.at("family").get<std::string>());
    t.text = jt.at("text").get<std::string>();
    t.requires_texture = jt.value("requires_texture", false);
    if (jt.contains("distinct"))
      for (const auto& pair : jt.at("distinct"))
        t.distinct.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    for (const auto& jo : jt.at("program")) {
      SkeletonOp op;
      op.function = jo.at("function").get<std::string>();
      if (jo.contains("inputs"))
        for (const auto& v : jo.at("inputs")) op.inputs.push_back(v.get<int>());
      if (jo.contains("value_inputs"))
        for (const auto& v : jo.at("value_inputs"))
          op.value_inputs.push_back(v.get<std::string>());
      op.ref = jo.value("ref", std::string());
      if (jo.contains("level")) op.level = level_from_name(jo.at("level").get<std::string>());
      op.of = jo.value("of", std::string());
      op.bind_owner_of = jo.value("bind_owner_of", std::string());
      op.pivot_in_relate = jo.value("pivot_in_relate", std::string());
      op.min_filters = jo.value("min_filters", 0);
      op.describe_relate = jo.value("describe_relate", true);
      t.skeleton.push_back(std::move(op));
    }
    if (t.skeleton.empty()) throw Error(ErrorKind::Config, "template with empty program: " + t.id);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Template> templates_from_file(const std::string& path) {
  return templates_from_json(load_json_file(path));
}

namespace {

// The shipped inventory, in the same schema user template files use.
const char* kBuiltinTemplates = R"JSON({
"templates": [
{"id": "query_color", "family": "query",
 "text": "What color is the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "query_color", "inputs": [2]}]},

{"id": "query_material", "family": "query",
 "text": "What material is the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "query_material", "inputs": [2]}]},

{"id": "query_size", "family": "query",
 "text": "What size is the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "query_size", "inputs": [2]}]},

{"id": "query_shape", "family": "query",
 "text": "What kind of vehicle is the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "query_shape", "inputs": [2]}]},

{"id": "query_texture", "family": "query", "requires_texture": true,
 "text": "What texture is the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "query_texture", "inputs": [2]}]},

{"id": "count", "family": "count",
 "text": "How many <P:s> are there?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "s", "level": "set"},
   {"function": "count", "inputs": [1]}]},

{"id": "count_relate", "family": "count",
 "text": "How many <P:s> are <REL:r> the <D:a>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "a", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "a"},
   {"function": "relate", "inputs": [2], "ref": "r"},
   {"function": "%filters", "inputs": [3], "ref": "s", "level": "set",
    "pivot_in_relate": "r", "describe_relate": false},
   {"function": "count", "inputs": [4]}]},

{"id": "exist", "family": "exist",
 "text": "Is there <A:s>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "s", "level": "set", "min_filters": 1},
   {"function": "exist", "inputs": [1]}]},

{"id": "exist_relate", "family": "exist",
 "text": "Is there <A:s> <REL:r> the <D:a>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "a", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "a"},
   {"function": "relate", "inputs": [2], "ref": "r"},
   {"function": "%filters", "inputs": [3], "ref": "s", "level": "set",
    "pivot_in_relate": "r", "describe_relate": false},
   {"function": "exist", "inputs": [4]}]},

{"id": "compare_count_equal", "family": "compare_integer",
 "text": "Are there the same number of <P:x> and <P:y>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [1]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [3], "ref": "y", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [4]},
   {"function": "equal_integer", "inputs": [2, 5]}]},

{"id": "compare_count_less", "family": "compare_integer",
 "text": "Are there fewer <P:x> than <P:y>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [1]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [3], "ref": "y", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [4]},
   {"function": "less_than", "inputs": [2, 5]}]},

{"id": "compare_count_more", "family": "compare_integer",
 "text": "Are there more <P:x> than <P:y>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [1]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [3], "ref": "y", "level": "set", "min_filters": 1},
   {"function": "count", "inputs": [4]},
   {"function": "greater_than", "inputs": [2, 5]}]},

{"id": "compare_color", "family": "compare_attribute",
 "text": "Do the <D:x> and the <D:y> have the same color?",
 "distinct": [["x", "y"]],
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "x"},
   {"function": "query_color", "inputs": [2]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [4], "ref": "y", "level": "object"},
   {"function": "unique", "inputs": [5], "ref": "y"},
   {"function": "query_color", "inputs": [6]},
   {"function": "equal_color", "inputs": [3, 7]}]},

{"id": "compare_size", "family": "compare_attribute",
 "text": "Do the <D:x> and the <D:y> have the same size?",
 "distinct": [["x", "y"]],
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "x"},
   {"function": "query_size", "inputs": [2]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [4], "ref": "y", "level": "object"},
   {"function": "unique", "inputs": [5], "ref": "y"},
   {"function": "query_size", "inputs": [6]},
   {"function": "equal_size", "inputs": [3, 7]}]},

{"id": "compare_material", "family": "compare_attribute",
 "text": "Do the <D:x> and the <D:y> have the same material?",
 "distinct": [["x", "y"]],
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "x"},
   {"function": "query_material", "inputs": [2]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [4], "ref": "y", "level": "object"},
   {"function": "unique", "inputs": [5], "ref": "y"},
   {"function": "query_material", "inputs": [6]},
   {"function": "equal_material", "inputs": [3, 7]}]},

{"id": "compare_shape", "family": "compare_attribute",
 "text": "Are the <D:x> and the <D:y> the same kind of vehicle?",
 "distinct": [["x", "y"]],
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "x", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "x"},
   {"function": "query_shape", "inputs": [2]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [4], "ref": "y", "level": "object"},
   {"function": "unique", "inputs": [5], "ref": "y"},
   {"function": "query_shape", "inputs": [6]},
   {"function": "equal_shape", "inputs": [3, 7]}]},

{"id": "part_query_color", "family": "part_query",
 "text": "What color is the <D:p> of the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "object_to_part", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "p", "level": "part", "of": "t"},
   {"function": "unique", "inputs": [4], "ref": "p"},
   {"function": "query_color", "inputs": [5]}]},

{"id": "part_query_material", "family": "part_query",
 "text": "What material is the <D:p> of the <D:t>?",
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t"},
   {"function": "object_to_part", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "p", "level": "part", "of": "t"},
   {"function": "unique", "inputs": [4], "ref": "p"},
   {"function": "query_material", "inputs": [5]}]},

{"id": "part_compare_color", "family": "part_query",
 "text": "Do the <D:p1> of the <D:t1> and the <D:p2> of the <D:t2> have the same color?",
 "distinct": [["t1", "t2"]],
 "program": [
   {"function": "scene"},
   {"function": "%filters", "inputs": [0], "ref": "t1", "level": "object"},
   {"function": "unique", "inputs": [1], "ref": "t1"},
   {"function": "object_to_part", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "p1", "level": "part", "of": "t1"},
   {"function": "unique", "inputs": [4], "ref": "p1"},
   {"function": "query_color", "inputs": [5]},
   {"function": "scene"},
   {"function": "%filters", "inputs": [7], "ref": "t2", "level": "object"},
   {"function": "unique", "inputs": [8], "ref": "t2"},
   {"function": "object_to_part", "inputs": [9]},
   {"function": "%filters", "inputs": [10], "ref": "p2", "level": "part", "of": "t2"},
   {"function": "unique", "inputs": [11], "ref": "p2"},
   {"function": "query_color", "inputs": [12]},
   {"function": "equal_color", "inputs": [6, 13]}]},

{"id": "part_identify_shape", "family": "part_identify",
 "text": "Which <D:o> has <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "o", "level": "object", "bind_owner_of": "p"},
   {"function": "unique", "inputs": [4], "ref": "o"},
   {"function": "query_shape", "inputs": [5]}]},

{"id": "part_identify_color", "family": "part_identify",
 "text": "What color is the <D:o> that has <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "o", "level": "object", "bind_owner_of": "p"},
   {"function": "unique", "inputs": [4], "ref": "o"},
   {"function": "query_color", "inputs": [5]}]},

{"id": "part_identify_size", "family": "part_identify",
 "text": "What size is the <D:o> that has <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "o", "level": "object", "bind_owner_of": "p"},
   {"function": "unique", "inputs": [4], "ref": "o"},
   {"function": "query_size", "inputs": [5]}]},

{"id": "part_identify_material", "family": "part_identify",
 "text": "What material is the <D:o> that has <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "%filters", "inputs": [3], "ref": "o", "level": "object", "bind_owner_of": "p"},
   {"function": "unique", "inputs": [4], "ref": "o"},
   {"function": "query_material", "inputs": [5]}]},

{"id": "part_identify_count", "family": "part_identify",
 "text": "How many vehicles have <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "count", "inputs": [3]}]},

{"id": "part_identify_exist", "family": "part_identify",
 "text": "Is there a vehicle that has <A:p>?",
 "program": [
   {"function": "scene"},
   {"function": "object_to_part", "inputs": [0]},
   {"function": "%filters", "inputs": [1], "ref": "p", "level": "part_scene", "min_filters": 1},
   {"function": "part_to_object", "inputs": [2]},
   {"function": "exist", "inputs": [3]}]}
]})JSON";

}  // namespace

const std::vector<Template>& builtin_templates() {
  static const std::vector<Template> templates =
      templates_from_json(Json::parse(kBuiltinTemplates));
  return templates;
}

}  // namespace sgvqa
