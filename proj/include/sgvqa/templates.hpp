#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgvqa/jsonio.hpp"

namespace sgvqa {

enum class Family {
  Query,
  Count,
  Exist,
  CompareInteger,
  CompareAttribute,
  PartQuery,
  PartIdentify,
};
const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// Kinds of chain roles a template declares through %filters placeholders.
///   Object   - a referent chain ending in unique
///   Set      - a filter chain feeding count/exist (no unique)
///   Part     - parts of a bound parent object, ending in part unique
///   PartScene- the scene-wide part pool, feeding part_to_object
enum class RoleLevel { Object, Set, Part, PartScene };

/// Skeleton op: either a concrete DSL operation or a %filters placeholder
/// that the generator expands into a sampled filter chain.
struct SkeletonOp {
  std::string function;             // DSL name or "%filters"
  std::vector<int> inputs;          // indices into the skeleton
  std::vector<std::string> value_inputs;
  std::string ref;                  // role name (placeholders, unique, relate)
  RoleLevel level = RoleLevel::Object;
  std::string of;                   // parent role for Part level
  std::string bind_owner_of;        // bind this object role to a part role's owner
  std::string pivot_in_relate;      // sample the set pivot inside this relate role
  int min_filters = 0;
  bool describe_relate = true;      // render a relate source inside the description
};

struct Template {
  std::string id;
  Family family = Family::Query;
  std::string text;  // slot forms: <D:r> <A:r> <P:r> <REL:r>
  std::vector<SkeletonOp> skeleton;
  std::vector<std::pair<std::string, std::string>> distinct;  // role pairs
  bool requires_texture = false;
};

/// Loads templates from the documented JSON schema ({"templates": [...]}).
std::vector<Template> templates_from_json(const Json& j);
std::vector<Template> templates_from_file(const std::string& path);

/// The compiled-in inventory: CLEVR-style object templates extended with
/// texture, plus 9 part-based templates.
const std::vector<Template>& builtin_templates();

}  // namespace sgvqa
