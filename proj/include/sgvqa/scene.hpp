#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sgvqa/vocabulary.hpp"

namespace sgvqa {

/// Spatial relations. +x is "right", +y is "front".
enum class Relation { Left, Right, Front, Behind };
const char* relation_name(Relation r);
std::optional<Relation> relation_from_name(const std::string& name);
constexpr std::array<Relation, 4> kAllRelations = {Relation::Left, Relation::Right,
                                                   Relation::Front, Relation::Behind};

struct PartInstance {
  std::string name;
  std::string color;
  std::string material;
  std::optional<std::string> texture;
};

struct ObjectInstance {
  int id = 0;
  std::string shape;
  std::string category;
  std::string size;
  std::string color;
  std::string material;
  std::optional<std::string> texture;
  double x = 0.0;
  double y = 0.0;
  double rotation = 0.0;  // yaw, degrees
  double radius = 0.0;    // footprint radius, scene units
  std::vector<PartInstance> parts;

  const PartInstance* find_part(const std::string& name) const;
};

/// relationships[r][i] = sorted ids of objects bearing relation r to object i
/// (e.g. relationships[Left][i] = everything left of i).
using RelationMap = std::array<std::vector<std::vector<int>>, 4>;

struct SceneProvenance {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::uint64_t scene_seed = 0;
};

struct Scene {
  int scene_id = 0;
  std::vector<ObjectInstance> objects;
  RelationMap relationships;
  SceneProvenance provenance;

  const std::vector<int>& related(Relation r, int object_id) const {
    return relationships[static_cast<int>(r)][object_id];
  }
  bool has_textures() const;
};

struct PlacementConfig {
  double margin = 0.4;       // extra clearance between footprints
  double plane_half = 5.0;   // scene plane is [-plane_half, plane_half]^2
  double min_axis_gap = 0.05;  // keeps per-axis coordinates distinct
  int max_retries = 200;     // per-object rejection budget
};

/// Materializes the four adjacency lists from planar coordinates.
/// Requires pairwise-distinct coordinates on both axes.
RelationMap derive_relations(const std::vector<ObjectInstance>& objects);

/// Returns every violated scene invariant; empty means valid.
std::vector<std::string> validate_scene(const Scene& scene, const Vocabulary& vocab,
                                        const PlacementConfig& placement = {});

}  // namespace sgvqa
