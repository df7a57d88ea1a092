#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgvqa/jsonio.hpp"
#include "sgvqa/scene.hpp"

namespace sgvqa {

/// Categorical likelihood tables for one detected entity. Table order is
/// the canonical vocabulary order of its axis.
struct AttributeTables {
  std::vector<double> shape;  // empty for parts
  std::vector<double> color;
  std::vector<double> material;
  std::vector<double> size;   // empty for parts
  std::vector<double> texture;  // empty when the source scene has no textures

  const std::vector<double>& table(Axis axis) const;
  std::vector<double>& table(Axis axis);
};

struct DetectedPart {
  std::string name;
  AttributeTables probs;
};

struct Detection {
  double x = 0.0;
  double y = 0.0;
  AttributeTables probs;
  std::vector<DetectedPart> parts;
  std::optional<int> gt_object;  // evaluation-only link

  void validate(const Vocabulary& vocab) const;
};

/// The probabilistic executor's input: per-detection likelihood tables
/// plus detected centers.
struct PerceivedScene {
  int scene_id = 0;
  std::vector<Detection> detections;

  void validate(const Vocabulary& vocab) const;
  bool has_texture_tables() const;
};

Json perceived_to_json(const PerceivedScene& scene);
PerceivedScene perceived_from_json(const Json& j, const Vocabulary& vocab);
Json perceived_file_json(const std::vector<PerceivedScene>& scenes,
                         const Json& info_extra = Json::object());
std::vector<PerceivedScene> perceived_from_file(const std::string& path,
                                                const Vocabulary& vocab);

/// Exact one-hot encoding of a ground-truth scene (the zero-noise case).
PerceivedScene one_hot_perceived(const Scene& scene, const Vocabulary& vocab);

}  // namespace sgvqa
