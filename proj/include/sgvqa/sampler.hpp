#pragma once

#include <optional>

#include "sgvqa/distributions.hpp"
#include "sgvqa/scene.hpp"

namespace sgvqa {

enum class VisualVariant { Easy, Mid, Hard };
const char* visual_variant_name(VisualVariant v);
VisualVariant visual_variant_from_name(const std::string& name);

/// Everything scene sampling depends on. Scenes are deterministic given
/// (config, scene_id); the layout draw stream is independent of the visual
/// variant, so easy/mid/hard runs with the same seed share object shapes,
/// sizes, counts, and positions.
struct GenConfig {
  VisualVariant visual = VisualVariant::Mid;
  ConceptDistribution shape_dist;
  ConceptDistribution color_dist;
  ConceptDistribution material_dist;
  std::optional<CoDistributionMatrix> co_matrix;  // owns colors when present
  int min_objects = 3;
  int max_objects = 10;
  int parts_perturbed = 3;  // forced to 0 for easy
  PlacementConfig placement;
  std::uint64_t seed = 0;
  std::string config_digest;  // recorded into scene provenance

  void validate(const Vocabulary& vocab) const;
  bool textures_enabled() const { return visual == VisualVariant::Hard; }
  int effective_parts_perturbed() const {
    return visual == VisualVariant::Easy ? 0 : parts_perturbed;
  }
};

GenConfig default_gen_config(const Vocabulary& vocab);

/// Samples one valid scene. Throws PlacementExhausted when the rejection
/// budget runs out; callers retry with a bumped attempt index.
Scene sample_scene(const GenConfig& cfg, const Vocabulary& vocab, int scene_id,
                   std::uint64_t attempt = 0);

/// sample_scene with a bounded number of placement re-attempts.
Scene sample_scene_with_retries(const GenConfig& cfg, const Vocabulary& vocab, int scene_id,
                                int max_attempts = 16);

}  // namespace sgvqa
