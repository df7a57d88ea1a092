#include "sgvqa/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "sgvqa/errors.hpp"

namespace sgvqa {

const char* visual_variant_name(VisualVariant v) {
  switch (v) {
    case VisualVariant::Easy: return "easy";
    case VisualVariant::Mid: return "mid";
    case VisualVariant::Hard: return "hard";
  }
  return "?";
}

VisualVariant visual_variant_from_name(const std::string& name) {
  if (name == "easy") return VisualVariant::Easy;
  if (name == "mid") return VisualVariant::Mid;
  if (name == "hard") return VisualVariant::Hard;
  throw Error(ErrorKind::InvalidParameter, "unknown visual variant " + name);
}

void GenConfig::validate(const Vocabulary& vocab) const {
  shape_dist.validate();
  color_dist.validate();
  material_dist.validate();
  if (static_cast<int>(shape_dist.weights.size()) != vocab.axis_size(Axis::Shape))
    throw Error(ErrorKind::InvalidParameter, "shape distribution has wrong length");
  if (static_cast<int>(color_dist.weights.size()) != vocab.axis_size(Axis::Color))
    throw Error(ErrorKind::InvalidParameter, "color distribution has wrong length");
  if (static_cast<int>(material_dist.weights.size()) != vocab.axis_size(Axis::Material))
    throw Error(ErrorKind::InvalidParameter, "material distribution has wrong length");
  if (co_matrix) co_matrix->validate();
  if (min_objects < 1 || max_objects < min_objects)
    throw Error(ErrorKind::InvalidParameter, "bad object count range");
  if (parts_perturbed < 0)
    throw Error(ErrorKind::InvalidParameter, "parts_perturbed must be non-negative");
  if (placement.max_retries < 1)
    throw Error(ErrorKind::InvalidParameter, "placement retries must be positive");
}

GenConfig default_gen_config(const Vocabulary& vocab) {
  GenConfig cfg;
  cfg.shape_dist = variant_distribution(DistVariant::Bal, Axis::Shape, vocab);
  cfg.color_dist = variant_distribution(DistVariant::Bal, Axis::Color, vocab);
  cfg.material_dist = variant_distribution(DistVariant::Bal, Axis::Material, vocab);
  return cfg;
}

namespace {

struct Placement {
  double x, y;
};

bool fits(const std::vector<ObjectInstance>& placed, double x, double y, double radius,
          const PlacementConfig& p) {
  for (const auto& o : placed) {
    const double dx = o.x - x;
    const double dy = o.y - y;
    if (std::sqrt(dx * dx + dy * dy) < o.radius + radius + p.margin) return false;
    if (std::abs(o.x - x) < p.min_axis_gap) return false;
    if (std::abs(o.y - y) < p.min_axis_gap) return false;
  }
  return true;
}

Placement place_object(const std::vector<ObjectInstance>& placed, double radius,
                       const PlacementConfig& p, Rng& rng) {
  const double lo = -p.plane_half + radius;
  const double hi = p.plane_half - radius;
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    const double x = rng.uniform(lo, hi);
    const double y = rng.uniform(lo, hi);
    if (fits(placed, x, y, radius, p)) return {x, y};
  }
  throw Error(ErrorKind::PlacementExhausted,
              "could not place object after " + std::to_string(p.max_retries) + " tries");
}

}  // namespace

Scene sample_scene(const GenConfig& cfg, const Vocabulary& vocab, int scene_id,
                   std::uint64_t attempt) {
  cfg.validate(vocab);
  Rng layout = derive_rng(cfg.seed, static_cast<std::uint64_t>(scene_id), Stream::Layout, attempt);

  Scene scene;
  scene.scene_id = scene_id;
  scene.provenance.config_digest = cfg.config_digest;
  scene.provenance.seed = cfg.seed;
  scene.provenance.scene_seed = mix64(mix64(cfg.seed, scene_id), attempt);

  const int span = cfg.max_objects - cfg.min_objects + 1;
  const int n = cfg.min_objects + static_cast<int>(layout.uniform_int(span));

  for (int i = 0; i < n; ++i) {
    ObjectInstance o;
    o.id = i;
    const int shape_idx = sample_concept(cfg.shape_dist, layout);
    o.shape = vocab.shapes()[shape_idx];
    o.category = vocab.category_of(o.shape);
    // Size stays uniform across all variants.
    o.size = vocab.sizes()[layout.uniform_int(vocab.sizes().size())];
    o.radius = vocab.radius_of_size(o.size);
    const int color_idx = cfg.co_matrix ? sample_row(cfg.co_matrix->rows[shape_idx], layout)
                                        : sample_concept(cfg.color_dist, layout);
    o.color = vocab.colors()[color_idx];
    o.material = vocab.materials()[sample_concept(cfg.material_dist, layout)];
    o.rotation = layout.uniform(0.0, 360.0);
    const Placement p = place_object(scene.objects, o.radius, cfg.placement, layout);
    o.x = p.x;
    o.y = p.y;
    for (const auto& part_name : vocab.parts_of(o.shape)) {
      PartInstance part;
      part.name = part_name;
      part.color = o.color;
      part.material = o.material;
      o.parts.push_back(std::move(part));
    }
    scene.objects.push_back(std::move(o));
  }

  // Variant-specific attribute perturbation draws from separate streams so
  // the layout above is shared across easy/mid/hard, and mid/hard share the
  // same part perturbations.
  std::vector<std::vector<bool>> perturbed(scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i)
    perturbed[i].assign(scene.objects[i].parts.size(), false);

  const int n_perturb = cfg.effective_parts_perturbed();
  if (n_perturb > 0) {
    Rng parts_rng =
        derive_rng(cfg.seed, static_cast<std::uint64_t>(scene_id), Stream::PartPerturb, attempt);
    for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
      auto& o = scene.objects[oi];
      const auto& exterior = vocab.exterior_parts_of(o.shape);
      std::vector<int> pool(exterior.size());
      for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = static_cast<int>(k);
      const int take = std::min<int>(n_perturb, static_cast<int>(pool.size()));
      for (int k = 0; k < take; ++k) {
        const int j = k + static_cast<int>(parts_rng.uniform_int(pool.size() - k));
        std::swap(pool[k], pool[j]);
      }
      std::vector<int> chosen(pool.begin(), pool.begin() + take);
      std::sort(chosen.begin(), chosen.end());
      for (int idx : chosen) {
        const std::string& part_name = exterior[idx];
        for (std::size_t pi = 0; pi < o.parts.size(); ++pi) {
          if (o.parts[pi].name != part_name) continue;
          o.parts[pi].color = vocab.colors()[sample_concept(cfg.color_dist, parts_rng)];
          o.parts[pi].material = vocab.materials()[sample_concept(cfg.material_dist, parts_rng)];
          perturbed[oi][pi] = true;
          break;
        }
      }
    }
  }

  if (cfg.textures_enabled()) {
    Rng tex_rng =
        derive_rng(cfg.seed, static_cast<std::uint64_t>(scene_id), Stream::Texture, attempt);
    // Bodies and perturbed parts draw their own texture; unperturbed parts
    // inherit the body texture.
    for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
      auto& o = scene.objects[oi];
      const std::string body_texture =
          vocab.textures()[tex_rng.uniform_int(vocab.textures().size())];
      o.texture = body_texture;
      for (std::size_t pi = 0; pi < o.parts.size(); ++pi) {
        o.parts[pi].texture = perturbed[oi][pi]
                                  ? vocab.textures()[tex_rng.uniform_int(vocab.textures().size())]
                                  : body_texture;
      }
    }
  }

  scene.relationships = derive_relations(scene.objects);
  return scene;
}

Scene sample_scene_with_retries(const GenConfig& cfg, const Vocabulary& vocab, int scene_id,
                                int max_attempts) {
  for (int attempt = 0;; ++attempt) {
    try {
      return sample_scene(cfg, vocab, scene_id, static_cast<std::uint64_t>(attempt));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PlacementExhausted || attempt + 1 >= max_attempts) throw;
    }
  }
}

}  // namespace sgvqa
