#include "sgvqa/perception.hpp"

#include <algorithm>

#include "sgvqa/errors.hpp"

namespace sgvqa {

void NoiseConfig::validate() const {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw Error(ErrorKind::InvalidParameter, "epsilon must be in [0,1)");
  if (confusion_scale < 0.0)
    throw Error(ErrorKind::InvalidParameter, "confusion scale must be non-negative");
  if (epsilon * confusion_scale >= 1.0)
    throw Error(ErrorKind::InvalidParameter, "confusion probability must stay below 1");
  if (position_sigma < 0.0)
    throw Error(ErrorKind::InvalidParameter, "position sigma must be non-negative");
  if (miss_rate < 0.0 || miss_rate > 1.0)
    throw Error(ErrorKind::InvalidParameter, "miss rate must be in [0,1]");
  if (spurious_rate < 0.0)
    throw Error(ErrorKind::InvalidParameter, "spurious rate must be non-negative");
}

namespace {

enum EntityTag : std::uint64_t { kObjectEntity = 0x10000, kSpuriousEntity = 0x20000 };

// One stream per (scene, object, part, axis) so noise decisions nest when
// epsilon is swept under a fixed seed.
Rng axis_rng(const NoiseConfig& noise, int scene_id, std::uint64_t entity, int part, Axis axis) {
  const std::uint64_t tag =
      mix64(mix64(entity, static_cast<std::uint64_t>(part + 1)),
            static_cast<std::uint64_t>(axis) + 11);
  return derive_rng(mix64(noise.seed, static_cast<std::uint64_t>(scene_id)), tag,
                    Stream::Perception);
}

std::vector<double> noisy_table(int truth_index, int k, const NoiseConfig& noise, Rng& rng) {
  int peak = truth_index;
  const double flip_u = rng.uniform();
  const std::uint64_t wrong_draw = rng.uniform_int(std::max(1, k - 1));
  if (k > 1 && flip_u < noise.epsilon * noise.confusion_scale) {
    // Confidently wrong: peak moves to a uniformly chosen other label.
    peak = static_cast<int>(wrong_draw);
    if (peak >= truth_index) ++peak;
  }
  std::vector<double> table(k, noise.epsilon / k);
  table[peak] += 1.0 - noise.epsilon;
  return table;
}

std::vector<double> uniform_table(int k) {
  return std::vector<double>(k, 1.0 / k);
}

}  // namespace

PerceivedScene perceive(const Scene& scene, const NoiseConfig& noise, const Vocabulary& vocab) {
  noise.validate();
  PerceivedScene out;
  out.scene_id = scene.scene_id;
  const std::uint64_t scene_key = mix64(noise.seed, static_cast<std::uint64_t>(scene.scene_id));

  for (const auto& o : scene.objects) {
    const std::uint64_t entity = kObjectEntity + static_cast<std::uint64_t>(o.id);
    {
      Rng survival = axis_rng(noise, scene.scene_id, entity, -2, Axis::Shape);
      if (survival.uniform() < noise.miss_rate) continue;
    }
    Detection d;
    d.gt_object = o.id;
    {
      Rng pos = axis_rng(noise, scene.scene_id, entity, -3, Axis::Size);
      d.x = o.x + noise.position_sigma * pos.gaussian();
      d.y = o.y + noise.position_sigma * pos.gaussian();
    }
    auto fill = [&](Axis axis, int part, const std::string& truth, std::vector<double>& table) {
      Rng rng = axis_rng(noise, scene.scene_id, entity, part, axis);
      table = noisy_table(vocab.index_of(axis, truth), vocab.axis_size(axis), noise, rng);
    };
    fill(Axis::Shape, -1, o.shape, d.probs.shape);
    fill(Axis::Color, -1, o.color, d.probs.color);
    fill(Axis::Material, -1, o.material, d.probs.material);
    fill(Axis::Size, -1, o.size, d.probs.size);
    if (o.texture) fill(Axis::Texture, -1, *o.texture, d.probs.texture);
    for (std::size_t pi = 0; pi < o.parts.size(); ++pi) {
      const PartInstance& part = o.parts[pi];
      DetectedPart dp;
      dp.name = part.name;
      fill(Axis::Color, static_cast<int>(pi), part.color, dp.probs.color);
      fill(Axis::Material, static_cast<int>(pi), part.material, dp.probs.material);
      if (part.texture) fill(Axis::Texture, static_cast<int>(pi), *part.texture, dp.probs.texture);
      d.parts.push_back(std::move(dp));
    }
    out.detections.push_back(std::move(d));
  }

  if (noise.spurious_rate > 0.0) {
    Rng spur(mix64(scene_key, kSpuriousEntity));
    const int extra = spur.poisson(noise.spurious_rate);
    const bool textures = scene.has_textures();
    for (int s = 0; s < extra; ++s) {
      Detection d;
      d.x = spur.uniform(-noise.plane_half, noise.plane_half);
      d.y = spur.uniform(-noise.plane_half, noise.plane_half);
      d.probs.shape = uniform_table(vocab.axis_size(Axis::Shape));
      d.probs.color = uniform_table(vocab.axis_size(Axis::Color));
      d.probs.material = uniform_table(vocab.axis_size(Axis::Material));
      d.probs.size = uniform_table(vocab.axis_size(Axis::Size));
      if (textures) d.probs.texture = uniform_table(vocab.axis_size(Axis::Texture));
      out.detections.push_back(std::move(d));
    }
  }
  return out;
}

namespace {

int argmax_lowest(const std::vector<double>& table) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(table.size()); ++i)
    if (table[i] > table[best]) best = i;
  return best;
}

}  // namespace

Scene harden(const PerceivedScene& pscene, const Vocabulary& vocab) {
  Scene scene;
  scene.scene_id = pscene.scene_id;
  int id = 0;
  for (const auto& d : pscene.detections) {
    if (d.probs.shape.empty() || d.probs.color.empty() || d.probs.material.empty() ||
        d.probs.size.empty())
      throw Error(ErrorKind::InvalidParameter, "detection with empty attribute tables");
    ObjectInstance o;
    o.id = id++;
    o.shape = vocab.shapes()[argmax_lowest(d.probs.shape)];
    o.category = vocab.category_of(o.shape);
    o.color = vocab.colors()[argmax_lowest(d.probs.color)];
    o.material = vocab.materials()[argmax_lowest(d.probs.material)];
    o.size = vocab.sizes()[argmax_lowest(d.probs.size)];
    if (!d.probs.texture.empty()) o.texture = vocab.textures()[argmax_lowest(d.probs.texture)];
    o.x = d.x;
    o.y = d.y;
    o.radius = vocab.radius_of_size(o.size);
    for (const auto& p : d.parts) {
      PartInstance part;
      part.name = p.name;
      part.color = vocab.colors()[argmax_lowest(p.probs.color)];
      part.material = vocab.materials()[argmax_lowest(p.probs.material)];
      if (!p.probs.texture.empty())
        part.texture = vocab.textures()[argmax_lowest(p.probs.texture)];
      o.parts.push_back(std::move(part));
    }
    scene.objects.push_back(std::move(o));
  }
  scene.relationships = derive_relations(scene.objects);
  return scene;
}

}  // namespace sgvqa
