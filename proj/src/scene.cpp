#include "sgvqa/scene.hpp"

#include <algorithm>
#include <cmath>

#include "sgvqa/errors.hpp"

namespace sgvqa {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Left: return "left";
    case Relation::Right: return "right";
    case Relation::Front: return "front";
    case Relation::Behind: return "behind";
  }
  return "?";
}

std::optional<Relation> relation_from_name(const std::string& name) {
  if (name == "left") return Relation::Left;
  if (name == "right") return Relation::Right;
  if (name == "front") return Relation::Front;
  if (name == "behind") return Relation::Behind;
  return std::nullopt;
}

const PartInstance* ObjectInstance::find_part(const std::string& part_name) const {
  for (const auto& p : parts)
    if (p.name == part_name) return &p;
  return nullptr;
}

bool Scene::has_textures() const {
  for (const auto& o : objects)
    if (o.texture) return true;
  return false;
}

RelationMap derive_relations(const std::vector<ObjectInstance>& objects) {
  const int n = static_cast<int>(objects.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (objects[i].x == objects[j].x || objects[i].y == objects[j].y)
        throw Error(ErrorKind::DegenerateLayout,
                    "objects " + std::to_string(i) + " and " + std::to_string(j) +
                        " share a coordinate");
    }
  }
  RelationMap rel;
  for (auto& lists : rel) lists.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (objects[j].x < objects[i].x) rel[static_cast<int>(Relation::Left)][i].push_back(j);
      else rel[static_cast<int>(Relation::Right)][i].push_back(j);
      if (objects[j].y > objects[i].y) rel[static_cast<int>(Relation::Front)][i].push_back(j);
      else rel[static_cast<int>(Relation::Behind)][i].push_back(j);
    }
  }
  return rel;
}

std::vector<std::string> validate_scene(const Scene& scene, const Vocabulary& vocab,
                                        const PlacementConfig& placement) {
  std::vector<std::string> violations;
  const auto& objs = scene.objects;
  const int n = static_cast<int>(objs.size());

  if (n < 3) violations.push_back("object count below 3");
  if (n > 10) violations.push_back("object count above 10");

  for (int i = 0; i < n; ++i) {
    const auto& o = objs[i];
    const std::string tag = "object " + std::to_string(i);
    if (o.id != i) violations.push_back(tag + ": id does not match position");
    if (vocab.index_of(Axis::Shape, o.shape) < 0) violations.push_back(tag + ": unknown shape");
    else if (o.category != vocab.category_of(o.shape))
      violations.push_back(tag + ": category does not match shape");
    if (vocab.index_of(Axis::Color, o.color) < 0) violations.push_back(tag + ": unknown color");
    if (vocab.index_of(Axis::Material, o.material) < 0)
      violations.push_back(tag + ": unknown material");
    if (vocab.index_of(Axis::Size, o.size) < 0) violations.push_back(tag + ": unknown size");
    if (o.texture && vocab.index_of(Axis::Texture, *o.texture) < 0)
      violations.push_back(tag + ": unknown texture");
    if (o.radius <= 0.0) violations.push_back(tag + ": non-positive radius");

    if (vocab.index_of(Axis::Shape, o.shape) >= 0) {
      const auto& valid_parts = vocab.parts_of(o.shape);
      for (const auto& p : o.parts) {
        if (std::find(valid_parts.begin(), valid_parts.end(), p.name) == valid_parts.end())
          violations.push_back(tag + ": part " + p.name + " not valid for shape");
        if (vocab.index_of(Axis::Color, p.color) < 0)
          violations.push_back(tag + ": part " + p.name + " has unknown color");
        if (vocab.index_of(Axis::Material, p.material) < 0)
          violations.push_back(tag + ": part " + p.name + " has unknown material");
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = objs[i].x - objs[j].x;
      const double dy = objs[i].y - objs[j].y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist < objs[i].radius + objs[j].radius + placement.margin - 1e-12)
        violations.push_back("overlap between objects " + std::to_string(i) + " and " +
                             std::to_string(j));
    }
  }

  // Relations must match coordinates exactly, and left/right (front/behind)
  // must partition the other objects.
  bool shape_ok = true;
  for (const auto& lists : scene.relationships)
    if (static_cast<int>(lists.size()) != n) shape_ok = false;
  if (!shape_ok) {
    violations.push_back("relationship lists sized differently from objects");
    return violations;
  }
  for (int i = 0; i < n; ++i) {
    std::vector<bool> in_left(n, false), in_front(n, false);
    for (int j : scene.related(Relation::Left, i)) in_left[j] = true;
    for (int j : scene.related(Relation::Front, i)) in_front[j] = true;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool left = objs[j].x < objs[i].x;
      const bool front = objs[j].y > objs[i].y;
      if (in_left[j] != left)
        violations.push_back("left relation inconsistent for pair " + std::to_string(i) + "," +
                             std::to_string(j));
      if (in_front[j] != front)
        violations.push_back("front relation inconsistent for pair " + std::to_string(i) + "," +
                             std::to_string(j));
    }
    std::vector<bool> seen(n, false);
    for (int j : scene.related(Relation::Left, i)) seen[j] = true;
    for (int j : scene.related(Relation::Right, i)) {
      if (seen[j]) violations.push_back("object in both left and right of " + std::to_string(i));
      seen[j] = true;
    }
    for (int j = 0; j < n; ++j)
      if (j != i && !seen[j])
        violations.push_back("object " + std::to_string(j) + " missing from left/right of " +
                             std::to_string(i));
    std::vector<bool> seen_fb(n, false);
    for (int j : scene.related(Relation::Front, i)) seen_fb[j] = true;
    for (int j : scene.related(Relation::Behind, i)) {
      if (seen_fb[j])
        violations.push_back("object in both front and behind of " + std::to_string(i));
      seen_fb[j] = true;
    }
    for (int j = 0; j < n; ++j)
      if (j != i && !seen_fb[j])
        violations.push_back("object " + std::to_string(j) + " missing from front/behind of " +
                             std::to_string(i));
  }
  return violations;
}

}  // namespace sgvqa
