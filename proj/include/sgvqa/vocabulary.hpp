#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgvqa/jsonio.hpp"

namespace sgvqa {

/// Attribute axes. Category is not a free axis (it is derived from shape)
/// but participates in filtering.
enum class Axis { Shape, Color, Material, Size, Texture };

const char* axis_name(Axis axis);
std::optional<Axis> axis_from_name(const std::string& name);

/// The closed concept world: 21 shapes in 5 categories, 8 colors, plus
/// materials, sizes (with footprint radii), textures, and per-shape part
/// lists. List order is canonical: it defines the concept index used by
/// distribution control and the value order of probability tables.
class Vocabulary {
 public:
  static Vocabulary builtin();

  /// Applies overrides from a config file section. Shape/category/color
  /// counts are fixed (21/5/8); other lists may be resized.
  static Vocabulary from_config(const Json& config);

  const std::vector<std::string>& shapes() const { return shapes_; }
  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<std::string>& colors() const { return colors_; }
  const std::vector<std::string>& materials() const { return materials_; }
  const std::vector<std::string>& sizes() const { return sizes_; }
  const std::vector<std::string>& textures() const { return textures_; }

  const std::string& category_of(const std::string& shape) const;
  int category_index_of_shape(int shape_index) const;
  /// Shapes listed under a category, in canonical shape order.
  std::vector<std::string> shapes_in_category(const std::string& category) const;

  const std::vector<std::string>& parts_of(const std::string& shape) const;
  /// Subset of parts eligible for attribute perturbation.
  const std::vector<std::string>& exterior_parts_of(const std::string& shape) const;
  bool is_part_name(const std::string& name) const;

  double radius_of_size(const std::string& size) const;

  const std::vector<std::string>& axis_values(Axis axis) const;
  int axis_size(Axis axis) const { return static_cast<int>(axis_values(axis).size()); }
  /// Index of `value` on `axis`, or -1.
  int index_of(Axis axis, const std::string& value) const;
  bool is_category(const std::string& name) const;

  void validate() const;

  Json to_json() const;

 private:
  std::vector<std::string> shapes_;
  std::vector<std::string> categories_;
  std::map<std::string, std::string> shape_to_category_;
  std::vector<std::string> colors_;
  std::vector<std::string> materials_;
  std::vector<std::string> sizes_;
  std::vector<double> size_radii_;
  std::vector<std::string> textures_;
  std::map<std::string, std::vector<std::string>> parts_;
  std::map<std::string, std::vector<std::string>> exterior_parts_;
};

}  // namespace sgvqa
