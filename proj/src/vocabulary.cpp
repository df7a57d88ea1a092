#include "sgvqa/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "sgvqa/errors.hpp"

namespace sgvqa {

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::Shape: return "shape";
    case Axis::Color: return "color";
    case Axis::Material: return "material";
    case Axis::Size: return "size";
    case Axis::Texture: return "texture";
  }
  return "?";
}

std::optional<Axis> axis_from_name(const std::string& name) {
  if (name == "shape") return Axis::Shape;
  if (name == "color") return Axis::Color;
  if (name == "material") return Axis::Material;
  if (name == "size") return Axis::Size;
  if (name == "texture") return Axis::Texture;
  return std::nullopt;
}

namespace {

struct CategorySpec {
  const char* name;
  std::vector<const char*> shapes;
  std::vector<const char*> parts;
};

const std::vector<CategorySpec>& builtin_categories() {
  static const std::vector<CategorySpec> specs = {
      {"airplane",
       {"airliner", "biplane", "jet", "fighter"},
       {"left wing", "right wing", "nose", "tail", "engine", "wheel"}},
      {"bicycle",
       {"utility bike", "tandem bike", "road bike", "mountain bike"},
       {"frame", "front wheel", "back wheel", "handlebar", "seat", "pedal"}},
      {"bus",
       {"articulated bus", "double bus", "regular bus", "school bus"},
       {"front wheel", "back wheel", "door", "windshield", "mirror", "roof"}},
      {"car",
       {"truck", "suv", "minivan", "sedan", "wagon"},
       {"front wheel", "back wheel", "door", "hood", "trunk", "mirror"}},
      {"motorcycle",
       {"chopper", "scooter", "cruiser", "dirtbike"},
       {"front wheel", "back wheel", "handlebar", "seat", "engine", "exhaust"}},
  };
  return specs;
}

}  // namespace

Vocabulary Vocabulary::builtin() {
  Vocabulary v;
  for (const auto& cat : builtin_categories()) {
    v.categories_.emplace_back(cat.name);
    std::vector<std::string> parts(cat.parts.begin(), cat.parts.end());
    for (const char* shape : cat.shapes) {
      v.shapes_.emplace_back(shape);
      v.shape_to_category_[shape] = cat.name;
      v.parts_[shape] = parts;
      v.exterior_parts_[shape] = parts;
    }
  }
  v.colors_ = {"gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};
  v.materials_ = {"rubber", "metal"};
  v.sizes_ = {"large", "small"};
  v.size_radii_ = {1.0, 0.6};
  v.textures_ = {"checkered", "striped", "dotted", "zigzag",
                 "camouflage", "floral", "plaid", "swirl"};
  v.validate();
  return v;
}

Vocabulary Vocabulary::from_config(const Json& config) {
  Vocabulary v = builtin();
  if (!config.contains("vocabulary")) return v;
  const Json& voc = config.at("vocabulary");

  auto load_list = [](const Json& arr) {
    std::vector<std::string> out;
    for (const auto& e : arr) out.push_back(e.get<std::string>());
    return out;
  };

  if (voc.contains("colors")) v.colors_ = load_list(voc.at("colors"));
  if (voc.contains("materials")) v.materials_ = load_list(voc.at("materials"));
  if (voc.contains("textures")) v.textures_ = load_list(voc.at("textures"));
  if (voc.contains("sizes")) {
    v.sizes_.clear();
    v.size_radii_.clear();
    for (const auto& e : voc.at("sizes")) {
      v.sizes_.push_back(e.at("name").get<std::string>());
      v.size_radii_.push_back(e.at("radius").get<double>());
    }
  }
  if (voc.contains("shapes")) {
    // Full shape table override: list of {name, category, parts, exterior_parts?}.
    v.shapes_.clear();
    v.categories_.clear();
    v.shape_to_category_.clear();
    v.parts_.clear();
    v.exterior_parts_.clear();
    for (const auto& e : voc.at("shapes")) {
      const std::string name = e.at("name").get<std::string>();
      const std::string category = e.at("category").get<std::string>();
      v.shapes_.push_back(name);
      v.shape_to_category_[name] = category;
      if (std::find(v.categories_.begin(), v.categories_.end(), category) ==
          v.categories_.end()) {
        v.categories_.push_back(category);
      }
      v.parts_[name] = load_list(e.at("parts"));
      v.exterior_parts_[name] =
          e.contains("exterior_parts") ? load_list(e.at("exterior_parts")) : v.parts_[name];
    }
  } else if (voc.contains("parts")) {
    for (auto it = voc.at("parts").begin(); it != voc.at("parts").end(); ++it) {
      if (!v.parts_.count(it.key()))
        throw Error(ErrorKind::Config, "parts override for unknown shape " + it.key());
      v.parts_[it.key()] = load_list(it.value());
      v.exterior_parts_[it.key()] = v.parts_[it.key()];
    }
  }
  v.validate();
  return v;
}

const std::string& Vocabulary::category_of(const std::string& shape) const {
  auto it = shape_to_category_.find(shape);
  if (it == shape_to_category_.end())
    throw Error(ErrorKind::InvalidParameter, "unknown shape " + shape);
  return it->second;
}

int Vocabulary::category_index_of_shape(int shape_index) const {
  const std::string& cat = category_of(shapes_.at(shape_index));
  auto it = std::find(categories_.begin(), categories_.end(), cat);
  return static_cast<int>(it - categories_.begin());
}

std::vector<std::string> Vocabulary::shapes_in_category(const std::string& category) const {
  std::vector<std::string> out;
  for (const auto& s : shapes_)
    if (shape_to_category_.at(s) == category) out.push_back(s);
  return out;
}

const std::vector<std::string>& Vocabulary::parts_of(const std::string& shape) const {
  auto it = parts_.find(shape);
  if (it == parts_.end()) throw Error(ErrorKind::InvalidParameter, "unknown shape " + shape);
  return it->second;
}

const std::vector<std::string>& Vocabulary::exterior_parts_of(const std::string& shape) const {
  auto it = exterior_parts_.find(shape);
  if (it == exterior_parts_.end())
    throw Error(ErrorKind::InvalidParameter, "unknown shape " + shape);
  return it->second;
}

bool Vocabulary::is_part_name(const std::string& name) const {
  for (const auto& [shape, parts] : parts_) {
    (void)shape;
    if (std::find(parts.begin(), parts.end(), name) != parts.end()) return true;
  }
  return false;
}

double Vocabulary::radius_of_size(const std::string& size) const {
  for (std::size_t i = 0; i < sizes_.size(); ++i)
    if (sizes_[i] == size) return size_radii_[i];
  throw Error(ErrorKind::InvalidParameter, "unknown size " + size);
}

const std::vector<std::string>& Vocabulary::axis_values(Axis axis) const {
  switch (axis) {
    case Axis::Shape: return shapes_;
    case Axis::Color: return colors_;
    case Axis::Material: return materials_;
    case Axis::Size: return sizes_;
    case Axis::Texture: return textures_;
  }
  return shapes_;
}

int Vocabulary::index_of(Axis axis, const std::string& value) const {
  const auto& values = axis_values(axis);
  auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

bool Vocabulary::is_category(const std::string& name) const {
  return std::find(categories_.begin(), categories_.end(), name) != categories_.end();
}

void Vocabulary::validate() const {
  if (shapes_.size() != 21)
    throw Error(ErrorKind::Config, "vocabulary must have exactly 21 shapes");
  if (categories_.size() != 5)
    throw Error(ErrorKind::Config, "vocabulary must have exactly 5 categories");
  if (colors_.size() != 8)
    throw Error(ErrorKind::Config, "vocabulary must have exactly 8 colors");
  if (materials_.empty() || sizes_.empty())
    throw Error(ErrorKind::Config, "materials and sizes must be non-empty");
  if (sizes_.size() != size_radii_.size())
    throw Error(ErrorKind::Config, "every size needs a radius");
  for (double r : size_radii_)
    if (r <= 0.0) throw Error(ErrorKind::Config, "size radius must be positive");

  auto check_unique = [](const std::vector<std::string>& values, const char* what) {
    std::set<std::string> seen(values.begin(), values.end());
    if (seen.size() != values.size())
      throw Error(ErrorKind::Config, std::string("duplicate entries in ") + what);
  };
  check_unique(shapes_, "shapes");
  check_unique(categories_, "categories");
  check_unique(colors_, "colors");
  check_unique(materials_, "materials");
  check_unique(sizes_, "sizes");
  check_unique(textures_, "textures");

  for (const auto& s : shapes_) {
    if (!shape_to_category_.count(s))
      throw Error(ErrorKind::Config, "shape without category: " + s);
    if (!parts_.count(s) || parts_.at(s).empty())
      throw Error(ErrorKind::Config, "shape without parts: " + s);
    check_unique(parts_.at(s), "parts");
    for (const auto& p : exterior_parts_.at(s)) {
      const auto& all = parts_.at(s);
      if (std::find(all.begin(), all.end(), p) == all.end())
        throw Error(ErrorKind::Config, "exterior part not in part list: " + p);
    }
  }
}

Json Vocabulary::to_json() const {
  Json j;
  j["shapes"] = shapes_;
  j["categories"] = categories_;
  j["colors"] = colors_;
  j["materials"] = materials_;
  j["sizes"] = sizes_;
  j["textures"] = textures_;
  return j;
}

}  // namespace sgvqa
