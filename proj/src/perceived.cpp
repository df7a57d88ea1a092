#include "sgvqa/perceived.hpp"

#include <cmath>

#include "sgvqa/errors.hpp"

namespace sgvqa {

const std::vector<double>& AttributeTables::table(Axis axis) const {
  switch (axis) {
    case Axis::Shape: return shape;
    case Axis::Color: return color;
    case Axis::Material: return material;
    case Axis::Size: return size;
    case Axis::Texture: return texture;
  }
  return shape;
}

std::vector<double>& AttributeTables::table(Axis axis) {
  switch (axis) {
    case Axis::Shape: return shape;
    case Axis::Color: return color;
    case Axis::Material: return material;
    case Axis::Size: return size;
    case Axis::Texture: return texture;
  }
  return shape;
}

namespace {

void check_table(const std::vector<double>& t, int expected, const char* what) {
  if (t.empty()) return;  // absent tables are allowed (texture, part shape/size)
  if (static_cast<int>(t.size()) != expected)
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + " table has wrong length");
  double sum = 0.0;
  for (double p : t) {
    if (p < 0.0) throw Error(ErrorKind::InvalidParameter,
                             std::string(what) + " table has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + " table does not sum to 1");
}

Json table_json(const std::vector<double>& t) {
  Json arr = Json::array();
  for (double p : t) arr.push_back(p);
  return arr;
}

std::vector<double> table_from_json(const Json& j) {
  std::vector<double> t;
  for (const auto& v : j) t.push_back(v.get<double>());
  return t;
}

}  // namespace

void Detection::validate(const Vocabulary& vocab) const {
  check_table(probs.shape, vocab.axis_size(Axis::Shape), "shape");
  check_table(probs.color, vocab.axis_size(Axis::Color), "color");
  check_table(probs.material, vocab.axis_size(Axis::Material), "material");
  check_table(probs.size, vocab.axis_size(Axis::Size), "size");
  check_table(probs.texture, vocab.axis_size(Axis::Texture), "texture");
  for (const auto& p : parts) {
    check_table(p.probs.color, vocab.axis_size(Axis::Color), "part color");
    check_table(p.probs.material, vocab.axis_size(Axis::Material), "part material");
    check_table(p.probs.texture, vocab.axis_size(Axis::Texture), "part texture");
  }
}

void PerceivedScene::validate(const Vocabulary& vocab) const {
  for (const auto& d : detections) d.validate(vocab);
}

bool PerceivedScene::has_texture_tables() const {
  for (const auto& d : detections)
    if (!d.probs.texture.empty()) return true;
  return false;
}

Json perceived_to_json(const PerceivedScene& scene) {
  Json j;
  j["image_index"] = scene.scene_id;
  Json dets = Json::array();
  for (const auto& d : scene.detections) {
    Json jd;
    jd["center"] = Json::array({d.x, d.y});
    Json probs;
    probs["shape"] = table_json(d.probs.shape);
    probs["color"] = table_json(d.probs.color);
    probs["material"] = table_json(d.probs.material);
    probs["size"] = table_json(d.probs.size);
    if (!d.probs.texture.empty()) probs["texture"] = table_json(d.probs.texture);
    jd["probs"] = probs;
    Json parts = Json::object();
    for (const auto& p : d.parts) {
      Json jp;
      Json pprobs;
      pprobs["color"] = table_json(p.probs.color);
      pprobs["material"] = table_json(p.probs.material);
      if (!p.probs.texture.empty()) pprobs["texture"] = table_json(p.probs.texture);
      jp["probs"] = pprobs;
      parts[p.name] = jp;
    }
    jd["parts"] = parts;
    if (d.gt_object) jd["gt_object"] = *d.gt_object;
    dets.push_back(jd);
  }
  j["detections"] = dets;
  return j;
}

PerceivedScene perceived_from_json(const Json& j, const Vocabulary& vocab) {
  PerceivedScene scene;
  scene.scene_id = j.at("image_index").get<int>();
  for (const auto& jd : j.at("detections")) {
    Detection d;
    d.x = jd.at("center").at(0).get<double>();
    d.y = jd.at("center").at(1).get<double>();
    const auto& probs = jd.at("probs");
    d.probs.shape = table_from_json(probs.at("shape"));
    d.probs.color = table_from_json(probs.at("color"));
    d.probs.material = table_from_json(probs.at("material"));
    d.probs.size = table_from_json(probs.at("size"));
    if (probs.contains("texture")) d.probs.texture = table_from_json(probs.at("texture"));
    if (jd.contains("parts")) {
      for (auto it = jd.at("parts").begin(); it != jd.at("parts").end(); ++it) {
        DetectedPart p;
        p.name = it.key();
        const auto& pprobs = it.value().at("probs");
        p.probs.color = table_from_json(pprobs.at("color"));
        p.probs.material = table_from_json(pprobs.at("material"));
        if (pprobs.contains("texture")) p.probs.texture = table_from_json(pprobs.at("texture"));
        d.parts.push_back(std::move(p));
      }
    }
    if (jd.contains("gt_object")) d.gt_object = jd.at("gt_object").get<int>();
    scene.detections.push_back(std::move(d));
  }
  scene.validate(vocab);
  return scene;
}

Json perceived_file_json(const std::vector<PerceivedScene>& scenes, const Json& info_extra) {
  Json j;
  Json info;
  info["format_version"] = kFormatVersion;
  info["tool"] = kToolName;
  info["version"] = kToolVersion;
  for (auto it = info_extra.begin(); it != info_extra.end(); ++it) info[it.key()] = it.value();
  j["info"] = info;
  Json arr = Json::array();
  for (const auto& s : scenes) arr.push_back(perceived_to_json(s));
  j["scenes"] = arr;
  return j;
}

std::vector<PerceivedScene> perceived_from_file(const std::string& path,
                                                const Vocabulary& vocab) {
  const Json j = load_json_file(path);
  if (!j.contains("scenes")) throw Error(ErrorKind::ParseError, path + ": no scenes array");
  std::vector<PerceivedScene> scenes;
  for (const auto& js : j.at("scenes")) scenes.push_back(perceived_from_json(js, vocab));
  return scenes;
}

namespace {

std::vector<double> one_hot(int index, int size) {
  std::vector<double> t(size, 0.0);
  t[index] = 1.0;
  return t;
}

}  // namespace

PerceivedScene one_hot_perceived(const Scene& scene, const Vocabulary& vocab) {
  PerceivedScene out;
  out.scene_id = scene.scene_id;
  for (const auto& o : scene.objects) {
    Detection d;
    d.x = o.x;
    d.y = o.y;
    d.gt_object = o.id;
    d.probs.shape = one_hot(vocab.index_of(Axis::Shape, o.shape), vocab.axis_size(Axis::Shape));
    d.probs.color = one_hot(vocab.index_of(Axis::Color, o.color), vocab.axis_size(Axis::Color));
    d.probs.material =
        one_hot(vocab.index_of(Axis::Material, o.material), vocab.axis_size(Axis::Material));
    d.probs.size = one_hot(vocab.index_of(Axis::Size, o.size), vocab.axis_size(Axis::Size));
    if (o.texture)
      d.probs.texture =
          one_hot(vocab.index_of(Axis::Texture, *o.texture), vocab.axis_size(Axis::Texture));
    for (const auto& part : o.parts) {
      DetectedPart p;
      p.name = part.name;
      p.probs.color =
          one_hot(vocab.index_of(Axis::Color, part.color), vocab.axis_size(Axis::Color));
      p.probs.material =
          one_hot(vocab.index_of(Axis::Material, part.material), vocab.axis_size(Axis::Material));
      if (part.texture)
        p.probs.texture =
            one_hot(vocab.index_of(Axis::Texture, *part.texture), vocab.axis_size(Axis::Texture));
      d.parts.push_back(std::move(p));
    }
    out.detections.push_back(std::move(d));
  }
  return out;
}

}  // namespace sgvqa
