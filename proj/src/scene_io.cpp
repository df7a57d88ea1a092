#include "sgvqa/scene_io.hpp"

#include <algorithm>

#include "sgvqa/errors.hpp"

namespace sgvqa {

Json scene_to_json(const Scene& scene, const Vocabulary& vocab) {
  Json j;
  j["image_index"] = scene.scene_id;
  Json objects = Json::array();
  for (const auto& o : scene.objects) {
    Json jo;
    jo["shape"] = o.shape;
    jo["size"] = o.size;
    jo["color"] = o.color;
    jo["material"] = o.material;
    if (o.texture) jo["texture"] = *o.texture;
    jo["3d_coords"] = Json::array({o.x, o.y, 0.0});
    jo["rotation"] = o.rotation;
    Json parts = Json::object();
    // Canonical part order keeps the map byte-stable.
    for (const auto& name : vocab.parts_of(o.shape)) {
      const PartInstance* p = o.find_part(name);
      if (!p) continue;
      Json jp;
      jp["color"] = p->color;
      jp["material"] = p->material;
      if (p->texture) jp["texture"] = *p->texture;
      parts[name] = jp;
    }
    jo["parts"] = parts;
    objects.push_back(jo);
  }
  j["objects"] = objects;
  Json rel;
  for (Relation r : kAllRelations) {
    Json lists = Json::array();
    for (const auto& row : scene.relationships[static_cast<int>(r)]) lists.push_back(row);
    rel[relation_name(r)] = lists;
  }
  j["relationships"] = rel;
  Json prov;
  prov["config_digest"] = scene.provenance.config_digest;
  prov["seed"] = scene.provenance.seed;
  prov["scene_seed"] = scene.provenance.scene_seed;
  j["provenance"] = prov;
  return j;
}

Scene scene_from_json(const Json& j, const Vocabulary& vocab) {
  Scene scene;
  scene.scene_id = j.at("image_index").get<int>();
  int id = 0;
  for (const auto& jo : j.at("objects")) {
    ObjectInstance o;
    o.id = id++;
    o.shape = jo.at("shape").get<std::string>();
    o.category = vocab.category_of(o.shape);
    o.size = jo.at("size").get<std::string>();
    o.color = jo.at("color").get<std::string>();
    o.material = jo.at("material").get<std::string>();
    if (jo.contains("texture")) o.texture = jo.at("texture").get<std::string>();
    const auto& coords = jo.at("3d_coords");
    o.x = coords.at(0).get<double>();
    o.y = coords.at(1).get<double>();
    o.rotation = jo.value("rotation", 0.0);
    o.radius = vocab.radius_of_size(o.size);
    if (jo.contains("parts")) {
      for (auto it = jo.at("parts").begin(); it != jo.at("parts").end(); ++it) {
        PartInstance p;
        p.name = it.key();
        p.color = it.value().at("color").get<std::string>();
        p.material = it.value().at("material").get<std::string>();
        if (it.value().contains("texture"))
          p.texture = it.value().at("texture").get<std::string>();
        o.parts.push_back(p);
      }
    }
    scene.objects.push_back(std::move(o));
  }
  if (j.contains("relationships")) {
    for (Relation r : kAllRelations) {
      const auto& lists = j.at("relationships").at(relation_name(r));
      auto& out = scene.relationships[static_cast<int>(r)];
      out.clear();
      for (const auto& row : lists) out.push_back(row.get<std::vector<int>>());
    }
  } else {
    scene.relationships = derive_relations(scene.objects);
  }
  if (j.contains("provenance")) {
    const auto& prov = j.at("provenance");
    scene.provenance.config_digest = prov.value("config_digest", "");
    scene.provenance.seed = prov.value("seed", 0ull);
    scene.provenance.scene_seed = prov.value("scene_seed", 0ull);
  }
  return scene;
}

Json scenes_file_json(const std::vector<Scene>& scenes, const Vocabulary& vocab,
                      const Json& info_extra) {
  Json j;
  Json info;
  info["format_version"] = kFormatVersion;
  info["tool"] = kToolName;
  info["version"] = kToolVersion;
  for (auto it = info_extra.begin(); it != info_extra.end(); ++it) info[it.key()] = it.value();
  j["info"] = info;
  Json arr = Json::array();
  for (const auto& s : scenes) arr.push_back(scene_to_json(s, vocab));
  j["scenes"] = arr;
  return j;
}

std::vector<Scene> scenes_from_file(const std::string& path, const Vocabulary& vocab) {
  const Json j = load_json_file(path);
  if (!j.contains("scenes")) throw Error(ErrorKind::ParseError, path + ": no scenes array");
  std::vector<Scene> scenes;
  for (const auto& js : j.at("scenes")) scenes.push_back(scene_from_json(js, vocab));
  return scenes;
}

}  // namespace sgvqa
