#pragma once

#include <string>
#include <vector>

#include "sgvqa/jsonio.hpp"
#include "sgvqa/scene.hpp"

namespace sgvqa {

/// Scene JSON layout:
///   {info: {...}, scenes: [{image_index, objects: [...], relationships,
///    provenance}]}
/// Objects carry shape/size/color/material (+texture when present),
/// 3d_coords as [x, y, 0], rotation, and parts as a name -> attribute map
/// in canonical part order. Relationships are four lists-of-lists indexed
/// by object id. Key order is fixed, so files are byte-stable.
Json scene_to_json(const Scene& scene, const Vocabulary& vocab);
Scene scene_from_json(const Json& j, const Vocabulary& vocab);

Json scenes_file_json(const std::vector<Scene>& scenes, const Vocabulary& vocab,
                      const Json& info_extra = Json::object());
std::vector<Scene> scenes_from_file(const std::string& path, const Vocabulary& vocab);

}  // namespace sgvqa
