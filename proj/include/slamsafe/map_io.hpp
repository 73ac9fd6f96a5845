#pragma once

#include <string>

#include "slamsafe/world.hpp"

namespace slamsafe {

// Map file schema (version 1):
// {
//   "schema": "map", "version": 1, "name": ...,
//   "bounds": {"xmin","ymin","xmax","ymax"},
//   "walls": [[x1,y1,x2,y2], ...],
//   "landmarks": [{"id","x","y","nx","ny","scale"}, ...],
//   "start": {"x","y","theta"}, "goal": {"x","y"}
// }
std::string map_to_json(const WorldMap& map);
WorldMap map_from_json(const std::string& text);

void save_map(const WorldMap& map, const std::string& path);
WorldMap load_map(const std::string& path);  // validates and builds the index

}  // namespace slamsafe
