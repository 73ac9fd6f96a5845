#include "slamsafe/map_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slamsafe/errors.hpp"

namespace slamsafe {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kMapSchemaVersion = 1;

void require_schema(const ordered_json& j, const char* schema) {
    if (!j.contains("schema") || !j.contains("version"))
        throw FormatError("missing schema/version field");
    if (j["schema"] != schema)
        throw FormatError("unexpected schema tag: " + j["schema"].dump());
    if (j["version"] != kMapSchemaVersion)
        throw FormatError("unsupported map schema version: " + j["version"].dump());
}

}  // namespace

std::string map_to_json(const WorldMap& map) {
    ordered_json j;
    j["schema"] = "map";
    j["version"] = kMapSchemaVersion;
    j["name"] = map.name;
    j["bounds"] = {{"xmin", map.bounds.xmin},
                   {"ymin", map.bounds.ymin},
                   {"xmax", map.bounds.xmax},
                   {"ymax", map.bounds.ymax}};
    auto walls = ordered_json::array();
    for (const auto& w : map.walls) walls.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
    j["walls"] = std::move(walls);
    auto lms = ordered_json::array();
    for (const auto& lm : map.landmarks) {
        lms.push_back({{"id", lm.id},
                       {"x", lm.position.x},
                       {"y", lm.position.y},
                       {"nx", lm.normal.x},
                       {"ny", lm.normal.y},
                       {"scale", lm.scale}});
    }
    j["landmarks"] = std::move(lms);
    j["start"] = {{"x", map.start.x}, {"y", map.start.y}, {"theta", map.start.theta}};
    j["goal"] = {{"x", map.goal.x}, {"y", map.goal.y}};
    return j.dump(2) + "\n";
}

WorldMap map_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("map parse error: ") + e.what());
    }
    require_schema(j, "map");
    WorldMap map;
    try {
        map.name = j.at("name").get<std::string>();
        const auto& b = j.at("bounds");
        map.bounds = {b.at("xmin"), b.at("ymin"), b.at("xmax"), b.at("ymax")};
        for (const auto& w : j.at("walls")) {
            map.walls.push_back({{w.at(0), w.at(1)}, {w.at(2), w.at(3)}});
        }
        for (const auto& l : j.at("landmarks")) {
            Landmark lm;
            lm.id = l.at("id");
            lm.position = {l.at("x"), l.at("y")};
            lm.normal = {l.at("nx"), l.at("ny")};
            lm.scale = l.at("scale");
            map.landmarks.push_back(lm);
        }
        const auto& s = j.at("start");
        map.start = make_pose(s.at("x"), s.at("y"), s.at("theta"));
        const auto& g = j.at("goal");
        map.goal = {g.at("x"), g.at("y")};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("map field error: ") + e.what());
    }
    return map;
}

void save_map(const WorldMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write map file: " + path);
    out << map_to_json(map);
}

WorldMap load_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read map file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    WorldMap map = map_from_json(ss.str());
    map.validate();
    map.rebuild_index();
    return map;
}

}  // namespace slamsafe
