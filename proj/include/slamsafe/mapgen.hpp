#pragma once

#include <cstdint>
#include <string>

#include "slamsafe/world.hpp"

namespace slamsafe {

// Wall texture profile: landmarks per meter on feature-rich walls and on
// deliberately low-texture stretches, plus the landmark scale range.
struct TextureProfile {
    double rich_density{50.0};
    double poor_density{2.0};
    double scale_min{0.5};
    double scale_max{2.0};
    double jitter{0.15};  // along-wall placement jitter, meters
};

enum class MapStyle { corridor, room, corner, mixed };

const char* to_string(MapStyle s);
MapStyle style_from_string(const std::string& s);  // throws ConfigError

// Deterministic desk-scale world builder. The same (seed, style, profile)
// always yields the same map, down to the serialized bytes:
//   corridor — straight rich-walled corridor, no turns along the route;
//   room     — open rectangle, high overlap everywhere;
//   corner   — L-shaped corridor with a 90-degree turn wrapped in a
//              low-texture stretch;
//   mixed    — S-shaped corridor with two such corners.
WorldMap generate_map(std::uint64_t seed, MapStyle style, const TextureProfile& profile = {});

}  // namespace slamsafe
