#include "slamsafe/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "slamsafe/errors.hpp"
#include "slamsafe/rng.hpp"

namespace slamsafe {

const char* to_string(MapStyle s) {
    switch (s) {
        case MapStyle::corridor: return "corridor";
        case MapStyle::room: return "room";
        case MapStyle::corner: return "corner";
        case MapStyle::mixed: return "mixed";
    }
    return "?";
}

MapStyle style_from_string(const std::string& s) {
    if (s == "corridor") return MapStyle::corridor;
    if (s == "room") return MapStyle::room;
    if (s == "corner") return MapStyle::corner;
    if (s == "mixed") return MapStyle::mixed;
    throw ConfigError("unknown map style: " + s);
}

namespace {

// One textured span of a wall: landmarks go on the sub-segment [a, b] with
// normals pointing to the left of a->b when side = +1, right when side = -1.
struct TexturedSpan {
    Vec2 a;
    Vec2 b;
    double density{0.0};
    double side{1.0};
};

Vec2 left_normal(const Vec2& d) { return {-d.y, d.x}; }

void place_landmarks(WorldMap& map, const std::vector<TexturedSpan>& spans,
                     const TextureProfile& profile, RngStream& rng) {
    int next_id = 0;
    for (const auto& span : spans) {
        const Vec2 d = span.b - span.a;
        const double len = norm(d);
        if (len < 1e-9 || span.density <= 0.0) continue;
        const Vec2 dir = d * (1.0 / len);
        const Vec2 n = left_normal(dir) * span.side;
        const long long count = std::llround(len * span.density);
        for (long long i = 0; i < count; ++i) {
            const double base = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
            const double wobble = profile.jitter * rng.uniform(-1.0, 1.0);
            const double t = std::clamp(base + wobble / len, 0.01, 0.99);
            Landmark lm;
            lm.id = next_id++;
            lm.position = span.a + dir * (t * len);
            lm.normal = n;
            lm.scale = rng.uniform(profile.scale_min, profile.scale_max);
            map.landmarks.push_back(lm);
        }
    }
}

void add_wall(WorldMap& map, const Vec2& a, const Vec2& b) { map.walls.push_back({a, b}); }

WorldMap build_corridor(std::uint64_t seed, const TextureProfile& profile) {
    RngStream rng(seed, "mapgen/corridor");
    const double len = 13.0 + rng.uniform(0.0, 2.0);
    const double w = 2.4 + rng.uniform(0.0, 0.4);

    WorldMap map;
    map.name = "corridor";
    add_wall(map, {0, 0}, {len, 0});
    add_wall(map, {len, 0}, {len, w});
    add_wall(map, {len, w}, {0, w});
    add_wall(map, {0, w}, {0, 0});

    std::vector<TexturedSpan> spans = {
        {{0, 0}, {len, 0}, profile.rich_density, 1.0},
        {{len, 0}, {len, w}, profile.rich_density, 1.0},
        {{len, w}, {0, w}, profile.rich_density, 1.0},
        {{0, w}, {0, 0}, profile.rich_density, 1.0},
    };
    place_landmarks(map, spans, profile, rng);

    map.bounds = {-0.2, -0.2, len + 0.2, w + 0.2};
    map.start = make_pose(1.2, w / 2.0, 0.0);
    map.goal = {len - 1.2, w / 2.0};
    return map;
}

WorldMap build_room(std::uint64_t seed, const TextureProfile& profile) {
    RngStream rng(seed, "mapgen/room");
    const double W = 10.0 + rng.uniform(0.0, 3.0);
    const double H = 7.0 + rng.uniform(0.0, 2.0);

    WorldMap map;
    map.name = "room";
    add_wall(map, {0, 0}, {W, 0});
    add_wall(map, {W, 0}, {W, H});
    add_wall(map, {W, H}, {0, H});
    add_wall(map, {0, H}, {0, 0});

    std::vector<TexturedSpan> spans = {
        {{0, 0}, {W, 0}, profile.rich_density, 1.0},
        {{W, 0}, {W, H}, profile.rich_density, 1.0},
        {{W, H}, {0, H}, profile.rich_density, 1.0},
        {{0, H}, {0, 0}, profile.rich_density, 1.0},
    };
    place_landmarks(map, spans, profile, rng);

    map.bounds = {-0.2, -0.2, W + 0.2, H + 0.2};
    map.start = make_pose(1.2, H / 2.0, 0.0);
    map.goal = {W - 1.2, H / 2.0};
    return map;
}

// L-shaped corridor: arm 1 runs east along y in [0, w], arm 2 runs north
// along x in [A - w, A] up to y = B. The outer corner wall carries the low
// texture: cutting the turn tight means facing it up close, while a wide
// turn keeps the rich inner wall and bottom wall in view.
WorldMap build_corner(std::uint64_t seed, const TextureProfile& profile) {
    RngStream rng(seed, "mapgen/corner");
    const double A = 11.0 + rng.uniform(0.0, 1.5);
    const double B = 7.5 + rng.uniform(0.0, 1.0);
    const double w = 2.4 + rng.uniform(0.0, 0.4);
    const double poor_len = 4.5 + rng.uniform(0.0, 0.5);

    WorldMap map;
    map.name = "corner";
    add_wall(map, {0, 0}, {A, 0});          // bottom (rich)
    add_wall(map, {A, 0}, {A, B});          // outer corner wall (rich low, poor high)
    add_wall(map, {A, B}, {A - w, B});      // top cap (rich)
    add_wall(map, {A - w, B}, {A - w, w});  // inner wall of arm 2 (rich)
    add_wall(map, {A - w, w}, {0, w});      // arm 1 ceiling (poor near the corner)
    add_wall(map, {0, w}, {0, 0});          // left cap (rich)

    // Texture placement shapes the corner hazard. Cutting the turn early means
    // facing the poor ceiling strip while the inner wall still occludes the
    // whole of arm 2, so almost nothing is in view; swinging wide into the
    // pocket first brings the rich inner wall, top cap, and the low outer
    // wall band into the frame before the rotation starts.
    const double ceiling_poor_from = std::max(1.0, A - w - poor_len);
    const double outer_rich_to = std::min(B - 1.0, w + 2.0);
    std::vector<TexturedSpan> spans = {
        {{0, 0}, {A, 0}, profile.rich_density, 1.0},
        {{A, 0}, {A, outer_rich_to}, profile.rich_density * 1.6, 1.0},
        {{A, outer_rich_to}, {A, B}, profile.poor_density, 1.0},
        {{A, B}, {A - w, B}, profile.rich_density * 2.0, 1.0},
        {{A - w, B}, {A - w, w}, profile.rich_density, 1.0},
        {{A - w, w}, {ceiling_poor_from, w}, profile.poor_density, 1.0},
        {{ceiling_poor_from, w}, {0, w}, profile.rich_density, 1.0},
        {{0, w}, {0, 0}, profile.rich_density, 1.0},
    };
    place_landmarks(map, spans, profile, rng);

    map.bounds = {-0.2, -0.2, A + 0.2, B + 0.2};
    map.start = make_pose(1.2, w / 2.0, 0.0);
    map.goal = {A - w / 2.0, B - 1.0};
    return map;
}

// S-shaped corridor with two 90-degree turns, each wrapped in low texture:
// east along arm 1, north along arm 2, west along arm 3.
WorldMap build_mixed(std::uint64_t seed, const TextureProfile& profile) {
    RngStream rng(seed, "mapgen/mixed");
    const double A = 11.0 + rng.uniform(0.0, 1.5);   // arm 1 length
    const double B = 7.5 + rng.uniform(0.0, 1.0);    // arm 3 floor height
    const double C = 8.0 + rng.uniform(0.0, 1.5);    // arm 3 length
    const double w = 2.4 + rng.uniform(0.0, 0.4);
    const double poor_len = 4.0 + rng.uniform(0.0, 1.0);

    WorldMap map;
    map.name = "mixed";
    add_wall(map, {0, 0}, {A, 0});                  // bottom
    add_wall(map, {A, 0}, {A, B + w});              // outer east wall (two poor zones)
    add_wall(map, {A, B + w}, {A - C, B + w});      // top
    add_wall(map, {A - C, B + w}, {A - C, B});      // far cap of arm 3
    add_wall(map, {A - C, B}, {A - w, B});          // arm 3 floor
    add_wall(map, {A - w, B}, {A - w, w});          // inner wall of arm 2
    add_wall(map, {A - w, w}, {0, w});              // arm 1 ceiling
    add_wall(map, {0, w}, {0, 0});                  // left cap

    std::vector<TexturedSpan> spans = {
        {{0, 0}, {A, 0}, profile.rich_density, 1.0},
        {{A, 0}, {A, poor_len}, profile.poor_density, 1.0},          // corner 1
        {{A, poor_len}, {A, B - 2.0}, profile.rich_density, 1.0},
        {{A, B - 2.0}, {A, B + w}, profile.poor_density, 1.0},       // corner 2
        {{A, B + w}, {A - C, B + w}, profile.rich_density, 1.0},
        {{A - C, B + w}, {A - C, B}, profile.rich_density, 1.0},
        {{A - C, B}, {A - w - 2.0, B}, profile.rich_density, 1.0},
        {{A - w - 2.0, B}, {A - w, B}, profile.poor_density, 1.0},   // corner 2 inner
        {{A - w, B}, {A - w, w + poor_len * 0.6}, profile.rich_density, 1.0},
        {{A - w, w + poor_len * 0.6}, {A - w, w}, profile.poor_density, 1.0},  // corner 1 inner
        {{A - w, w}, {0, w}, profile.rich_density, 1.0},
        {{0, w}, {0, 0}, profile.rich_density, 1.0},
    };
    place_landmarks(map, spans, profile, rng);

    map.bounds = {-0.2, -0.2, A + 0.2, B + w + 0.2};
    map.start = make_pose(1.2, w / 2.0, 0.0);
    map.goal = {A - C + 1.2, B + w / 2.0};
    return map;
}

}  // namespace

WorldMap generate_map(std::uint64_t seed, MapStyle style, const TextureProfile& profile) {
    WorldMap map;
    switch (style) {
        case MapStyle::corridor: map = build_corridor(seed, profile); break;
        case MapStyle::room: map = build_room(seed, profile); break;
        case MapStyle::corner: map = build_corner(seed, profile); break;
        case MapStyle::mixed: map = build_mixed(seed, profile); break;
    }
    map.name += "-" + std::to_string(seed);
    map.validate();
    map.rebuild_index();
    return map;
}

}  // namespace slamsafe
