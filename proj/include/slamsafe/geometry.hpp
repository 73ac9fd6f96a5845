#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slamsafe {

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Wraps into (-pi, pi]. The -pi boundary maps to +pi.
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a = kPi;
    return a;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Segment {
    Vec2 a;
    Vec2 b;
};

struct Rect {
    double xmin{0.0}, ymin{0.0}, xmax{0.0}, ymax{0.0};

    bool contains(const Vec2& p, double eps = kGeomEps) const {
        return p.x >= xmin - eps && p.x <= xmax + eps &&
               p.y >= ymin - eps && p.y <= ymax + eps;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

inline double point_segment_distance(const Vec2& p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = norm2(d);
    if (len2 <= kGeomEps * kGeomEps) return dist(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return dist(p, s.a + d * t);
}

namespace detail {

// Axis-aligned bounding boxes must overlap for segments to intersect.
inline bool bbox_overlap(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2,
                         double eps) {
    return std::min(p1.x, p2.x) <= std::max(q1.x, q2.x) + eps &&
           std::max(p1.x, p2.x) >= std::min(q1.x, q2.x) - eps &&
           std::min(p1.y, p2.y) <= std::max(q1.y, q2.y) + eps &&
           std::max(p1.y, p2.y) >= std::min(q1.y, q2.y) - eps;
}

}  // namespace detail

// Closed segment-segment intersection test (touching counts). Used for
// motion sweeps, where grazing a wall is a collision.
inline bool segments_intersect(const Vec2& p1, const Vec2& p2,
                               const Vec2& q1, const Vec2& q2,
                               double eps = kGeomEps) {
    if (!detail::bbox_overlap(p1, p2, q1, q2, eps)) return false;
    const Vec2 r = p2 - p1;
    const Vec2 s = q2 - q1;
    const double denom = cross(r, s);
    const Vec2 pq = q1 - p1;
    if (std::abs(denom) > eps) {
        const double t = cross(pq, s) / denom;
        const double u = cross(pq, r) / denom;
        return t >= -eps && t <= 1.0 + eps && u >= -eps && u <= 1.0 + eps;
    }
    // Parallel. Collinear overlap iff q1 lies on the p-line and the
    // projections onto the longer axis overlap (bbox already checked).
    if (std::abs(cross(pq, r)) > eps * std::max(1.0, norm(r))) return false;
    return true;
}

// Sight-line occlusion test: does wall [q1,q2] cross the open interior of
// the ray segment [p1,p2]? The endpoints of the sight line are excluded so
// that a landmark sitting exactly on its own wall is not self-occluded.
inline bool segment_blocks_sight(const Vec2& p1, const Vec2& p2,
                                 const Vec2& q1, const Vec2& q2,
                                 double eps = kGeomEps) {
    if (!detail::bbox_overlap(p1, p2, q1, q2, eps)) return false;
    const Vec2 r = p2 - p1;
    const Vec2 s = q2 - q1;
    const double denom = cross(r, s);
    const Vec2 pq = q1 - p1;
    if (std::abs(denom) > eps) {
        const double t = cross(pq, s) / denom;  // along the sight line
        const double u = cross(pq, r) / denom;  // along the wall
        return t > eps && t < 1.0 - eps && u >= -eps && u <= 1.0 + eps;
    }
    if (std::abs(cross(pq, r)) > eps * std::max(1.0, norm(r))) return false;
    // Collinear wall: occludes iff it covers part of the open interior.
    const double rlen2 = norm2(r);
    if (rlen2 <= eps * eps) return false;
    double t0 = dot(q1 - p1, r) / rlen2;
    double t1 = dot(q2 - p1, r) / rlen2;
    if (t0 > t1) std::swap(t0, t1);
    return t1 > eps && t0 < 1.0 - eps;
}

}  // namespace slamsafe
