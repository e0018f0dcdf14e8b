#pragma once

// Planar primitives shared by the grid models. Longitude/latitude are
// treated as a flat plane (x = lon, y = lat).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hexroute {

/// Nautical miles per degree on both axes (flat model).
inline constexpr double kNmiPerDegree = 60.0;

struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend Vec2 operator*(double s, Vec2 a) { return a * s; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 to_vec(GeoPoint p) { return {p.lon, p.lat}; }
inline GeoPoint to_geo(Vec2 v) { return {v.x, v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline Vec2 normalized(Vec2 a)
{
    const double n = norm(a);
    return n > 0.0 ? a * (1.0 / n) : Vec2{};
}

inline double distance(GeoPoint a, GeoPoint b) { return norm(to_vec(b) - to_vec(a)); }

/// Planar distance between two geo points expressed in nautical miles.
inline double distance_nmi(GeoPoint a, GeoPoint b) { return distance(a, b) * kNmiPerDegree; }

using Ring = std::vector<GeoPoint>;

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c)
{
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// True when segments [a,b] and [c,d] share at least one point.
inline bool segments_intersect(GeoPoint a, GeoPoint b, GeoPoint c, GeoPoint d)
{
    const Vec2 p1 = to_vec(a), p2 = to_vec(b), p3 = to_vec(c), p4 = to_vec(d);
    const int o1 = detail::orientation(p1, p2, p3);
    const int o2 = detail::orientation(p1, p2, p4);
    const int o3 = detail::orientation(p3, p4, p1);
    const int o4 = detail::orientation(p3, p4, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && detail::on_segment(p1, p2, p3)) return true;
    if (o2 == 0 && detail::on_segment(p1, p2, p4)) return true;
    if (o3 == 0 && detail::on_segment(p3, p4, p1)) return true;
    if (o4 == 0 && detail::on_segment(p3, p4, p2)) return true;
    return false;
}

/// Even-odd point containment. Points exactly on the boundary may go either way.
inline bool point_in_ring(std::span<const GeoPoint> ring, GeoPoint p)
{
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const GeoPoint& a = ring[i];
        const GeoPoint& b = ring[j];
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (p.lon < x) inside = !inside;
        }
    }
    return inside;
}

/// A ring is simple when no two non-adjacent edges touch. A repeated closing
/// vertex is tolerated.
inline bool ring_is_simple(std::span<const GeoPoint> ring)
{
    std::size_t n = ring.size();
    if (n >= 2 && ring.front() == ring.back()) --n;
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint& a = ring[i];
        const GeoPoint& b = ring[(i + 1) % n];
        if (a == b) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
        }
    }
    return true;
}

/// Intersection test between a convex cell outline (plus its center) and a
/// simple polygon: vertex containment in either direction or any edge crossing.
inline bool cell_touches_ring(std::span<const GeoPoint> cell, GeoPoint cell_center, std::span<const GeoPoint> ring)
{
    for (const GeoPoint& v : ring) {
        if (point_in_ring(cell, v)) return true;
    }
    if (point_in_ring(ring, cell_center)) return true;
    for (const GeoPoint& v : cell) {
        if (point_in_ring(ring, v)) return true;
    }
    const std::size_t nc = cell.size();
    const std::size_t nr = ring.size();
    for (std::size_t i = 0; i < nc; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            if (segments_intersect(cell[i], cell[(i + 1) % nc], ring[j], ring[(j + 1) % nr])) return true;
        }
    }
    return false;
}

}  // namespace hexroute
