#pragma once

// Hexagonal lattice in the "even-r" horizontal layout (pointy-top hexagons
// arranged in rows). Storage uses offset coordinates (col, row); algorithms
// use cube coordinates with x + y + z = 0.
//
// consult: https://www.redblobgames.com/grids/hexagons/

#include <array>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"

namespace hexroute {

class CubeCoord {
public:
    constexpr CubeCoord() = default;

    constexpr CubeCoord(int x, int y, int z) : x_(x), y_(y), z_(z)
    {
        if (x + y + z != 0) {
            throw invalid_input("cube coordinate violates x+y+z=0: (" + std::to_string(x) + "," +
                                std::to_string(y) + "," + std::to_string(z) + ")");
        }
    }

    static constexpr CubeCoord from_xz(int x, int z) noexcept
    {
        CubeCoord c;
        c.x_ = x;
        c.y_ = -x - z;
        c.z_ = z;
        return c;
    }

    constexpr int x() const noexcept { return x_; }
    constexpr int y() const noexcept { return y_; }
    constexpr int z() const noexcept { return z_; }

    friend constexpr CubeCoord operator+(CubeCoord a, CubeCoord b) noexcept
    {
        return from_xz(a.x_ + b.x_, a.z_ + b.z_);
    }
    friend constexpr CubeCoord operator-(CubeCoord a, CubeCoord b) noexcept
    {
        return from_xz(a.x_ - b.x_, a.z_ - b.z_);
    }
    friend constexpr auto operator<=>(const CubeCoord&, const CubeCoord&) = default;

private:
    int x_ = 0;
    int y_ = 0;
    int z_ = 0;
};

struct OffsetCoord {
    int col = 0;
    int row = 0;

    friend constexpr auto operator<=>(const OffsetCoord&, const OffsetCoord&) = default;
};

/// col = x + (z + (z & 1)) / 2, row = z.
constexpr OffsetCoord cube_to_offset(CubeCoord c) noexcept
{
    return {c.x() + (c.z() + (c.z() & 1)) / 2, c.z()};
}

/// x = col - (row + (row & 1)) / 2, z = row, y = -x - z.
constexpr CubeCoord offset_to_cube(OffsetCoord o) noexcept
{
    return CubeCoord::from_xz(o.col - (o.row + (o.row & 1)) / 2, o.row);
}

constexpr int cube_distance(CubeCoord u, CubeCoord v) noexcept
{
    const auto d = u - v;
    return (std::abs(d.x()) + std::abs(d.y()) + std::abs(d.z())) / 2;
}

// East first, then counterclockwise with latitude pointing up.
inline constexpr std::array<CubeCoord, 6> kHexDirections = {
    CubeCoord::from_xz(1, 0),   // E
    CubeCoord::from_xz(1, -1),  // NE
    CubeCoord::from_xz(0, -1),  // NW
    CubeCoord::from_xz(-1, 0),  // W
    CubeCoord::from_xz(-1, 1),  // SW
    CubeCoord::from_xz(0, 1),   // SE
};

constexpr std::array<CubeCoord, 6> neighbors(CubeCoord c) noexcept
{
    std::array<CubeCoord, 6> out{};
    for (std::size_t i = 0; i < kHexDirections.size(); ++i) out[i] = c + kHexDirections[i];
    return out;
}

/// Upper-left origin plus hexagon side length, all in degrees.
class HexLayout {
public:
    HexLayout(double origin_lon, double origin_lat, double size)
        : origin_lon_(origin_lon), origin_lat_(origin_lat), size_(size)
    {
        if (!(size > 0.0) || !std::isfinite(size)) throw invalid_input("hexagon size must be > 0");
    }

    double origin_lon() const noexcept { return origin_lon_; }
    double origin_lat() const noexcept { return origin_lat_; }
    double size() const noexcept { return size_; }
    double e_x() const noexcept { return std::numbers::sqrt3 * size_; }
    double e_y() const noexcept { return 1.5 * size_; }

    friend bool operator==(const HexLayout&, const HexLayout&) = default;

private:
    double origin_lon_;
    double origin_lat_;
    double size_;
};

/// Center of a hexagon. Even rows sit half a cell east of odd rows so that
/// geographic adjacency agrees with the even-r cube conversion; row 0 col 0 is
/// centered at (x_o + sqrt(3) size, y_o - size).
inline GeoPoint hex_center(const HexLayout& layout, CubeCoord c)
{
    const double s = layout.size();
    return {layout.origin_lon() + std::numbers::sqrt3 * s * (1.0 + c.x() + 0.5 * c.z()),
            layout.origin_lat() - s - 1.5 * s * c.z()};
}

inline GeoPoint grid_to_geo(const HexLayout& layout, OffsetCoord o) { return hex_center(layout, offset_to_cube(o)); }

/// The six corners of a hexagon, counterclockwise starting at the east-north-east vertex.
inline std::array<GeoPoint, 6> hex_corners(const HexLayout& layout, CubeCoord c)
{
    const GeoPoint center = hex_center(layout, c);
    std::array<GeoPoint, 6> out{};
    for (int k = 0; k < 6; ++k) {
        const double angle = std::numbers::pi / 180.0 * (30.0 + 60.0 * k);
        out[static_cast<std::size_t>(k)] = {center.lon + layout.size() * std::cos(angle),
                                            center.lat + layout.size() * std::sin(angle)};
    }
    return out;
}

struct FractionalCube {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline FractionalCube fractional_cube(const HexLayout& layout, GeoPoint p)
{
    const double s = layout.size();
    const double z = (layout.origin_lat() - s - p.lat) / (1.5 * s);
    const double x = (p.lon - layout.origin_lon()) / (std::numbers::sqrt3 * s) - 1.0 - 0.5 * z;
    return {x, -x - z, z};
}

/// Round each axis, then repair the axis with the largest rounding error.
inline CubeCoord cube_round(FractionalCube f)
{
    double rx = std::round(f.x);
    double ry = std::round(f.y);
    double rz = std::round(f.z);
    const double dx = std::abs(rx - f.x);
    const double dy = std::abs(ry - f.y);
    const double dz = std::abs(rz - f.z);
    if (dx > dy && dx > dz) {
        rx = -ry - rz;
    } else if (dy > dz) {
        ry = -rx - rz;
    } else {
        rz = -rx - ry;
    }
    return CubeCoord(static_cast<int>(rx), static_cast<int>(ry), static_cast<int>(rz));
}

/// Offset coordinate of the hexagon whose center is nearest p. Equidistant
/// centers (within 1e-9 size) resolve to the smaller row, then smaller col.
inline OffsetCoord geo_to_grid(const HexLayout& layout, GeoPoint p)
{
    const CubeCoord rounded = cube_round(fractional_cube(layout, p));
    const double tie = 1e-9 * layout.size();

    OffsetCoord best = cube_to_offset(rounded);
    double best_d = distance(hex_center(layout, rounded), p);
    for (const CubeCoord n : neighbors(rounded)) {
        const double d = distance(hex_center(layout, n), p);
        const OffsetCoord o = cube_to_offset(n);
        if (d < best_d - tie) {
            best = o;
            best_d = d;
        } else if (d <= best_d + tie && std::pair{o.row, o.col} < std::pair{best.row, best.col}) {
            best = o;
            best_d = std::min(best_d, d);
        }
    }
    return best;
}

/// Cells crossed by the segment between the centers of a and b, found by
/// sampling the segment every `step_fraction * size` and cube-rounding each
/// sample. Consecutive duplicates are removed; both endpoints are included.
inline std::vector<CubeCoord> line_cells(CubeCoord a, CubeCoord b, double step_fraction = 0.5)
{
    if (a == b) return {a};

    // Center offset in units of the side length.
    const auto d = b - a;
    const double px = std::numbers::sqrt3 * (d.x() + 0.5 * d.z());
    const double py = 1.5 * d.z();
    const double length = std::hypot(px, py);
    const int steps = std::max(1, static_cast<int>(std::ceil(length / step_fraction)));

    // Fixed nudge keeps samples that fall on a shared edge deterministic.
    constexpr double kNudgeX = 1e-6, kNudgeY = 2e-6, kNudgeZ = -3e-6;

    std::vector<CubeCoord> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        FractionalCube f{a.x() + d.x() * t, a.y() + d.y() * t, a.z() + d.z() * t};
        if (i != 0 && i != steps) {
            f.x += kNudgeX;
            f.y += kNudgeY;
            f.z += kNudgeZ;
        }
        const CubeCoord c = i == 0 ? a : (i == steps ? b : cube_round(f));
        if (out.empty() || out.back() != c) out.push_back(c);
    }
    return out;
}

}  // namespace hexroute
