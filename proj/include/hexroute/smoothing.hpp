#pragma once

// Raw path post-processing: redundant waypoint removal that never lowers
// safety, arrived radius assignment, and turn geometry for each corner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"
#include "hexroute/search.hpp"

namespace hexroute {

/// Max grid weight over the corridor between two cell centers, or nullopt when
/// the corridor leaves the map or crosses an unnavigable cell.
template <PlanningGrid G>
std::optional<double> corridor_max_weight(const G& grid, std::size_t a, std::size_t b)
{
    const auto cells = grid.corridor(a, b);
    if (!cells) return std::nullopt;
    double worst = 0.0;
    for (const std::size_t c : *cells) {
        if (!grid.navigable(c)) return std::nullopt;
        worst = std::max(worst, grid.weight(c));
    }
    return worst;
}

namespace detail {

// One sweep: from anchor i, drop the middle node of (i, mid, next) while the
// corridor i -> next is clear and its max weight does not exceed the max over
// i -> mid -> next. When blocked, mid becomes the new anchor.
template <PlanningGrid G>
std::vector<std::size_t> smoothing_pass(const G& grid, std::span<const std::size_t> cells)
{
    if (cells.size() <= 2) return {cells.begin(), cells.end()};
    std::vector<std::size_t> out{cells[0]};
    std::size_t anchor = cells[0];
    std::size_t mid = cells[1];
    for (std::size_t k = 2; k < cells.size(); ++k) {
        const std::size_t next = cells[k];
        const auto direct = corridor_max_weight(grid, anchor, next);
        bool removable = false;
        if (direct) {
            const auto first = corridor_max_weight(grid, anchor, mid);
            const auto second = corridor_max_weight(grid, mid, next);
            const double previous = std::max(first.value_or(std::numeric_limits<double>::infinity()),
                                             second.value_or(std::numeric_limits<double>::infinity()));
            removable = *direct <= previous;
        }
        if (!removable) {
            out.push_back(mid);
            anchor = mid;
        }
        mid = next;
    }
    out.push_back(mid);
    return out;
}

}  // namespace detail

/// Remove redundant cells from a path. Sweeps repeat until nothing changes, so
/// the result is a fixed point: smoothing it again removes nothing.
template <PlanningGrid G>
std::vector<std::size_t> smooth_cells(const G& grid, std::span<const std::size_t> cells)
{
    std::vector<std::size_t> current(cells.begin(), cells.end());
    for (;;) {
        auto next = detail::smoothing_pass(grid, current);
        if (next.size() == current.size()) return next;
        current = std::move(next);
    }
}

template <PlanningGrid G>
std::vector<GeoPoint> smooth(const G& grid, const RawPath& path)
{
    const auto kept = smooth_cells(grid, path_indices(grid, path));
    std::vector<GeoPoint> out;
    out.reserve(kept.size());
    for (const std::size_t c : kept) out.push_back(grid.center(c));
    return out;
}

/// Largest corridor weight along consecutive kept cells.
template <PlanningGrid G>
double route_max_weight(const G& grid, std::span<const std::size_t> kept)
{
    if (kept.empty()) return 0.0;
    double worst = grid.weight(kept.front());
    for (std::size_t k = 1; k < kept.size(); ++k) {
        const auto w = corridor_max_weight(grid, kept[k - 1], kept[k]);
        if (!w) throw invalid_input("route corridor crosses an unnavigable cell");
        worst = std::max(worst, *w);
    }
    return worst;
}

/// Cells swept by the smoothed route, in travel order without repeats.
template <PlanningGrid G>
std::vector<OffsetCoord> final_path_cells(const G& grid, const RawPath& path)
{
    const auto kept = smooth_cells(grid, path_indices(grid, path));
    std::vector<OffsetCoord> out;
    if (kept.empty()) return out;
    out.push_back(grid.coord(kept.front()));
    for (std::size_t k = 1; k < kept.size(); ++k) {
        const auto cells = grid.corridor(kept[k - 1], kept[k]);
        if (!cells) throw invalid_input("route corridor leaves the map");
        for (const std::size_t c : *cells) {
            const OffsetCoord o = grid.coord(c);
            if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
        }
    }
    return out;
}

class TurnSpec {
public:
    /// Radii in nautical miles.
    TurnSpec(double min_turn_radius, double arrived_radius)
        : min_turn_radius_(min_turn_radius), arrived_radius_(arrived_radius)
    {
        if (!(min_turn_radius > 0.0) || !(arrived_radius > 0.0)) {
            throw invalid_input("turn radii must be positive");
        }
    }

    /// Defaults for a hexagon side length in degrees: arrived radius of two
    /// side lengths, minimum turning radius half of that.
    static TurnSpec defaults_for(double hex_size)
    {
        const double arrived = 2.0 * hex_size * kNmiPerDegree;
        return {0.5 * arrived, arrived};
    }

    double min_turn_radius() const noexcept { return min_turn_radius_; }
    double arrived_radius() const noexcept { return arrived_radius_; }

    /// C = 2 * atan(min turning radius / arrived radius).
    double critical_angle() const noexcept { return 2.0 * std::atan(min_turn_radius_ / arrived_radius_); }

private:
    double min_turn_radius_;
    double arrived_radius_;
};

enum class TurnCase { kInside, kOutside };

struct Turn {
    TurnCase kind = TurnCase::kInside;
    GeoPoint center;
    double radius = 0.0;          // nmi
    GeoPoint entry;               // arc start on the incoming leg side
    GeoPoint exit;                // arc end on the outgoing leg side
    double tangent_offset = 0.0;  // nmi from the waypoint to entry/exit
    double interior_angle = 0.0;  // radians
    bool degenerate_leg = false;  // tangent offset clamped to half the shorter leg
};

struct Waypoint {
    GeoPoint position;
    double arrived_radius = 0.0;  // nmi
    std::optional<Turn> turn;
};

struct Route {
    std::vector<Waypoint> waypoints;
    double total_distance = 0.0;  // nmi
    double source_cost = 0.0;     // sailing cost of the raw path
    double max_weight = 0.0;      // max grid weight along the smoothed corridor
};

namespace detail {

inline Vec2 to_nmi(GeoPoint p) { return {p.lon * kNmiPerDegree, p.lat * kNmiPerDegree}; }
inline GeoPoint from_nmi(Vec2 v) { return {v.x / kNmiPerDegree, v.y / kNmiPerDegree}; }

/// Turn at corner b between legs a -> b and b -> c.
inline std::optional<Turn> corner_turn(GeoPoint a, GeoPoint b, GeoPoint c, const TurnSpec& spec)
{
    const Vec2 pb = to_nmi(b);
    const Vec2 back = to_nmi(a) - pb;
    const Vec2 ahead = to_nmi(c) - pb;
    const double back_len = norm(back);
    const double ahead_len = norm(ahead);
    const Vec2 u_in = normalized(back);
    const Vec2 u_out = normalized(ahead);
    const double theta = std::atan2(std::abs(cross(u_in, u_out)), dot(u_in, u_out));

    // Straight through: no turn to make.
    if (std::numbers::pi - theta < 1e-9) return std::nullopt;

    const Vec2 bisector = normalized(u_in + u_out);
    const double r = spec.min_turn_radius();
    const double half = 0.5 * theta;

    Turn turn;
    turn.interior_angle = theta;
    turn.radius = r;
    if (theta >= spec.critical_angle()) {
        // Fillet tangent to both legs; the offset stays inside the arrived circle.
        turn.kind = TurnCase::kInside;
        double offset = r / std::tan(half);
        const double limit = 0.5 * std::min(back_len, ahead_len);
        if (offset > limit) {
            offset = limit;
            turn.degenerate_leg = true;
        }
        turn.tangent_offset = offset;
        turn.center = from_nmi(pb + bisector * (r / std::sin(half)));
        turn.entry = from_nmi(pb + u_in * offset);
        turn.exit = from_nmi(pb + u_out * offset);
    } else {
        // Sharp corner: the arc meets both legs on the arrived circle, its center
        // on the bisector on the far side of the waypoint.
        turn.kind = TurnCase::kOutside;
        const double ra = spec.arrived_radius();
        const double half_chord = ra * std::sin(half);
        const double rise = std::sqrt(std::max(0.0, r * r - half_chord * half_chord));
        const Vec2 chord_mid = pb + bisector * (ra * std::cos(half));
        turn.tangent_offset = ra;
        turn.center = from_nmi(chord_mid - bisector * rise);
        turn.entry = from_nmi(pb + u_in * ra);
        turn.exit = from_nmi(pb + u_out * ra);
        if (ra > 0.5 * std::min(back_len, ahead_len)) turn.degenerate_leg = true;
    }
    return turn;
}

}  // namespace detail

/// Attach arrived radii and turn geometry to a waypoint sequence.
inline Route annotate_turns(std::span<const GeoPoint> points, const TurnSpec& spec)
{
    if (points.empty()) throw invalid_input("route needs at least one point");
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (points[k] == points[k - 1]) throw invalid_input("consecutive route points coincide");
    }
    Route route;
    for (std::size_t k = 0; k < points.size(); ++k) {
        Waypoint wp{points[k], spec.arrived_radius(), std::nullopt};
        if (k > 0 && k + 1 < points.size()) wp.turn = detail::corner_turn(points[k - 1], points[k], points[k + 1], spec);
        if (k > 0) route.total_distance += distance_nmi(points[k - 1], points[k]);
        route.waypoints.push_back(wp);
    }
    return route;
}

/// Smooth a raw path and annotate the result.
template <PlanningGrid G>
Route make_route(const G& grid, const RawPath& path, const TurnSpec& spec)
{
    const auto kept = smooth_cells(grid, path_indices(grid, path));
    std::vector<GeoPoint> points;
    points.reserve(kept.size());
    for (const std::size_t c : kept) points.push_back(grid.center(c));
    Route route = annotate_turns(points, spec);
    route.source_cost = path.sailing_cost;
    route.max_weight = route_max_weight(grid, std::span<const std::size_t>(kept));
    return route;
}

}  // namespace hexroute
