#pragma once

// Minimum-sailing-cost point-to-point search: A* with the guidance-value
// heuristic over either grid model.
//
// The evaluation function is f(i) = g(i) + h(i), where g sums D(u,v) * w(v)
// over the cells entered and h(i) = D(i, goal) * p(i). Open-list entries are
// corrected whenever a cheaper g is found. Closed cells are never reopened in
// hexagonal mode; square modes recheck and reopen them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "hexroute/envmodel.hpp"
#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"
#include "hexroute/hexgrid.hpp"
#include "hexroute/square_grid.hpp"

namespace hexroute {

enum class HeuristicMode { kGuided, kPlain };

template <class G>
concept PlanningGrid = requires(const G& g, std::size_t i, GeoPoint p, GridMode m) {
    { g.cell_count() } -> std::convertible_to<std::size_t>;
    { g.navigable(i) } -> std::convertible_to<bool>;
    { g.weight(i) } -> std::convertible_to<double>;
    { g.center(i) } -> std::same_as<GeoPoint>;
    { g.coord(i) } -> std::same_as<OffsetCoord>;
    { g.locate(p) } -> std::same_as<std::optional<std::size_t>>;
    { g.lattice_distance(i, i, m) } -> std::convertible_to<double>;
    { g.step_direction(i, i) } -> std::same_as<std::pair<int, int>>;
    { g.corridor(i, i) } -> std::same_as<std::optional<std::vector<std::size_t>>>;
    { g.supports(m) } -> std::convertible_to<bool>;
};

struct SearchRequest {
    GeoPoint start;
    GeoPoint goal;
    GridMode grid_mode = GridMode::kHex;
    HeuristicMode heuristic_mode = HeuristicMode::kGuided;
};

struct RawPath {
    std::vector<OffsetCoord> cells;
    double sailing_cost = 0.0;
    double distance = 0.0;  // nmi
};

struct SearchStats {
    long traversed_times = 0;  // evaluation-function computations
    long extended_nodes = 0;   // cells closed
    long reopened_nodes = 0;
    double elapsed = 0.0;  // seconds
    int turning_times = 0;

    double average_times() const noexcept
    {
        return extended_nodes > 0 ? static_cast<double>(traversed_times) / static_cast<double>(extended_nodes) : 0.0;
    }
};

struct PlanResult {
    std::optional<RawPath> path;  // empty when the goal is unreachable
    SearchStats stats;

    bool found() const noexcept { return path.has_value(); }
};

struct PlanOptions {
    /// Reopen closed cells when a cheaper route to them appears. Defaults to
    /// off for hexagonal grids and on for square grids.
    std::optional<bool> reopen_closed;
};

/// cost of stepping from u into adjacent v, or nullopt when v is not
/// an adjacent navigable cell.
template <PlanningGrid G>
std::optional<double> sailing_cost_step(const G& grid, std::size_t u, std::size_t v, GridMode mode)
{
    if (!grid.navigable(v)) return std::nullopt;
    std::optional<double> cost;
    grid.for_each_step(u, mode, [&](std::size_t n, double length) {
        if (n == v) cost = length * grid.weight(v);
    });
    return cost;
}

/// p = 3 / (4 - sin(theta)), theta the angle between (i -> goal) and
/// (start -> goal). Degenerate geometry yields 3/4.
inline double guidance_value(GeoPoint start, GeoPoint goal, GeoPoint at)
{
    const Vec2 l1 = to_vec(goal) - to_vec(at);
    const Vec2 l2 = to_vec(goal) - to_vec(start);
    const double n1 = norm(l1);
    const double n2 = norm(l2);
    if (n1 == 0.0 || n2 == 0.0) return 0.75;
    const double sine = std::min(1.0, std::abs(cross(l1, l2)) / (n1 * n2));
    return 3.0 / (4.0 - sine);
}

/// h(i) = D(i, goal) * p(i) in guided mode, D(i, goal) in plain mode.
template <PlanningGrid G>
double heuristic(const G& grid, std::size_t i, std::size_t start, std::size_t goal, GridMode grid_mode,
                 HeuristicMode mode)
{
    const double d = grid.lattice_distance(i, goal, grid_mode);
    if (mode == HeuristicMode::kPlain) return d;
    return d * guidance_value(grid.center(start), grid.center(goal), grid.center(i));
}

/// Number of interior path cells at which the step direction changes.
template <PlanningGrid G>
int turning_times(const G& grid, std::span<const std::size_t> cells)
{
    int turns = 0;
    for (std::size_t k = 2; k < cells.size(); ++k) {
        if (grid.step_direction(cells[k - 2], cells[k - 1]) != grid.step_direction(cells[k - 1], cells[k])) ++turns;
    }
    return turns;
}

template <PlanningGrid G>
std::vector<std::size_t> path_indices(const G& grid, const RawPath& path)
{
    std::vector<std::size_t> out;
    out.reserve(path.cells.size());
    for (const OffsetCoord o : path.cells) out.push_back(grid.index(o));
    return out;
}

/// A* between two cell indices. Both must be navigable.
template <PlanningGrid G>
PlanResult plan_cells(const G& grid, std::size_t start, std::size_t goal, GridMode grid_mode,
                      HeuristicMode heuristic_mode, const PlanOptions& options = {})
{
    if (!grid.supports(grid_mode)) throw invalid_input("grid mode does not match the model");
    if (start >= grid.cell_count() || goal >= grid.cell_count()) throw invalid_input("endpoint outside the map");
    if (!grid.navigable(start)) throw invalid_input("start cell is unnavigable");
    if (!grid.navigable(goal)) throw invalid_input("goal cell is unnavigable");

    const auto t0 = std::chrono::steady_clock::now();
    const bool reopen = options.reopen_closed.value_or(grid_mode != GridMode::kHex);
    const std::size_t n = grid.cell_count();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    std::vector<double> g(n, kInf);
    std::vector<double> h(n, -1.0);
    std::vector<std::size_t> parent(n, kNone);
    std::vector<char> closed(n, 0);

    struct Entry {
        double f;
        double h;
        int row;
        int col;
        double g;
        std::size_t cell;
    };
    // Smallest f first; ties go to smaller h, then row, then col.
    const auto worse = [](const Entry& a, const Entry& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        if (a.row != b.row) return a.row > b.row;
        return a.col > b.col;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

    PlanResult result;
    SearchStats& stats = result.stats;
    const auto h_of = [&](std::size_t i) {
        if (h[i] < 0.0) h[i] = heuristic(grid, i, start, goal, grid_mode, heuristic_mode);
        return h[i];
    };
    const auto push = [&](std::size_t i) {
        const OffsetCoord o = grid.coord(i);
        open.push({g[i] + h_of(i), h_of(i), o.row, o.col, g[i], i});
    };

    g[start] = 0.0;
    ++stats.traversed_times;
    push(start);

    bool reached = false;
    while (!open.empty()) {
        const Entry top = open.top();
        open.pop();
        const std::size_t u = top.cell;
        if (closed[u] || top.g != g[u]) continue;
        closed[u] = 1;
        ++stats.extended_nodes;
        if (u == goal) {
            reached = true;
            break;
        }
        grid.for_each_step(u, grid_mode, [&](std::size_t v, double length) {
            if (!grid.navigable(v)) return;
            if (closed[v] && !reopen) return;
            const double candidate = g[u] + length * grid.weight(v);
            ++stats.traversed_times;
            if (candidate < g[v]) {
                if (closed[v]) {
                    closed[v] = 0;
                    ++stats.reopened_nodes;
                }
                g[v] = candidate;
                parent[v] = u;
                push(v);
            }
        });
    }

    if (reached) {
        std::vector<std::size_t> cells;
        for (std::size_t c = goal; c != kNone; c = parent[c]) cells.push_back(c);
        std::reverse(cells.begin(), cells.end());

        RawPath path;
        path.sailing_cost = g[goal];
        for (std::size_t k = 0; k < cells.size(); ++k) {
            path.cells.push_back(grid.coord(cells[k]));
            if (k > 0) path.distance += distance_nmi(grid.center(cells[k - 1]), grid.center(cells[k]));
        }
        stats.turning_times = turning_times(grid, std::span<const std::size_t>(cells));
        result.path = std::move(path);
    }
    stats.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

/// Resolve geographic endpoints to cells and search between them.
template <PlanningGrid G>
PlanResult plan(const G& grid, const SearchRequest& request, const PlanOptions& options = {})
{
    const auto start = grid.locate(request.start);
    const auto goal = grid.locate(request.goal);
    if (!start) throw invalid_input("start point lies outside the map");
    if (!goal) throw invalid_input("goal point lies outside the map");
    return plan_cells(grid, *start, *goal, request.grid_mode, request.heuristic_mode, options);
}

/// Straight center distance over summed center-to-center path length.
template <PlanningGrid G>
double kappa(const G& grid, const RawPath& path)
{
    if (path.cells.empty()) throw invalid_input("kappa of an empty path");
    if (path.cells.size() == 1) return 1.0;
    double walked = 0.0;
    for (std::size_t k = 1; k < path.cells.size(); ++k) {
        walked += distance(grid.center(grid.index(path.cells[k - 1])), grid.center(grid.index(path.cells[k])));
    }
    const double straight =
        distance(grid.center(grid.index(path.cells.front())), grid.center(grid.index(path.cells.back())));
    return straight / walked;
}

inline int potential_hazards(const EnvModel& model, std::span<const OffsetCoord> cells)
{
    std::vector<CubeCoord> cubes;
    cubes.reserve(cells.size());
    for (const OffsetCoord o : cells) cubes.push_back(offset_to_cube(o));
    return potential_hazards(model, std::span<const CubeCoord>(cubes));
}

inline int potential_hazards(const EnvModel& model, const RawPath& path)
{
    return potential_hazards(model, std::span<const OffsetCoord>(path.cells));
}

inline int potential_hazards(const SquareModel& model, const RawPath& path)
{
    return potential_hazards(model, std::span<const OffsetCoord>(path.cells));
}

}  // namespace hexroute
