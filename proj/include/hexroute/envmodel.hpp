#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"
#include "hexroute/hexgrid.hpp"

namespace hexroute {

enum class GridMode { kHex, kSquare4, kSquare8 };

struct BBox {
    double min_lon = 0.0;
    double min_lat = 0.0;
    double max_lon = 0.0;
    double max_lat = 0.0;

    double width() const noexcept { return max_lon - min_lon; }
    double height() const noexcept { return max_lat - min_lat; }
    bool contains(GeoPoint p) const noexcept
    {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
    friend bool operator==(const BBox&, const BBox&) = default;
};

struct ObstacleChart {
    BBox bbox;
    std::vector<Ring> obstacles;

    void validate() const
    {
        const bool finite = std::isfinite(bbox.min_lon) && std::isfinite(bbox.min_lat) &&
                            std::isfinite(bbox.max_lon) && std::isfinite(bbox.max_lat);
        if (!finite || !(bbox.min_lon < bbox.max_lon) || !(bbox.min_lat < bbox.max_lat)) {
            throw invalid_input("bbox: degenerate or non-finite bounding box");
        }
        for (std::size_t i = 0; i < obstacles.size(); ++i) {
            const Ring& ring = obstacles[i];
            if (ring.size() < 3) {
                throw invalid_input("obstacles[" + std::to_string(i) + "]: polygon needs at least 3 vertices");
            }
            for (const GeoPoint& p : ring) {
                if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) {
                    throw invalid_input("obstacles[" + std::to_string(i) + "]: non-finite vertex");
                }
            }
            if (!ring_is_simple(ring)) {
                throw invalid_input("obstacles[" + std::to_string(i) + "]: polygon is self-intersecting");
            }
        }
    }
};

struct Cell {
    bool navigable = true;
    std::optional<double> weight;  // present iff navigable

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// w = 1 + n^2 / 4 for n unnavigable neighbours (1.0 at n = 0).
constexpr double grid_weight(int unnavigable_neighbors) noexcept
{
    return 1.0 + static_cast<double>(unnavigable_neighbors * unnavigable_neighbors) / 4.0;
}

/// How cells outside the map count when weighting border cells.
enum class BorderPolicy { kUnnavigable, kIgnore };

/// Dense row-major table of cells shared by the hexagonal and square models.
class CellTable {
public:
    CellTable() = default;

    CellTable(int rows, int cols, std::vector<bool> navigable) : rows_(rows), cols_(cols)
    {
        if (rows < 1 || cols < 1) throw invalid_input("grid dimensions must be positive");
        if (navigable.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
            throw invalid_input("navigability table does not match grid dimensions");
        }
        cells_.resize(navigable.size());
        for (std::size_t i = 0; i < navigable.size(); ++i) cells_[i].navigable = navigable[i];
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t cell_count() const noexcept { return cells_.size(); }

    bool in_bounds(OffsetCoord o) const noexcept { return o.row >= 0 && o.row < rows_ && o.col >= 0 && o.col < cols_; }
    std::size_t index(OffsetCoord o) const noexcept
    {
        return static_cast<std::size_t>(o.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(o.col);
    }
    OffsetCoord coord(std::size_t i) const noexcept
    {
        return {static_cast<int>(i % static_cast<std::size_t>(cols_)), static_cast<int>(i / static_cast<std::size_t>(cols_))};
    }

    const Cell& cell(std::size_t i) const { return cells_.at(i); }
    bool navigable(std::size_t i) const { return cells_[i].navigable; }
    double weight(std::size_t i) const { return *cells_[i].weight; }
    std::span<const Cell> cells() const noexcept { return cells_; }

    friend bool operator==(const CellTable&, const CellTable&) = default;

protected:
    std::vector<Cell>& mutable_cells() noexcept { return cells_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cell> cells_;
};

/// Weighted hexagonal environment model.
class EnvModel : public CellTable {
public:
    EnvModel(HexLayout layout, int rows, int cols, std::vector<bool> navigable,
             BorderPolicy border = BorderPolicy::kUnnavigable)
        : CellTable(rows, cols, std::move(navigable)), layout_(layout), border_(border)
    {
        reweigh();
    }

    /// Model with explicit cells, as read back from a model file. Weights are
    /// taken verbatim.
    static EnvModel from_cells(HexLayout layout, int rows, int cols, std::vector<Cell> cells, BorderPolicy border)
    {
        std::vector<bool> nav(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) nav[i] = cells[i].navigable;
        EnvModel m(layout, rows, cols, std::move(nav), border);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].navigable != cells[i].weight.has_value()) {
                throw invalid_input("cells[" + std::to_string(i) + "]: weight must be present iff navigable");
            }
            if (cells[i].weight && !(*cells[i].weight >= 1.0)) {
                throw invalid_input("cells[" + std::to_string(i) + "]: weight must be >= 1");
            }
        }
        m.mutable_cells() = std::move(cells);
        return m;
    }

    const HexLayout& layout() const noexcept { return layout_; }
    BorderPolicy border_policy() const noexcept { return border_; }
    bool supports(GridMode mode) const noexcept { return mode == GridMode::kHex; }

    using CellTable::in_bounds;
    using CellTable::index;
    bool in_bounds(CubeCoord c) const noexcept { return in_bounds(cube_to_offset(c)); }
    std::size_t index(CubeCoord c) const noexcept { return index(cube_to_offset(c)); }
    CubeCoord cube(std::size_t i) const noexcept { return offset_to_cube(coord(i)); }

    GeoPoint center(std::size_t i) const { return hex_center(layout_, cube(i)); }

    std::optional<std::size_t> locate(GeoPoint p) const
    {
        const OffsetCoord o = geo_to_grid(layout_, p);
        if (!in_bounds(o)) return std::nullopt;
        return index(o);
    }

    /// Unnavigable neighbours of a cell, counting off-map neighbours per the border policy.
    int unnavigable_neighbors(std::size_t i) const
    {
        int n = 0;
        for (const CubeCoord c : neighbors(cube(i))) {
            if (!in_bounds(c)) {
                if (border_ == BorderPolicy::kUnnavigable) ++n;
            } else if (!navigable(index(c))) {
                ++n;
            }
        }
        return n;
    }

    /// Calls f(neighbour_index, step_length) for each in-bounds neighbour.
    template <class F>
    void for_each_step(std::size_t i, GridMode /*mode*/, F&& f) const
    {
        for (const CubeCoord c : neighbors(cube(i))) {
            if (in_bounds(c)) f(index(c), 1.0);
        }
    }

    double lattice_distance(std::size_t a, std::size_t b, GridMode /*mode*/) const
    {
        return static_cast<double>(cube_distance(cube(a), cube(b)));
    }

    std::pair<int, int> step_direction(std::size_t a, std::size_t b) const
    {
        const CubeCoord d = cube(b) - cube(a);
        return {d.x(), d.z()};
    }

    /// Cells on the center segment between a and b, or nullopt if it leaves the map.
    std::optional<std::vector<std::size_t>> corridor(std::size_t a, std::size_t b) const
    {
        std::vector<std::size_t> out;
        for (const CubeCoord c : line_cells(cube(a), cube(b))) {
            if (!in_bounds(c)) return std::nullopt;
            out.push_back(index(c));
        }
        return out;
    }

    /// Recompute every weight from the current navigability labels.
    void reweigh()
    {
        std::vector<Cell>& cells = mutable_cells();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].navigable) {
                cells[i].weight = grid_weight(unnavigable_neighbors(i));
            } else {
                cells[i].weight.reset();
            }
        }
    }

    friend bool operator==(const EnvModel&, const EnvModel&) = default;

private:
    HexLayout layout_;
    BorderPolicy border_;
};

inline EnvModel assign_weights(EnvModel model)
{
    model.reweigh();
    return model;
}

struct BuildOptions {
    std::size_t max_cells = 4'000'000;
    BorderPolicy border = BorderPolicy::kUnnavigable;
};

/// Rows and columns needed to cover a bbox with hexagons of the given size.
inline std::pair<int, int> hex_grid_dimensions(const BBox& bbox, double size)
{
    const HexLayout probe(bbox.min_lon, bbox.max_lat, size);
    const double rows = std::max(1.0, std::ceil(bbox.height() / probe.e_y()));
    const double cols = std::max(1.0, std::ceil(bbox.width() / probe.e_x()));
    return {static_cast<int>(std::min(rows, 1e9)), static_cast<int>(std::min(cols, 1e9))};
}

namespace detail {

/// Marks cells of `table` touched by any obstacle. `outline(i)` yields the
/// cell's corner ring, `center(i)` its center, and `candidates(ring_bbox)` a
/// row/col window to scan.
template <class Outline, class Center, class Window>
std::vector<bool> label_cells(const ObstacleChart& chart, int rows, int cols, Outline&& outline, Center&& center,
                              Window&& window)
{
    std::vector<bool> nav(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), true);
    for (const Ring& ring : chart.obstacles) {
        BBox rb{ring[0].lon, ring[0].lat, ring[0].lon, ring[0].lat};
        for (const GeoPoint& p : ring) {
            rb.min_lon = std::min(rb.min_lon, p.lon);
            rb.max_lon = std::max(rb.max_lon, p.lon);
            rb.min_lat = std::min(rb.min_lat, p.lat);
            rb.max_lat = std::max(rb.max_lat, p.lat);
        }
        const auto [r0, r1, c0, c1] = window(rb);
        for (int r = std::max(0, r0); r <= std::min(rows - 1, r1); ++r) {
            for (int c = std::max(0, c0); c <= std::min(cols - 1, c1); ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
                if (!nav[i]) continue;
                const auto corners = outline(OffsetCoord{c, r});
                if (cell_touches_ring(corners, center(OffsetCoord{c, r}), ring)) nav[i] = false;
            }
        }
    }
    return nav;
}

}  // namespace detail

/// Label every hexagon that intersects an obstacle as unnavigable, then weigh.
/// The layout origin is the bbox upper-left corner.
inline EnvModel build(const ObstacleChart& chart, double size, const BuildOptions& options = {})
{
    chart.validate();
    if (!(size > 0.0) || !std::isfinite(size)) throw invalid_input("size: must be a positive number of degrees");
    const auto [rows, cols] = hex_grid_dimensions(chart.bbox, size);
    const double total = static_cast<double>(rows) * static_cast<double>(cols);
    if (total > static_cast<double>(options.max_cells)) {
        throw capacity_exceeded("grid of " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " cells exceeds the budget of " + std::to_string(options.max_cells));
    }
    const HexLayout layout(chart.bbox.min_lon, chart.bbox.max_lat, size);
    auto nav = detail::label_cells(
        chart, rows, cols,
        [&](OffsetCoord o) { return hex_corners(layout, offset_to_cube(o)); },
        [&](OffsetCoord o) { return grid_to_geo(layout, o); },
        [&](const BBox& rb) {
            const int r0 = static_cast<int>(std::floor((layout.origin_lat() - rb.max_lat) / layout.e_y())) - 1;
            const int r1 = static_cast<int>(std::ceil((layout.origin_lat() - rb.min_lat) / layout.e_y())) + 1;
            const int c0 = static_cast<int>(std::floor((rb.min_lon - layout.origin_lon()) / layout.e_x())) - 1;
            const int c1 = static_cast<int>(std::ceil((rb.max_lon - layout.origin_lon()) / layout.e_x())) + 1;
            return std::array<int, 4>{r0, r1, c0, c1};
        });
    return EnvModel(layout, rows, cols, std::move(nav), options.border);
}

/// Number of distinct unnavigable cells adjacent to the path.
inline int potential_hazards(const EnvModel& model, std::span<const CubeCoord> path)
{
    std::set<std::size_t> hazards;
    for (const CubeCoord c : path) {
        if (!model.in_bounds(c) || !model.navigable(model.index(c))) {
            throw invalid_input("path touches an unnavigable or off-map cell");
        }
        for (const CubeCoord n : neighbors(c)) {
            if (model.in_bounds(n) && !model.navigable(model.index(n))) hazards.insert(model.index(n));
        }
    }
    return static_cast<int>(hazards.size());
}

}  // namespace hexroute
