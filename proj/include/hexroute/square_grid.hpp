#pragma once

// Square-grid baseline for comparing against the hexagonal model. Cells are
// axis-aligned squares indexed (col, row) from the bbox upper-left corner.
// Grid weights and hazards use the 8-neighbourhood regardless of whether the
// search moves in 4 or 8 directions.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "hexroute/envmodel.hpp"

namespace hexroute {

/// Side of a square with the same area as a hexagon of the given side length.
inline double equal_area_square_side(double hex_size)
{
    return std::sqrt(1.5 * std::numbers::sqrt3) * hex_size;
}

class SquareLayout {
public:
    SquareLayout(double origin_lon, double origin_lat, double side)
        : origin_lon_(origin_lon), origin_lat_(origin_lat), side_(side)
    {
        if (!(side > 0.0) || !std::isfinite(side)) throw invalid_input("square side must be > 0");
    }

    double origin_lon() const noexcept { return origin_lon_; }
    double origin_lat() const noexcept { return origin_lat_; }
    double side() const noexcept { return side_; }

    GeoPoint center(OffsetCoord o) const
    {
        return {origin_lon_ + side_ * (o.col + 0.5), origin_lat_ - side_ * (o.row + 0.5)};
    }

    std::array<GeoPoint, 4> corners(OffsetCoord o) const
    {
        const double x0 = origin_lon_ + side_ * o.col;
        const double y0 = origin_lat_ - side_ * o.row;
        return {GeoPoint{x0, y0}, GeoPoint{x0 + side_, y0}, GeoPoint{x0 + side_, y0 - side_}, GeoPoint{x0, y0 - side_}};
    }

    OffsetCoord locate(GeoPoint p) const
    {
        return {static_cast<int>(std::floor((p.lon - origin_lon_) / side_)),
                static_cast<int>(std::floor((origin_lat_ - p.lat) / side_))};
    }

    friend bool operator==(const SquareLayout&, const SquareLayout&) = default;

private:
    double origin_lon_;
    double origin_lat_;
    double side_;
};

inline constexpr std::array<std::pair<int, int>, 8> kSquareDirections = {{
    {1, 0}, {0, -1}, {-1, 0}, {0, 1},    // orthogonal: E, N, W, S
    {1, -1}, {-1, -1}, {-1, 1}, {1, 1},  // diagonal: NE, NW, SW, SE
}};

class SquareModel : public CellTable {
public:
    SquareModel(SquareLayout layout, int rows, int cols, std::vector<bool> navigable,
                BorderPolicy border = BorderPolicy::kUnnavigable)
        : CellTable(rows, cols, std::move(navigable)), layout_(layout), border_(border)
    {
        reweigh();
    }

    /// Model with explicit cells, as read back from a model file.
    static SquareModel from_cells(SquareLayout layout, int rows, int cols, std::vector<Cell> cells, BorderPolicy border)
    {
        std::vector<bool> nav(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) nav[i] = cells[i].navigable;
        SquareModel m(layout, rows, cols, std::move(nav), border);
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

    const SquareLayout& layout() const noexcept { return layout_; }
    BorderPolicy border_policy() const noexcept { return border_; }
    bool supports(GridMode mode) const noexcept { return mode == GridMode::kSquare4 || mode == GridMode::kSquare8; }

    GeoPoint center(std::size_t i) const { return layout_.center(coord(i)); }

    std::optional<std::size_t> locate(GeoPoint p) const
    {
        const OffsetCoord o = layout_.locate(p);
        if (!in_bounds(o)) return std::nullopt;
        return index(o);
    }

    int unnavigable_neighbors(std::size_t i) const
    {
        const OffsetCoord o = coord(i);
        int n = 0;
        for (const auto& [dc, dr] : kSquareDirections) {
            const OffsetCoord q{o.col + dc, o.row + dr};
            if (!in_bounds(q)) {
                if (border_ == BorderPolicy::kUnnavigable) ++n;
            } else if (!navigable(index(q))) {
                ++n;
            }
        }
        return n;
    }

    template <class F>
    void for_each_step(std::size_t i, GridMode mode, F&& f) const
    {
        const OffsetCoord o = coord(i);
        const std::size_t count = mode == GridMode::kSquare8 ? 8 : 4;
        for (std::size_t k = 0; k < count; ++k) {
            const auto [dc, dr] = kSquareDirections[k];
            const OffsetCoord q{o.col + dc, o.row + dr};
            if (in_bounds(q)) f(index(q), k < 4 ? 1.0 : std::numbers::sqrt2);
        }
    }

    /// Manhattan distance for 4-connectivity, octile distance for 8.
    double lattice_distance(std::size_t a, std::size_t b, GridMode mode) const
    {
        const OffsetCoord p = coord(a), q = coord(b);
        const double dx = std::abs(p.col - q.col);
        const double dy = std::abs(p.row - q.row);
        if (mode == GridMode::kSquare8) return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
        return dx + dy;
    }

    std::pair<int, int> step_direction(std::size_t a, std::size_t b) const
    {
        const OffsetCoord p = coord(a), q = coord(b);
        return {q.col - p.col, q.row - p.row};
    }

    /// Cells on the center segment, sampled every half side.
    std::optional<std::vector<std::size_t>> corridor(std::size_t a, std::size_t b) const
    {
        const GeoPoint pa = center(a), pb = center(b);
        const double length = distance(pa, pb) / layout_.side();
        const int steps = std::max(1, static_cast<int>(std::ceil(length / 0.5)));
        std::vector<std::size_t> out;
        for (int s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            std::size_t idx;
            if (s == 0) {
                idx = a;
            } else if (s == steps) {
                idx = b;
            } else {
                const GeoPoint p{pa.lon + (pb.lon - pa.lon) * t + 1e-9 * layout_.side(),
                                 pa.lat + (pb.lat - pa.lat) * t + 2e-9 * layout_.side()};
                const auto loc = locate(p);
                if (!loc) return std::nullopt;
                idx = *loc;
            }
            if (out.empty() || out.back() != idx) out.push_back(idx);
        }
        return out;
    }

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

    friend bool operator==(const SquareModel&, const SquareModel&) = default;

private:
    SquareLayout layout_;
    BorderPolicy border_;
};

inline SquareModel build_square(const ObstacleChart& chart, double side, const BuildOptions& options = {})
{
    chart.validate();
    if (!(side > 0.0) || !std::isfinite(side)) throw invalid_input("side: must be a positive number of degrees");
    const double rows_d = std::max(1.0, std::ceil(chart.bbox.height() / side));
    const double cols_d = std::max(1.0, std::ceil(chart.bbox.width() / side));
    if (rows_d * cols_d > static_cast<double>(options.max_cells)) {
        throw capacity_exceeded("square grid exceeds the budget of " + std::to_string(options.max_cells) + " cells");
    }
    const int rows = static_cast<int>(rows_d);
    const int cols = static_cast<int>(cols_d);
    const SquareLayout layout(chart.bbox.min_lon, chart.bbox.max_lat, side);
    auto nav = detail::label_cells(
        chart, rows, cols, [&](OffsetCoord o) { return layout.corners(o); },
        [&](OffsetCoord o) { return layout.center(o); },
        [&](const BBox& rb) {
            const int r0 = static_cast<int>(std::floor((layout.origin_lat() - rb.max_lat) / side)) - 1;
            const int r1 = static_cast<int>(std::ceil((layout.origin_lat() - rb.min_lat) / side)) + 1;
            const int c0 = static_cast<int>(std::floor((rb.min_lon - layout.origin_lon()) / side)) - 1;
            const int c1 = static_cast<int>(std::ceil((rb.max_lon - layout.origin_lon()) / side)) + 1;
            return std::array<int, 4>{r0, r1, c0, c1};
        });
    return SquareModel(layout, rows, cols, std::move(nav), options.border);
}

/// Distinct unnavigable cells in the 8-neighbourhood of the path.
inline int potential_hazards(const SquareModel& model, std::span<const OffsetCoord> path)
{
    std::set<std::size_t> hazards;
    for (const OffsetCoord o : path) {
        if (!model.in_bounds(o) || !model.navigable(model.index(o))) {
            throw invalid_input("path touches an unnavigable or off-map cell");
        }
        for (const auto& [dc, dr] : kSquareDirections) {
            const OffsetCoord q{o.col + dc, o.row + dr};
            if (model.in_bounds(q) && !model.navigable(model.index(q))) hazards.insert(model.index(q));
        }
    }
    return static_cast<int>(hazards.size());
}

}  // namespace hexroute
