#pragma once

// JSON readers and writers for charts, models, routes, cost matrices and tour
// results. Every writer has a reader that restores the same value.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hexroute/envmodel.hpp"
#include "hexroute/error.hpp"
#include "hexroute/search.hpp"
#include "hexroute/smoothing.hpp"
#include "hexroute/square_grid.hpp"
#include "hexroute/tour.hpp"

namespace hexroute::io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& where)
{
    if (!j.is_object() || !j.contains(name)) throw invalid_input(where + name + ": missing");
    return j.at(name);
}

inline double number(const json& j, const std::string& where)
{
    if (!j.is_number()) throw invalid_input(where + ": expected a number");
    return j.get<double>();
}

inline int integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw invalid_input(where + ": expected an integer");
    return j.get<int>();
}

inline GeoPoint point(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) throw invalid_input(where + ": expected [lon, lat]");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

inline json point(GeoPoint p) { return json::array({p.lon, p.lat}); }

}  // namespace detail

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_input(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw invalid_input(path + ": malformed JSON (" + e.what() + ")");
    }
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input(path + ": cannot write file");
    out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- obstacle chart -------------------------------------------------------

struct ChartFile {
    ObstacleChart chart;
    std::optional<double> size;
};

inline ChartFile read_chart(const json& j)
{
    ChartFile out;
    const json& bbox = detail::field(j, "bbox", "");
    if (!bbox.is_array() || bbox.size() != 4) throw invalid_input("bbox: expected [min_lon, min_lat, max_lon, max_lat]");
    out.chart.bbox = {detail::number(bbox[0], "bbox[0]"), detail::number(bbox[1], "bbox[1]"),
                      detail::number(bbox[2], "bbox[2]"), detail::number(bbox[3], "bbox[3]")};
    if (j.contains("obstacles")) {
        const json& obstacles = j.at("obstacles");
        if (!obstacles.is_array()) throw invalid_input("obstacles: expected an array of polygons");
        for (std::size_t i = 0; i < obstacles.size(); ++i) {
            const std::string where = "obstacles[" + std::to_string(i) + "]";
            if (!obstacles[i].is_array()) throw invalid_input(where + ": expected an array of [lon, lat]");
            Ring ring;
            for (std::size_t k = 0; k < obstacles[i].size(); ++k) {
                ring.push_back(detail::point(obstacles[i][k], where + "[" + std::to_string(k) + "]"));
            }
            if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
            out.chart.obstacles.push_back(std::move(ring));
        }
    }
    if (j.contains("size")) out.size = detail::number(j.at("size"), "size");
    out.chart.validate();
    return out;
}

inline json write_chart(const ObstacleChart& chart, std::optional<double> size = std::nullopt)
{
    json obstacles = json::array();
    for (const Ring& ring : chart.obstacles) {
        json r = json::array();
        for (const GeoPoint& p : ring) r.push_back(detail::point(p));
        obstacles.push_back(std::move(r));
    }
    json j{{"bbox", {chart.bbox.min_lon, chart.bbox.min_lat, chart.bbox.max_lon, chart.bbox.max_lat}},
           {"obstacles", std::move(obstacles)}};
    if (size) j["size"] = *size;
    return j;
}

// --- environment model ----------------------------------------------------

namespace detail {

inline json cell_rows(const CellTable& model)
{
    json rows = json::array();
    for (int r = 0; r < model.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < model.cols(); ++c) {
            const Cell& cell = model.cell(model.index(OffsetCoord{c, r}));
            row.push_back({{"navigable", cell.navigable},
                           {"weight", cell.weight ? json(*cell.weight) : json(nullptr)}});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline const char* border_name(BorderPolicy b) { return b == BorderPolicy::kUnnavigable ? "unnavigable" : "ignore"; }

struct CellGrid {
    int rows = 0;
    int cols = 0;
    BorderPolicy border = BorderPolicy::kUnnavigable;
    std::vector<Cell> cells;
};

inline CellGrid read_cells(const json& j)
{
    CellGrid g;
    g.rows = integer(field(j, "rows", ""), "rows");
    g.cols = integer(field(j, "cols", ""), "cols");
    if (g.rows < 1 || g.cols < 1) throw invalid_input("rows/cols: must be positive");
    if (j.contains("border_policy")) {
        const json& p = j.at("border_policy");
        if (p == "ignore") {
            g.border = BorderPolicy::kIgnore;
        } else if (p != "unnavigable") {
            throw invalid_input("border_policy: expected \"unnavigable\" or \"ignore\"");
        }
    }
    const json& cells = field(j, "cells", "");
    if (!cells.is_array() || cells.size() != static_cast<std::size_t>(g.rows)) {
        throw invalid_input("cells: expected one array per row");
    }
    g.cells.reserve(static_cast<std::size_t>(g.rows) * static_cast<std::size_t>(g.cols));
    for (int r = 0; r < g.rows; ++r) {
        const json& row = cells[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(g.cols)) {
            throw invalid_input("cells[" + std::to_string(r) + "]: expected " + std::to_string(g.cols) + " cells");
        }
        for (const json& c : row) {
            const std::string where = "cells[" + std::to_string(r) + "][].";
            const json& nav = field(c, "navigable", where);
            if (!nav.is_boolean()) throw invalid_input(where + "navigable: expected true or false");
            Cell cell;
            cell.navigable = nav.get<bool>();
            const json& w = field(c, "weight", where);
            if (!w.is_null()) cell.weight = number(w, where + "weight");
            g.cells.push_back(cell);
        }
    }
    return g;
}

}  // namespace detail

inline json write_model(const EnvModel& model)
{
    const HexLayout& l = model.layout();
    return {{"grid", "hex"},
            {"layout",
             {{"origin_lon", l.origin_lon()}, {"origin_lat", l.origin_lat()}, {"size", l.size()},
              {"orientation", "even-r"}}},
            {"rows", model.rows()},
            {"cols", model.cols()},
            {"border_policy", detail::border_name(model.border_policy())},
            {"cells", detail::cell_rows(model)}};
}

inline json write_model(const SquareModel& model)
{
    const SquareLayout& l = model.layout();
    return {{"grid", "square"},
            {"layout", {{"origin_lon", l.origin_lon()}, {"origin_lat", l.origin_lat()}, {"side", l.side()}}},
            {"rows", model.rows()},
            {"cols", model.cols()},
            {"border_policy", detail::border_name(model.border_policy())},
            {"cells", detail::cell_rows(model)}};
}

inline EnvModel read_model(const json& j)
{
    if (j.contains("grid") && j.at("grid") != "hex") throw invalid_input("grid: expected \"hex\"");
    const json& layout = detail::field(j, "layout", "");
    const HexLayout l(detail::number(detail::field(layout, "origin_lon", "layout."), "layout.origin_lon"),
                      detail::number(detail::field(layout, "origin_lat", "layout."), "layout.origin_lat"),
                      detail::number(detail::field(layout, "size", "layout."), "layout.size"));
    auto g = detail::read_cells(j);
    return EnvModel::from_cells(l, g.rows, g.cols, std::move(g.cells), g.border);
}

inline SquareModel read_square_model(const json& j)
{
    if (!j.contains("grid") || j.at("grid") != "square") throw invalid_input("grid: expected \"square\"");
    const json& layout = detail::field(j, "layout", "");
    const SquareLayout l(detail::number(detail::field(layout, "origin_lon", "layout."), "layout.origin_lon"),
                         detail::number(detail::field(layout, "origin_lat", "layout."), "layout.origin_lat"),
                         detail::number(detail::field(layout, "side", "layout."), "layout.side"));
    auto g = detail::read_cells(j);
    return SquareModel::from_cells(l, g.rows, g.cols, std::move(g.cells), g.border);
}

// --- search output ----------------------------------------------------------

inline json write_raw_path(const RawPath& path)
{
    json cells = json::array();
    for (const OffsetCoord o : path.cells) cells.push_back({o.col, o.row});
    return {{"cells", std::move(cells)}, {"sailing_cost", path.sailing_cost}, {"distance", path.distance}};
}

inline RawPath read_raw_path(const json& j)
{
    RawPath path;
    const json& cells = detail::field(j, "cells", "");
    if (!cells.is_array()) throw invalid_input("cells: expected an array of [col, row]");
    for (const json& c : cells) {
        if (!c.is_array() || c.size() != 2) throw invalid_input("cells[]: expected [col, row]");
        path.cells.push_back({detail::integer(c[0], "cells[][0]"), detail::integer(c[1], "cells[][1]")});
    }
    path.sailing_cost = detail::number(detail::field(j, "sailing_cost", ""), "sailing_cost");
    path.distance = detail::number(detail::field(j, "distance", ""), "distance");
    return path;
}

/// Deterministic statistics (wall-clock time is reported separately).
inline json write_stats(const SearchStats& s)
{
    return {{"traversed_times", s.traversed_times}, {"extended_nodes", s.extended_nodes},
            {"average_times", s.average_times()},   {"reopened_nodes", s.reopened_nodes},
            {"turning_times", s.turning_times}};
}

inline SearchStats read_stats(const json& j)
{
    SearchStats s;
    s.traversed_times = detail::field(j, "traversed_times", "").get<long>();
    s.extended_nodes = detail::field(j, "extended_nodes", "").get<long>();
    s.reopened_nodes = j.value("reopened_nodes", 0L);
    s.turning_times = detail::field(j, "turning_times", "").get<int>();
    return s;
}

// --- routes -----------------------------------------------------------------

inline json write_route(const Route& route)
{
    json wps = json::array();
    for (const Waypoint& wp : route.waypoints) {
        json w{{"position", detail::point(wp.position)}, {"arrived_radius", wp.arrived_radius}};
        if (wp.turn) {
            const Turn& t = *wp.turn;
            w["turn"] = {{"case", t.kind == TurnCase::kInside ? "inside" : "outside"},
                         {"center", detail::point(t.center)},
                         {"radius", t.radius},
                         {"entry", detail::point(t.entry)},
                         {"exit", detail::point(t.exit)},
                         {"tangent_offset", t.tangent_offset},
                         {"interior_angle", t.interior_angle},
                         {"degenerate_leg", t.degenerate_leg}};
        }
        wps.push_back(std::move(w));
    }
    return {{"waypoints", std::move(wps)},
            {"total_distance", route.total_distance},
            {"source_cost", route.source_cost},
            {"max_weight", route.max_weight}};
}

inline Route read_route(const json& j)
{
    Route route;
    const json& wps = detail::field(j, "waypoints", "");
    if (!wps.is_array()) throw invalid_input("waypoints: expected an array");
    for (std::size_t i = 0; i < wps.size(); ++i) {
        const std::string where = "waypoints[" + std::to_string(i) + "].";
        const json& w = wps[i];
        Waypoint wp;
        wp.position = detail::point(detail::field(w, "position", where), where + "position");
        wp.arrived_radius = detail::number(detail::field(w, "arrived_radius", where), where + "arrived_radius");
        if (w.contains("turn") && !w.at("turn").is_null()) {
            const json& t = w.at("turn");
            Turn turn;
            const auto kind = detail::field(t, "case", where + "turn.").get<std::string>();
            if (kind != "inside" && kind != "outside") throw invalid_input(where + "turn.case: inside|outside");
            turn.kind = kind == "inside" ? TurnCase::kInside : TurnCase::kOutside;
            turn.center = detail::point(detail::field(t, "center", where + "turn."), where + "turn.center");
            turn.radius = detail::number(detail::field(t, "radius", where + "turn."), where + "turn.radius");
            turn.entry = detail::point(detail::field(t, "entry", where + "turn."), where + "turn.entry");
            turn.exit = detail::point(detail::field(t, "exit", where + "turn."), where + "turn.exit");
            turn.tangent_offset = detail::number(detail::field(t, "tangent_offset", where + "turn."), where + "turn.tangent_offset");
            turn.interior_angle = detail::number(detail::field(t, "interior_angle", where + "turn."), where + "turn.interior_angle");
            turn.degenerate_leg = t.value("degenerate_leg", false);
            wp.turn = turn;
        }
        route.waypoints.push_back(wp);
    }
    route.total_distance = detail::number(detail::field(j, "total_distance", ""), "total_distance");
    route.source_cost = detail::number(detail::field(j, "source_cost", ""), "source_cost");
    route.max_weight = detail::number(detail::field(j, "max_weight", ""), "max_weight");
    return route;
}

// --- cost matrix --------------------------------------------------------------

inline json write_matrix(const TaskNetwork& network)
{
    const std::size_t n = network.node_count();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                row.push_back(0.0);
            } else if (network.reachable(i, j)) {
                row.push_back(network.cost(i, j));
            } else {
                row.push_back(nullptr);
            }
        }
        rows.push_back(std::move(row));
    }
    return {{"labels", network.labels()},
            {"matrix", std::move(rows)},
            {"unit", "nmi"},
            {"virtual_border", {network.labels().front(), network.labels().back()}}};
}

inline TaskNetwork read_matrix(const json& j)
{
    const json& labels_j = detail::field(j, "labels", "");
    if (!labels_j.is_array()) throw invalid_input("labels: expected an array of strings");
    std::vector<std::string> labels;
    for (const json& l : labels_j) {
        if (!l.is_string()) throw invalid_input("labels: expected strings");
        labels.push_back(l.get<std::string>());
    }
    const json& m = detail::field(j, "matrix", "");
    if (!m.is_array() || m.size() != labels.size()) throw invalid_input("matrix: expected one row per label");
    std::vector<std::vector<std::optional<double>>> cost(labels.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i].is_array() || m[i].size() != labels.size()) {
            throw invalid_input("matrix[" + std::to_string(i) + "]: expected " + std::to_string(labels.size()) + " entries");
        }
        for (std::size_t k = 0; k < m[i].size(); ++k) {
            const json& v = m[i][k];
            if (v.is_null() || i == k) {
                cost[i].emplace_back();
            } else {
                cost[i].emplace_back(detail::number(v, "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
            }
        }
    }
    return TaskNetwork(std::move(labels), cost);
}

// --- tour result ------------------------------------------------------------

inline json write_tour(const TourResult& tour, const TaskNetwork& network)
{
    json order_labels = json::array();
    for (const std::size_t i : tour.order) order_labels.push_back(network.labels().at(i));
    return {{"order", tour.order},
            {"order_labels", std::move(order_labels)},
            {"length", tour.length},
            {"iterations_to_best", tour.iterations_to_best},
            {"iterations", tour.iterations},
            {"converged", tour.converged},
            {"restarts", tour.restarts},
            {"history", tour.history},
            {"rho_trace", tour.rho_trace}};
}

inline TourResult read_tour(const json& j)
{
    TourResult t;
    t.order = detail::field(j, "order", "").get<std::vector<std::size_t>>();
    t.length = detail::number(detail::field(j, "length", ""), "length");
    t.iterations_to_best = j.value("iterations_to_best", 0);
    t.iterations = j.value("iterations", 0);
    t.converged = j.value("converged", false);
    t.restarts = j.value("restarts", 0L);
    t.history = j.value("history", std::vector<double>{});
    t.rho_trace = j.value("rho_trace", std::vector<double>{});
    return t;
}

}  // namespace hexroute::io
