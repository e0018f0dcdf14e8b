#pragma once

// Plain SVG rendering of grid models, routes and tours.

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hexroute/envmodel.hpp"
#include "hexroute/smoothing.hpp"
#include "hexroute/square_grid.hpp"
#include "hexroute/tour.hpp"

namespace hexroute::svg {

/// Maps geographic coordinates onto a pixel canvas, north up.
class Canvas {
public:
    Canvas(const BBox& bbox, double width_px = 900.0)
        : bbox_(bbox), scale_(width_px / bbox.width()), width_(width_px), height_(bbox.height() * scale_)
    {
        out_.precision(6);
        out_ << std::fixed;
    }

    double x(GeoPoint p) const { return (p.lon - bbox_.min_lon) * scale_; }
    double y(GeoPoint p) const { return (bbox_.max_lat - p.lat) * scale_; }

    template <class Points>
    void polygon(const Points& pts, const std::string& fill, const std::string& stroke, double stroke_width = 0.3)
    {
        out_ << "<polygon points=\"";
        for (const GeoPoint& p : pts) out_ << x(p) << ',' << y(p) << ' ';
        out_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width << "\"/>\n";
    }

    void polyline(std::span<const GeoPoint> pts, const std::string& stroke, double stroke_width,
                  const std::string& dash = {})
    {
        out_ << "<polyline fill=\"none\" points=\"";
        for (const GeoPoint& p : pts) out_ << x(p) << ',' << y(p) << ' ';
        out_ << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width << '"';
        if (!dash.empty()) out_ << " stroke-dasharray=\"" << dash << '"';
        out_ << "/>\n";
    }

    void circle(GeoPoint c, double radius_px, const std::string& fill, const std::string& stroke = "none")
    {
        out_ << "<circle cx=\"" << x(c) << "\" cy=\"" << y(c) << "\" r=\"" << radius_px << "\" fill=\"" << fill
             << "\" stroke=\"" << stroke << "\"/>\n";
    }

    void text(GeoPoint at, const std::string& label, double font_px = 12.0)
    {
        out_ << "<text x=\"" << x(at) + 4.0 << "\" y=\"" << y(at) - 4.0 << "\" font-size=\"" << font_px
             << "\" font-family=\"sans-serif\">" << label << "</text>\n";
    }

    std::string finish() const
    {
        std::ostringstream doc;
        doc.precision(3);
        doc << std::fixed << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
            << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << out_.str() << "</svg>\n";
        return doc.str();
    }

private:
    BBox bbox_;
    double scale_;
    double width_;
    double height_;
    std::ostringstream out_;
};

/// Grey level for a grid weight: 1 is near white, 10 (all neighbours blocked) is dark.
inline std::string weight_fill(double w)
{
    const double t = std::clamp((w - 1.0) / 9.0, 0.0, 1.0);
    const int level = static_cast<int>(235.0 - 150.0 * t);
    std::ostringstream s;
    s << "rgb(" << level << ',' << level << ',' << std::min(255, level + 15) << ')';
    return s.str();
}

inline std::string cell_fill(const Cell& cell) { return cell.navigable ? weight_fill(*cell.weight) : "black"; }

inline void draw_model(Canvas& canvas, const EnvModel& model)
{
    for (std::size_t i = 0; i < model.cell_count(); ++i) {
        canvas.polygon(hex_corners(model.layout(), model.cube(i)), cell_fill(model.cell(i)), "#bbbbbb");
    }
}

inline void draw_model(Canvas& canvas, const SquareModel& model)
{
    for (std::size_t i = 0; i < model.cell_count(); ++i) {
        canvas.polygon(model.layout().corners(model.coord(i)), cell_fill(model.cell(i)), "#bbbbbb");
    }
}

inline void draw_obstacles(Canvas& canvas, const ObstacleChart& chart)
{
    for (const Ring& ring : chart.obstacles) canvas.polygon(ring, "none", "#c0392b", 1.0);
}

inline void draw_raw_path(Canvas& canvas, std::span<const GeoPoint> centers)
{
    canvas.polyline(centers, "#2471a3", 1.2, "2,3");
}

inline void draw_route(Canvas& canvas, const Route& route, const std::string& colour = "#d35400")
{
    std::vector<GeoPoint> pts;
    for (const Waypoint& wp : route.waypoints) pts.push_back(wp.position);
    canvas.polyline(pts, colour, 2.0);
    for (const GeoPoint& p : pts) canvas.circle(p, 2.5, colour);
}

/// Tour legs in visiting order, each task point numbered by its label.
inline void draw_tour(Canvas& canvas, const TourResult& tour, const TaskNetwork& network,
                      std::span<const GeoPoint> points, const PairRoutes& routes)
{
    const std::size_t n = network.node_count();
    std::vector<std::size_t> visit{network.start()};
    visit.insert(visit.end(), tour.order.begin(), tour.order.end());
    visit.push_back(network.target());
    for (std::size_t k = 1; k < visit.size(); ++k) {
        const std::size_t a = std::min(visit[k - 1], visit[k]);
        const std::size_t b = std::max(visit[k - 1], visit[k]);
        if (const auto it = routes.find({a, b}); it != routes.end()) draw_route(canvas, it->second);
    }
    for (std::size_t i = 0; i < n && i < points.size(); ++i) {
        canvas.circle(points[i], 4.0, i == 0 || i + 1 == n ? "#27ae60" : "#8e44ad");
        canvas.text(points[i], network.labels()[i]);
    }
}

}  // namespace hexroute::svg
