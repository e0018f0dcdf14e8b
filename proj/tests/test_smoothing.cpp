#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hexroute/smoothing.hpp"
#include "support/fixtures.hpp"

using namespace hexroute;
using fixtures::hex_from;

namespace {

std::size_t cell(const CellTable& g, int c, int r) { return g.index(OffsetCoord{c, r}); }

double polyline_length(const std::vector<GeoPoint>& pts)
{
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) s += distance(pts[i - 1], pts[i]);
    return s;
}

}  // namespace

TEST(Smooth, CollinearMiddleRemoved)
{
    const EnvModel hex = hex_from(fixtures::open_map(10, 10));
    const std::vector<std::size_t> three{cell(hex, 3, 4), cell(hex, 4, 4), cell(hex, 5, 4)};
    EXPECT_EQ(smooth_cells(hex, three), (std::vector<std::size_t>{three.front(), three.back()}));
}

TEST(Smooth, StraightRawPathLeavesTwoWaypoints)
{
    const EnvModel hex = hex_from(fixtures::open_map(10, 20));
    const auto r = plan_cells(hex, cell(hex, 2, 5), cell(hex, 16, 5), GridMode::kHex, HeuristicMode::kGuided);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(smooth(hex, *r.path).size(), 2u);
}

TEST(Smooth, CornerAroundWallIsKept)
{
    // Wall along col 5 for rows 0..7 on a 10x10 map; route from west to east must pass below it.
    auto m = fixtures::open_map(10, 10);
    for (int r = 0; r <= 7; ++r) m.nav[m.at(5, r)] = false;
    const EnvModel hex = hex_from(m);
    const auto r = plan_cells(hex, cell(hex, 2, 1), cell(hex, 8, 1), GridMode::kHex, HeuristicMode::kGuided);
    ASSERT_TRUE(r.found());
    const auto kept = smooth_cells(hex, path_indices(hex, *r.path));
    EXPECT_GT(kept.size(), 2u);
    // Direct corridor between the endpoints is blocked.
    EXPECT_FALSE(corridor_max_weight(hex, kept.front(), kept.back()).has_value());
    for (std::size_t i = 1; i < kept.size(); ++i) {
        EXPECT_TRUE(corridor_max_weight(hex, kept[i - 1], kept[i]).has_value());
    }
}

TEST(Smooth, NeverRaisesPeakWeightAndIsIdempotent)
{
    std::mt19937_64 rng(17);
    int solved = 0;
    while (solved < 20) {
        const oracle::Map m = oracle::random_map(30, 30, 0.2, rng);
        const auto s = oracle::random_open_cell(m, rng), g = oracle::random_open_cell(m, rng);
        const EnvModel hex = hex_from(m);
        const auto r = plan_cells(hex, cell(hex, s.first, s.second), cell(hex, g.first, g.second), GridMode::kHex,
                                  HeuristicMode::kGuided);
        if (!r.found()) continue;
        ++solved;
        const auto raw = path_indices(hex, *r.path);
        const auto kept = smooth_cells(hex, raw);
        double raw_peak = 0.0;
        std::vector<GeoPoint> raw_pts, kept_pts;
        for (const std::size_t c : raw) {
            raw_peak = std::max(raw_peak, hex.weight(c));
            raw_pts.push_back(hex.center(c));
        }
        for (const std::size_t c : kept) kept_pts.push_back(hex.center(c));
        EXPECT_LE(route_max_weight(hex, std::span<const std::size_t>(kept)), raw_peak);
        EXPECT_LE(polyline_length(kept_pts), polyline_length(raw_pts) + 1e-9);
        EXPECT_EQ(smooth_cells(hex, kept), kept);
    }
}

TEST(Smooth, FinalPathCellsCoverEveryCorridor)
{
    const EnvModel hex = hex_from(fixtures::open_map(12, 12));
    const auto r = plan_cells(hex, cell(hex, 1, 1), cell(hex, 10, 9), GridMode::kHex, HeuristicMode::kGuided);
    ASSERT_TRUE(r.found());
    const auto cells = final_path_cells(hex, *r.path);
    EXPECT_EQ(cells.front(), (OffsetCoord{1, 1}));
    EXPECT_EQ(cells.back(), (OffsetCoord{10, 9}));
}

TEST(TurnSpec, CriticalAngle)
{
    EXPECT_EQ(TurnSpec(1.0, 1.0).critical_angle(), std::numbers::pi / 2);
    EXPECT_NEAR(TurnSpec(1.0, std::sqrt(3.0)).critical_angle(), std::numbers::pi / 3, 1e-15);
    EXPECT_THROW(TurnSpec(0.0, 1.0), Error);
    const TurnSpec d = TurnSpec::defaults_for(0.002);
    EXPECT_DOUBLE_EQ(d.arrived_radius(), 0.24);
    EXPECT_DOUBLE_EQ(d.min_turn_radius(), 0.12);
}

TEST(AnnotateTurns, InsideCaseAt120Degrees)
{
    // Points in degrees; legs of 1 degree = 60 nmi meeting at 120 degrees.
    const TurnSpec spec(1.0, 1.0);
    const GeoPoint b{0.0, 0.0};
    const GeoPoint a{-1.0, 0.0};
    const GeoPoint c{std::cos(std::numbers::pi / 3), std::sin(std::numbers::pi / 3)};
    const std::vector<GeoPoint> pts{a, b, c};
    const Route route = annotate_turns(pts, spec);
    ASSERT_EQ(route.waypoints.size(), 3u);
    ASSERT_TRUE(route.waypoints[1].turn.has_value());
    const Turn& t = *route.waypoints[1].turn;
    EXPECT_EQ(t.kind, TurnCase::kInside);
    EXPECT_NEAR(t.interior_angle, 2 * std::numbers::pi / 3, 1e-12);
    EXPECT_NEAR(t.tangent_offset, 1.0 / std::sqrt(3.0), 1e-12);
    EXPECT_FALSE(t.degenerate_leg);
    // Tangent points at the offset along each leg; center at radius from both.
    EXPECT_NEAR(distance_nmi(b, t.entry), t.tangent_offset, 1e-9);
    EXPECT_NEAR(distance_nmi(b, t.exit), t.tangent_offset, 1e-9);
    EXPECT_NEAR(distance_nmi(t.center, t.entry), 1.0, 1e-9);
    EXPECT_NEAR(distance_nmi(t.center, t.exit), 1.0, 1e-9);
    EXPECT_FALSE(route.waypoints.front().turn.has_value());
    EXPECT_FALSE(route.waypoints.back().turn.has_value());
    EXPECT_NEAR(route.total_distance, 120.0, 1e-9);
}

TEST(AnnotateTurns, OutsideCaseAt60Degrees)
{
    const TurnSpec spec(1.0, 1.0);
    const std::vector<GeoPoint> pts{{-1.0, 0.0}, {0.0, 0.0}, {-std::cos(std::numbers::pi / 3), std::sin(std::numbers::pi / 3)}};
    const Route route = annotate_turns(pts, spec);
    ASSERT_TRUE(route.waypoints[1].turn.has_value());
    const Turn& t = *route.waypoints[1].turn;
    EXPECT_EQ(t.kind, TurnCase::kOutside);
    EXPECT_NEAR(distance_nmi(pts[1], t.entry), 1.0, 1e-9);
    EXPECT_NEAR(distance_nmi(pts[1], t.exit), 1.0, 1e-9);
    EXPECT_NEAR(distance_nmi(t.center, t.entry), t.radius, 1e-9);
    EXPECT_NEAR(distance_nmi(t.center, t.exit), t.radius, 1e-9);
}

TEST(AnnotateTurns, ShortLegsClampAndFlag)
{
    const TurnSpec spec(5.0, 10.0);
    const std::vector<GeoPoint> pts{{0.0, 0.0}, {0.01, 0.0}, {0.01, 0.01}};
    const Turn t = *annotate_turns(pts, spec).waypoints[1].turn;
    EXPECT_EQ(t.kind, TurnCase::kInside);
    EXPECT_TRUE(t.degenerate_leg);
    EXPECT_NEAR(t.tangent_offset, 0.3, 1e-12);
}

TEST(AnnotateTurns, StraightCornerHasNoTurnAndInputErrors)
{
    const TurnSpec spec(1.0, 2.0);
    const std::vector<GeoPoint> straight{{0, 0}, {1, 0}, {2, 0}};
    EXPECT_FALSE(annotate_turns(straight, spec).waypoints[1].turn.has_value());
    const std::vector<GeoPoint> dup{{0, 0}, {0, 0}, {2, 0}};
    EXPECT_THROW(annotate_turns(dup, spec), Error);
    EXPECT_THROW(annotate_turns(std::span<const GeoPoint>{}, spec), Error);
    const std::vector<GeoPoint> one{{3, 4}};
    EXPECT_EQ(annotate_turns(one, spec).waypoints.size(), 1u);
}

TEST(MakeRoute, CarriesSourceCostAndPeakWeight)
{
    auto m = fixtures::open_map(12, 12);
    m.nav[m.at(6, 6)] = false;
    const EnvModel hex = hex_from(m);
    const auto r = plan_cells(hex, cell(hex, 1, 1), cell(hex, 10, 10), GridMode::kHex, HeuristicMode::kGuided);
    ASSERT_TRUE(r.found());
    const Route route = make_route(hex, *r.path, TurnSpec(0.5, 1.0));
    EXPECT_EQ(route.source_cost, r.path->sailing_cost);
    EXPECT_GE(route.max_weight, 1.0);
    EXPECT_LE(route.waypoints.size(), r.path->cells.size());
}
