// Acceptance suite: one PASS/FAIL line per criterion, details indented below it.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "hexroute/hexroute.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace hexroute;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            if (ok || notes.size() < 12) notes.push_back("violated: " + what);
            ok = false;
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string order_text(const TaskNetwork& net, const std::vector<std::size_t>& order)
{
    std::string s;
    for (const std::size_t i : order) s += (s.empty() ? "" : ",") + net.labels()[i];
    return s;
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void time_limit(Check& c, Clock::time_point t0, double limit)
{
    const double s = seconds_since(t0);
    c.note(fmt("runtime %.3f s (limit %.0f s)", s, limit));
    c.expect(s < limit, fmt("runtime under %.0f s", limit));
}

// One random 50x50 map with a start and goal, as used by criteria 3 and 4.
struct Instance {
    oracle::Map map;
    std::pair<int, int> start;
    std::pair<int, int> goal;
};

std::vector<Instance> random_instances(int count, int size, double density, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Instance> out;
    for (int k = 0; k < count; ++k) {
        Instance in{oracle::random_map(size, size, density, rng), {}, {}};
        in.start = oracle::random_open_cell(in.map, rng);
        in.goal = oracle::random_open_cell(in.map, rng);
        out.push_back(std::move(in));
    }
    return out;
}

const std::vector<Instance>& fifty_by_fifty()
{
    static const std::vector<Instance> maps = random_instances(100, 50, 0.3, 20240501);
    return maps;
}

template <class G>
std::size_t at(const G& g, std::pair<int, int> p)
{
    return g.index(OffsetCoord{p.first, p.second});
}

Check coordinate_algebra()
{
    Check c;
    const auto t0 = Clock::now();
    long count = 0;
    for (int row = -50; row <= 50; ++row) {
        for (int col = -50; col <= 50; ++col) {
            const OffsetCoord o{col, row};
            const CubeCoord cube = offset_to_cube(o);
            c.expect(cube.x() + cube.y() + cube.z() == 0, "x+y+z=0");
            c.expect(cube_to_offset(cube) == o, "offset -> cube -> offset");
            c.expect(CubeCoord(cube.x(), cube.y(), cube.z()) == cube, "checked constructor accepts the cube");
            for (const CubeCoord n : neighbors(cube)) {
                c.expect(n.x() + n.y() + n.z() == 0, "x+y+z=0 on neighbours");
                c.expect(offset_to_cube(cube_to_offset(n)) == n, "cube -> offset -> cube");
            }
            ++count;
        }
    }
    bool threw = false;
    try {
        (void)CubeCoord(1, 1, 1);
    } catch (const Error&) {
        threw = true;
    }
    c.expect(threw, "constructor rejects x+y+z != 0");
    c.note(fmt("%ld offsets checked", count));
    time_limit(c, t0, 1.0);
    return c;
}

Check distance_oracle()
{
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> base(-40, 40), delta(-20, 20);
    int pairs = 0;
    while (pairs < 1000) {
        const OffsetCoord a{base(rng), base(rng)};
        const OffsetCoord b{a.col + delta(rng), a.row + delta(rng)};
        const int d = cube_distance(offset_to_cube(a), offset_to_cube(b));
        if (d > 20) continue;
        ++pairs;
        c.expect(d == oracle::hex_hops({a.col, a.row}, {b.col, b.row}, 21),
                 fmt("distance (%d,%d)-(%d,%d)", a.col, a.row, b.col, b.row));
    }
    c.note(fmt("%d pairs with D <= 20", pairs));
    time_limit(c, t0, 1.0);
    return c;
}

Check astar_optimality()
{
    Check c;
    const auto t0 = Clock::now();
    int solvable = 0;
    long compared = 0;
    for (const Instance& in : fifty_by_fifty()) {
        const EnvModel hex = fixtures::hex_from(in.map);
        const SquareModel sq = fixtures::square_from(in.map);
        const std::pair<GridMode, oracle::Lattice> modes[] = {{GridMode::kHex, oracle::Lattice::kHex},
                                                              {GridMode::kSquare4, oracle::Lattice::kSquare4},
                                                              {GridMode::kSquare8, oracle::Lattice::kSquare8}};
        for (const auto& [mode, lattice] : modes) {
            const auto want = oracle::min_cost(in.map, lattice, in.start, in.goal);
            if (mode == GridMode::kHex && want) ++solvable;
            for (const HeuristicMode hm : {HeuristicMode::kGuided, HeuristicMode::kPlain}) {
                const PlanResult got = mode == GridMode::kHex
                                           ? plan_cells(hex, at(hex, in.start), at(hex, in.goal), mode, hm)
                                           : plan_cells(sq, at(sq, in.start), at(sq, in.goal), mode, hm);
                ++compared;
                c.expect(got.found() == want.has_value(), "reachability agrees with the oracle");
                if (got.found() && want) c.expect(got.path->sailing_cost == *want, "cost equals the oracle exactly");
            }
        }
    }
    c.note(fmt("100 maps, %d solvable on the hex lattice, %ld plans compared", solvable, compared));
    time_limit(c, t0, 30.0);
    return c;
}

Check no_reopen_equivalence()
{
    Check c;
    const auto t0 = Clock::now();
    long reopened = 0;
    for (const Instance& in : fifty_by_fifty()) {
        const EnvModel hex = fixtures::hex_from(in.map);
        for (const HeuristicMode hm : {HeuristicMode::kGuided, HeuristicMode::kPlain}) {
            const auto a = plan_cells(hex, at(hex, in.start), at(hex, in.goal), GridMode::kHex, hm,
                                      {.reopen_closed = false});
            const auto b = plan_cells(hex, at(hex, in.start), at(hex, in.goal), GridMode::kHex, hm,
                                      {.reopen_closed = true});
            reopened += b.stats.reopened_nodes;
            c.expect(a.found() == b.found(), "reachability agrees");
            if (a.found() && b.found()) c.expect(a.path->sailing_cost == b.path->sailing_cost, "equal cost");
        }
    }
    c.note(fmt("cells reopened by the reopening variant: %ld", reopened));
    time_limit(c, t0, 30.0);
    return c;
}

Check kappa_efficiency()
{
    Check c;
    const auto t0 = Clock::now();
    const oracle::Map open = fixtures::open_map(100, 100);
    // Hex lattice steps run at 0, 60 and 120 degrees; due north is the worst heading.
    const EnvModel hex = fixtures::hex_from(open);
    const auto h = plan_cells(hex, at(hex, {50, 10}), at(hex, {50, 90}), GridMode::kHex, HeuristicMode::kGuided);
    // Square4 steps run at 0 and 90 degrees; the diagonal is the worst heading.
    const SquareModel sq = fixtures::square_from(open);
    const auto s = plan_cells(sq, at(sq, {10, 10}), at(sq, {90, 90}), GridMode::kSquare4, HeuristicMode::kGuided);
    c.expect(h.found() && s.found(), "both plans found");
    if (h.found() && s.found()) {
        const double kh = kappa(hex, *h.path);
        const double ks = kappa(sq, *s.path);
        c.note(fmt("hex kappa %.4f (want 0.866), square4 kappa %.4f (want 0.707)", kh, ks));
        c.expect(std::abs(kh - 0.866) <= 0.01, "hex kappa = 0.866 +- 0.01");
        c.expect(std::abs(ks - 0.707) <= 0.01, "square4 kappa = 0.707 +- 0.01");
    }
    time_limit(c, t0, 5.0);
    return c;
}

Check grid_weights()
{
    Check c;
    const double want[] = {1.0, 1.25, 2.0, 3.25, 5.0, 7.25, 10.0};
    for (int n = 0; n <= 6; ++n) {
        c.expect(grid_weight(n) == want[n], fmt("w(%d) = %.2f", n, want[n]));
        // The same value through a model: block n of the centre cell's neighbours.
        oracle::Map m = fixtures::open_map(5, 5);
        const auto nb = oracle::hex_neighbours(2, 2);
        for (int k = 0; k < n; ++k) m.nav[m.at(nb[static_cast<std::size_t>(k)].first, nb[static_cast<std::size_t>(k)].second)] = false;
        const EnvModel model = fixtures::hex_from(m);
        c.expect(model.weight(at(model, {2, 2})) == want[n], fmt("model weight with %d blocked neighbours", n));
    }
    c.note("w = 1.0, 1.25, 2.0, 3.25, 5.0, 7.25, 10.0 for n = 0..6");
    return c;
}

template <class G>
void check_smoothing(Check& c, const G& grid, const RawPath& path)
{
    const auto raw = path_indices(grid, path);
    const auto kept = smooth_cells(grid, std::span<const std::size_t>(raw));
    double raw_len = 0.0, kept_len = 0.0, raw_peak = 0.0;
    for (std::size_t i = 1; i < raw.size(); ++i) raw_len += distance(grid.center(raw[i - 1]), grid.center(raw[i]));
    for (std::size_t i = 1; i < kept.size(); ++i) kept_len += distance(grid.center(kept[i - 1]), grid.center(kept[i]));
    for (const std::size_t i : raw) raw_peak = std::max(raw_peak, grid.weight(i));
    c.expect(kept.front() == raw.front() && kept.back() == raw.back(), "endpoints kept");
    c.expect(kept_len <= raw_len * (1 + 1e-12), "smoothed length <= raw length");
    double peak = 0.0;
    for (std::size_t i = 1; i < kept.size(); ++i) {
        const auto corridor = grid.corridor(kept[i - 1], kept[i]);
        c.expect(corridor.has_value(), "corridor stays on the map");
        if (!corridor) continue;
        for (const std::size_t cell : *corridor) {
            c.expect(grid.navigable(cell), "corridor fully navigable");
            if (grid.navigable(cell)) peak = std::max(peak, grid.weight(cell));
        }
    }
    c.expect(peak <= raw_peak, "max corridor weight <= raw max weight");
    c.expect(smooth_cells(grid, std::span<const std::size_t>(kept)) == kept, "idempotent");
}

Check smoothing()
{
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(7);
    int solved = 0, attempts = 0;
    while (solved < 50) {
        ++attempts;
        const oracle::Map m = oracle::random_map(50, 50, 0.3, rng);
        const auto s = oracle::random_open_cell(m, rng), g = oracle::random_open_cell(m, rng);
        const EnvModel hex = fixtures::hex_from(m);
        const auto r = plan_cells(hex, at(hex, s), at(hex, g), GridMode::kHex, HeuristicMode::kGuided);
        if (!r.found()) continue;
        ++solved;
        check_smoothing(c, hex, *r.path);
        const SquareModel sq = fixtures::square_from(m);
        const auto r8 = plan_cells(sq, at(sq, s), at(sq, g), GridMode::kSquare8, HeuristicMode::kGuided);
        if (r8.found()) check_smoothing(c, sq, *r8.path);
    }
    c.note(fmt("%d solvable maps out of %d drawn; hex and square8 paths smoothed", solved, attempts));
    time_limit(c, t0, 10.0);
    return c;
}

Check turn_geometry()
{
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> radius(0.05, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double r = radius(rng);
        c.expect(TurnSpec(r, r).critical_angle() == std::numbers::pi / 2, fmt("C_theta = 90 deg at r = Ra = %g", r));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int inside = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const TurnSpec spec(radius(rng), radius(rng));
        const double theta = spec.critical_angle() + unit(rng) * (std::numbers::pi - 1e-6 - spec.critical_angle());
        const double heading = unit(rng) * 2 * std::numbers::pi;
        // Legs long enough that no tangent offset is clamped; positions in degrees.
        const double leg = (4.0 * spec.arrived_radius() + unit(rng)) / kNmiPerDegree;
        const GeoPoint b{113.0 + unit(rng), 22.0 + unit(rng)};
        const GeoPoint a{b.lon + leg * std::cos(heading), b.lat + leg * std::sin(heading)};
        const GeoPoint d{b.lon + leg * std::cos(heading + theta), b.lat + leg * std::sin(heading + theta)};
        const std::vector<GeoPoint> pts{a, b, d};
        const Route route = annotate_turns(pts, spec);
        const auto& turn = route.waypoints[1].turn;
        c.expect(turn.has_value() && turn->kind == TurnCase::kInside, "inside case for theta >= C_theta");
        if (!turn || turn->kind != TurnCase::kInside) continue;
        ++inside;
        const double limit = spec.arrived_radius() * (1.0 + 1e-9);
        const double de = distance_nmi(b, turn->entry), dx = distance_nmi(b, turn->exit);
        worst = std::max({worst, de / spec.arrived_radius(), dx / spec.arrived_radius()});
        c.expect(de <= limit && dx <= limit, "tangent points within the arrived radius");
        c.expect(std::abs(distance_nmi(turn->center, turn->entry) - spec.min_turn_radius()) <=
                     1e-9 * spec.min_turn_radius() + 1e-12,
                 "entry tangent point on the fillet");
    }
    c.note(fmt("%d inside-case corners; largest tangent offset / arrived radius = %.9f", inside, worst));
    time_limit(c, t0, 5.0);
    return c;
}

TaskNetwork reference_matrix()
{
    return io::read_matrix(io::read_json_file(fixtures::data_path("reference_matrix.json")));
}

Check tour_reproduction()
{
    Check c;
    const auto t0 = Clock::now();
    const TaskNetwork net = reference_matrix();
    const std::vector<std::size_t> reported{6, 3, 1, 7, 2, 4, 5, 8};
    const double reported_sum = net.tour_length(reported);
    c.note(fmt("sum of matrix entries along 6,3,1,7,2,4,5,8: %.2f nmi", reported_sum));
    c.expect(std::abs(reported_sum - 79.70) <= 0.01, "reported order sums to 79.70");

    const TourResult best = brute_force(net);
    c.note("brute force: " + order_text(net, best.order) + fmt(" = %.2f nmi", best.length));
    c.expect(best.order == reported, "brute force returns order 6,3,1,7,2,4,5,8");
    c.expect(std::abs(best.length - 79.70) <= 0.01, "brute force length 79.70 +- 0.01");

    int matches = 0;
    std::map<std::string, int> seen;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        AcoConfig cfg;
        cfg.seed = seed;
        const TourResult aco = solve(net, cfg);
        if (aco.order == best.order && std::abs(aco.length - best.length) <= 1e-9) ++matches;
        ++seen[fmt("%.2f", aco.length)];
    }
    std::string dist;
    for (const auto& [len, n] : seen) dist += fmt(" %s x%d", len.c_str(), n);
    c.note(fmt("ACO with default config matches brute force in %d/20 seeds; lengths:", matches) + dist);
    c.expect(matches >= 18, "ACO matches brute force in >= 18 of 20 seeds");
    time_limit(c, t0, 60.0);
    return c;
}

struct MechanicsObserver {
    Check* c;
    const TaskNetwork* net;
    const AcoConfig* cfg;
    double last_rho = 1.0;
    double last_best = std::numeric_limits<double>::infinity();
    long steps = 0;
    double worst_sum_error = 0.0;

    void on_step(std::size_t, std::span<const std::size_t>, std::span<const double> p)
    {
        double sum = 0.0;
        for (const double v : p) {
            c->expect(v >= 0.0 && v <= 1.0, "probability in [0, 1]");
            sum += v;
        }
        worst_sum_error = std::max(worst_sum_error, std::abs(sum - 1.0));
        c->expect(std::abs(sum - 1.0) <= 1e-12, "probabilities sum to 1 +- 1e-12");
        ++steps;
    }

    void on_cycle(const PheromoneState& s)
    {
        for (std::size_t i = 0; i < net->node_count(); ++i) {
            for (std::size_t j = 0; j < net->node_count(); ++j) {
                if (i != j && net->reachable(i, j)) c->expect(s.tau[i][j] > 0.0, "tau > 0 on every usable edge");
            }
        }
        c->expect(s.rho <= last_rho, "rho non-increasing");
        c->expect(s.rho >= cfg->rho_min, "rho >= rho_min");
        c->expect(s.best_length <= last_best, "incumbent non-increasing");
        last_rho = s.rho;
        last_best = s.best_length;
    }
};

Check aco_mechanics()
{
    Check c;
    const auto t0 = Clock::now();
    const TaskNetwork net = reference_matrix();
    long steps = 0;
    double worst = 0.0, final_rho = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        AcoConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 2000;  // long enough for rho to reach its floor
        MechanicsObserver obs{&c, &net, &cfg};
        const TourResult r = solve(net, cfg, obs);
        steps += obs.steps;
        worst = std::max(worst, obs.worst_sum_error);
        final_rho = std::min(final_rho, r.rho_trace.back());
        c.expect(r.history.back() == r.length, "reported length is the final incumbent");
    }
    c.note(fmt("%ld transition steps; worst |sum - 1| = %.3g; smallest final rho = %.4f", steps, worst, final_rho));
    c.expect(std::abs(final_rho - AcoConfig{}.rho_min) < 1e-12, "rho reaches the rho_min floor");
    time_limit(c, t0, 60.0);
    return c;
}

Check rapidity_ordering()
{
    Check c;
    const fs::path dir = fs::temp_directory_path() / "hexroute_acceptance";
    fs::remove_all(dir);
    double avg[2] = {0, 0};
    int hazards[2] = {0, 0};
    const char* grids[] = {"hex", "square8"};
    for (int k = 0; k < 2; ++k) {
        const std::string out = (dir / grids[k]).string();
        const std::string cfg = fixtures::data_path("scenario.json");
        const char* argv[] = {"hexroute", "plan", "--config", cfg.c_str(), "--grid", grids[k], "--out", out.c_str()};
        std::ostringstream sink_out, sink_err;
        const int code = cli::run(8, argv, sink_out, sink_err);
        c.expect(code == 0, std::string("plan on ") + grids[k] + " succeeds: " + sink_err.str());
        if (code != 0) continue;
        const auto stats = io::read_json_file(out + "/stats.json");
        avg[k] = stats.at("average_times").get<double>();
        hazards[k] = stats.at("potential_hazards").get<int>();
        c.note(fmt("%-8s average_times %.3f  potential_hazards %d  extended %ld", grids[k], avg[k], hazards[k],
                   stats.at("extended_nodes").get<long>()));
    }
    fs::remove_all(dir);
    c.expect(avg[0] < avg[1], "hex average_times < square8 average_times");
    c.expect(hazards[0] <= hazards[1], "hex potential_hazards <= square8 potential_hazards");
    return c;
}

struct Criterion {
    const char* title;
    std::function<Check()> run;
};

const Criterion kCriteria[] = {
    {"coordinate algebra", coordinate_algebra},
    {"distance oracle", distance_oracle},
    {"A* optimality", astar_optimality},
    {"no-reopen equivalence", no_reopen_equivalence},
    {"kappa efficiency", kappa_efficiency},
    {"grid weight", grid_weights},
    {"smoothing", smoothing},
    {"turn geometry", turn_geometry},
    {"tour reproduction", tour_reproduction},
    {"ACO mechanics", aco_mechanics},
    {"hex-vs-square rapidity ordering", rapidity_ordering},
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hexroute acceptance suite"};
    int only = 0;
    app.add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (int n = 1; n <= 11; ++n) {
        if (only != 0 && n != only) continue;
        const Criterion& crit = kCriteria[n - 1];
        Check c;
        try {
            c = crit.run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.note(std::string("exception: ") + e.what());
        }
        std::printf("%s  criterion %2d: %s\n", c.ok ? "PASS" : "FAIL", n, crit.title);
        for (const std::string& s : c.notes) std::printf("        %s\n", s.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
