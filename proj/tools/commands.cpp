#include "commands.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace hexroute::cli {

namespace fs = std::filesystem;
using nlohmann::json;

TurnSpec ScenarioConfig::turn_spec() const
{
    const TurnSpec d = TurnSpec::defaults_for(size);
    return {min_turn_radius.value_or(d.min_turn_radius()), arrived_radius.value_or(d.arrived_radius())};
}

GeoPoint parse_point(const std::string& text)
{
    std::istringstream in(text);
    double lon = 0.0, lat = 0.0;
    char comma = 0;
    if (!(in >> lon >> comma >> lat) || comma != ',' || !(in >> std::ws).eof()) {
        throw invalid_input("point \"" + text + "\": expected lon,lat");
    }
    return {lon, lat};
}

GridMode parse_grid_mode(const std::string& text)
{
    if (text == "hex") return GridMode::kHex;
    if (text == "square4") return GridMode::kSquare4;
    if (text == "square8") return GridMode::kSquare8;
    throw invalid_input("grid: expected hex, square4 or square8, got \"" + text + "\"");
}

HeuristicMode parse_heuristic_mode(const std::string& text)
{
    if (text == "guided") return HeuristicMode::kGuided;
    if (text == "plain") return HeuristicMode::kPlain;
    throw invalid_input("heuristic: expected guided or plain, got \"" + text + "\"");
}

namespace {

const char* grid_name(GridMode m)
{
    switch (m) {
    case GridMode::kHex: return "hex";
    case GridMode::kSquare4: return "square4";
    case GridMode::kSquare8: return "square8";
    }
    return "?";
}

GeoPoint json_point(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw invalid_input(where + ": expected [lon, lat]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

double json_number(const json& j, const std::string& where)
{
    if (!j.is_number()) throw invalid_input(where + ": expected a number");
    return j.get<double>();
}

int json_int(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw invalid_input(where + ": expected an integer");
    return j.get<int>();
}

std::string json_string(const json& j, const std::string& where)
{
    if (!j.is_string()) throw invalid_input(where + ": expected a string");
    return j.get<std::string>();
}

void parse_aco(const json& j, AcoConfig& aco)
{
    if (!j.is_object()) throw invalid_input("aco: expected an object");
    for (const auto& [key, v] : j.items()) {
        const std::string where = "aco." + key;
        if (key == "alpha") {
            aco.alpha = json_number(v, where);
        } else if (key == "beta") {
            aco.beta = json_number(v, where);
        } else if (key == "ants") {
            aco.ants = json_int(v, where);
        } else if (key == "rho0") {
            aco.rho0 = json_number(v, where);
        } else if (key == "rho_min") {
            aco.rho_min = json_number(v, where);
        } else if (key == "stagnation_cycles") {
            aco.stagnation_cycles = json_int(v, where);
        } else if (key == "max_iterations") {
            aco.max_iterations = json_int(v, where);
        } else if (key == "max_restarts") {
            aco.max_restarts = json_int(v, where);
        } else if (key == "q_schedule") {
            if (!v.is_array() || v.size() != 3) throw invalid_input(where + ": expected three [T, Q] pairs");
            for (std::size_t k = 0; k < 3; ++k) {
                const std::string w = where + "[" + std::to_string(k) + "]";
                if (!v[k].is_array() || v[k].size() != 2) throw invalid_input(w + ": expected [T, Q]");
                aco.q_schedule[k] = {json_int(v[k][0], w + "[0]"), json_number(v[k][1], w + "[1]")};
            }
        } else {
            throw invalid_input(where + ": unknown field");
        }
    }
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() ? p : base / p; }

void write_file(const fs::path& path, const std::string& text) { io::write_text_file(path.string(), text); }

io::ChartFile load_chart(const ScenarioConfig& config)
{
    if (!config.chart) throw invalid_input("chart: no chart given (use --chart or the config file)");
    return io::read_chart(io::read_json_file(config.chart->string()));
}

BBox grid_extent(const ObstacleChart& chart) { return chart.bbox; }

void prepare_out(const ScenarioConfig& config)
{
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec) throw invalid_input("out: cannot create " + config.out.string() + " (" + ec.message() + ")");
}

template <class Model>
bool plan_on(const Model& model, const ObstacleChart& chart, const ScenarioConfig& config, std::ostream& log)
{
    if (!config.start) throw invalid_input("start: missing (use --start lon,lat)");
    if (!config.goal) throw invalid_input("goal: missing (use --goal lon,lat)");
    if (!chart.bbox.contains(*config.start)) throw invalid_input("start: outside the chart bbox");
    if (!chart.bbox.contains(*config.goal)) throw invalid_input("goal: outside the chart bbox");

    const PlanResult result = plan(model, SearchRequest{*config.start, *config.goal, config.grid, config.heuristic});
    if (!result.found()) {
        log << "no navigable path between start and goal (" << result.stats.extended_nodes
            << " cells explored)\n";
        return false;
    }
    const RawPath& raw = *result.path;
    const Route route = make_route(model, raw, config.turn_spec());
    const auto final_cells = final_path_cells(model, raw);
    const int hazards = potential_hazards(model, std::span<const OffsetCoord>(final_cells));

    json stats = io::write_stats(result.stats);
    stats["distance"] = route.total_distance;
    stats["waypoints"] = route.waypoints.size();
    stats["potential_hazards"] = hazards;
    stats["grid"] = grid_name(config.grid);
    write_file(config.out / "stats.json", io::dump(stats));
    write_file(config.out / "route.json",
               io::dump({{"raw_path", io::write_raw_path(raw)}, {"route", io::write_route(route)}}));

    svg::Canvas canvas(grid_extent(chart));
    svg::draw_model(canvas, model);
    svg::draw_obstacles(canvas, chart);
    std::vector<GeoPoint> centers;
    for (const OffsetCoord o : raw.cells) centers.push_back(model.center(model.index(o)));
    svg::draw_raw_path(canvas, centers);
    svg::draw_route(canvas, route);
    write_file(config.out / "route.svg", canvas.finish());

    log << std::left << std::setw(9) << "grid" << std::right << std::setw(10) << "distance" << std::setw(11)
        << "waypoints" << std::setw(11) << "traversed" << std::setw(10) << "extended" << std::setw(9) << "average"
        << std::setw(10) << "time_s" << std::setw(9) << "hazards" << std::setw(9) << "turning" << '\n';
    log << std::left << std::setw(9) << grid_name(config.grid) << std::right << std::fixed << std::setprecision(2)
        << std::setw(10) << route.total_distance << std::setw(11) << route.waypoints.size() << std::setw(11)
        << result.stats.traversed_times << std::setw(10) << result.stats.extended_nodes << std::setw(9)
        << result.stats.average_times() << std::setprecision(4) << std::setw(10) << result.stats.elapsed
        << std::setw(9) << hazards << std::setw(9) << result.stats.turning_times << '\n';
    log.unsetf(std::ios::floatfield);
    return true;
}

void report_tour(const TourResult& tour, const TaskNetwork& network, std::ostream& log)
{
    log << "order: " << network.labels().front();
    for (const std::size_t i : tour.order) log << " -> " << network.labels()[i];
    log << " -> " << network.labels().back() << '\n';
    std::ostringstream len;
    len << std::fixed << std::setprecision(2) << tour.length;
    log << "length: " << len.str() << " nmi (best found at iteration " << tour.iterations_to_best << ")\n";
}

template <class Model>
void tour_on(const Model& model, const ObstacleChart& chart, const ScenarioConfig& config, std::ostream& log)
{
    const std::optional<GeoPoint> target = config.target ? config.target : config.goal;
    if (!config.start) throw invalid_input("start: missing (use --start lon,lat)");
    if (!target) throw invalid_input("goal: missing tour end point (use --goal lon,lat)");
    if (config.tasks.empty()) throw invalid_input("tasks: need at least one task point");
    std::vector<GeoPoint> points{*config.start};
    points.insert(points.end(), config.tasks.begin(), config.tasks.end());
    points.push_back(*target);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!chart.bbox.contains(points[i])) throw invalid_input("point " + std::to_string(i) + ": outside the chart bbox");
    }

    PairRoutes routes;
    const TaskNetwork network = build_network(model, std::span<const GeoPoint>(points), config.turn_spec(),
                                              NetworkOptions{config.grid, config.heuristic}, &routes);
    for (std::size_t i = 0; i < network.node_count(); ++i) {
        for (std::size_t j = i + 1; j < network.node_count(); ++j) {
            if (!network.is_virtual_border(i, j) && !network.reachable(i, j)) {
                log << "unreachable pair: " << network.labels()[i] << " - " << network.labels()[j] << '\n';
            }
        }
    }
    write_file(config.out / "matrix.json", io::dump(io::write_matrix(network)));
    const TourResult tour = solve(network, config.aco);
    write_file(config.out / "tour.json", io::dump(io::write_tour(tour, network)));

    svg::Canvas canvas(grid_extent(chart));
    svg::draw_model(canvas, model);
    svg::draw_obstacles(canvas, chart);
    svg::draw_tour(canvas, tour, network, points, routes);
    write_file(config.out / "tour.svg", canvas.finish());
    report_tour(tour, network, log);
}

template <class F>
auto with_model(const ScenarioConfig& config, const ObstacleChart& chart, F&& f)
{
    if (config.grid == GridMode::kHex) return f(build(chart, config.size));
    return f(build_square(chart, equal_area_square_side(config.size)));
}

}  // namespace

ScenarioConfig parse_config(const json& j, const fs::path& base_dir)
{
    if (!j.is_object()) throw invalid_input("config: expected a JSON object");
    ScenarioConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "chart") {
            c.chart = resolve(json_string(v, key), base_dir);
        } else if (key == "matrix") {
            c.matrix = resolve(json_string(v, key), base_dir);
        } else if (key == "size") {
            c.size = json_number(v, key);
        } else if (key == "start") {
            c.start = json_point(v, key);
        } else if (key == "goal") {
            c.goal = json_point(v, key);
        } else if (key == "target") {
            c.target = json_point(v, key);
        } else if (key == "tasks") {
            if (!v.is_array()) throw invalid_input("tasks: expected an array of [lon, lat]");
            for (std::size_t i = 0; i < v.size(); ++i) c.tasks.push_back(json_point(v[i], "tasks[" + std::to_string(i) + "]"));
        } else if (key == "grid") {
            c.grid = parse_grid_mode(json_string(v, key));
        } else if (key == "heuristic") {
            c.heuristic = parse_heuristic_mode(json_string(v, key));
        } else if (key == "turn") {
            if (!v.is_object()) throw invalid_input("turn: expected an object");
            if (v.contains("min_turn_radius")) c.min_turn_radius = json_number(v.at("min_turn_radius"), "turn.min_turn_radius");
            if (v.contains("arrived_radius")) c.arrived_radius = json_number(v.at("arrived_radius"), "turn.arrived_radius");
        } else if (key == "aco") {
            parse_aco(v, c.aco);
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) throw invalid_input("seed: expected a non-negative integer");
            c.aco.seed = v.get<std::uint64_t>();
        } else if (key == "out") {
            c.out = json_string(v, key);
        } else {
            throw invalid_input(key + ": unknown config field");
        }
    }
    if (!(c.size > 0.0)) throw invalid_input("size: must be > 0");
    return c;
}

ScenarioConfig load_config(const fs::path& path)
{
    return parse_config(io::read_json_file(path.string()), path.parent_path());
}

void cmd_model(const ScenarioConfig& config, std::ostream& log)
{
    const io::ChartFile chart = load_chart(config);
    prepare_out(config);
    with_model(config, chart.chart, [&](const auto& model) {
        write_file(config.out / "model.json", io::dump(io::write_model(model)));
        svg::Canvas canvas(grid_extent(chart.chart));
        svg::draw_model(canvas, model);
        svg::draw_obstacles(canvas, chart.chart);
        write_file(config.out / "model.svg", canvas.finish());
        std::size_t blocked = 0;
        for (const Cell& c : model.cells()) blocked += c.navigable ? 0 : 1;
        log << grid_name(config.grid) << " model: " << model.cols() << " cols x " << model.rows() << " rows, "
            << blocked << " unnavigable cells\n";
    });
}

bool cmd_plan(const ScenarioConfig& config, std::ostream& log)
{
    const io::ChartFile chart = load_chart(config);
    prepare_out(config);
    return with_model(config, chart.chart, [&](const auto& model) { return plan_on(model, chart.chart, config, log); });
}

void cmd_tour(const ScenarioConfig& config, std::ostream& log)
{
    prepare_out(config);
    if (config.matrix) {
        const TaskNetwork network = io::read_matrix(io::read_json_file(config.matrix->string()));
        for (const auto& [i, j] : network.asymmetries()) {
            log << "note: matrix entry " << network.labels()[j] << "/" << network.labels()[i]
                << " differs from " << network.labels()[i] << "/" << network.labels()[j] << "; using the latter\n";
        }
        const TourResult tour = solve(network, config.aco);
        write_file(config.out / "tour.json", io::dump(io::write_tour(tour, network)));
        report_tour(tour, network, log);
        return;
    }
    const io::ChartFile chart = load_chart(config);
    with_model(config, chart.chart, [&](const auto& model) { tour_on(model, chart.chart, config, log); });
}

namespace {

struct Flags {
    std::string config, chart, matrix, start, goal, grid, heuristic, out;
    std::vector<std::string> tasks;
    std::optional<double> size;
    std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "Scenario JSON file");
    sub->add_option("--chart", f.chart, "Obstacle chart JSON file");
    sub->add_option("--size", f.size, "Hexagon side length in degrees");
    sub->add_option("--start", f.start, "Start point lon,lat");
    sub->add_option("--goal", f.goal, "Goal point lon,lat (tour end point for tour)");
    sub->add_option("--tasks", f.tasks, "Task points, each lon,lat");
    sub->add_option("--grid", f.grid, "hex, square4 or square8");
    sub->add_option("--heuristic", f.heuristic, "guided or plain");
    sub->add_option("--matrix", f.matrix, "Cost matrix JSON (tour only; skips charting)");
    sub->add_option("--seed", f.seed, "Random seed for the colony");
    sub->add_option("--out", f.out, "Output directory");
}

ScenarioConfig merge(const Flags& f, bool tour)
{
    ScenarioConfig c = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
    if (!f.chart.empty()) c.chart = f.chart;
    if (!f.matrix.empty()) c.matrix = f.matrix;
    if (f.size) {
        if (!(*f.size > 0.0)) throw invalid_input("size: must be > 0");
        c.size = *f.size;
    }
    if (!f.start.empty()) c.start = parse_point(f.start);
    if (!f.goal.empty()) {
        if (tour) {
            c.target = parse_point(f.goal);
        } else {
            c.goal = parse_point(f.goal);
        }
    }
    if (!f.tasks.empty()) {
        c.tasks.clear();
        for (const std::string& t : f.tasks) c.tasks.push_back(parse_point(t));
    }
    if (!f.grid.empty()) c.grid = parse_grid_mode(f.grid);
    if (!f.heuristic.empty()) c.heuristic = parse_heuristic_mode(f.heuristic);
    if (f.seed) c.aco.seed = *f.seed;
    if (!f.out.empty()) c.out = f.out;
    return c;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hexagonal-grid route planning for surface vehicles"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* model = app.add_subcommand("model", "Build the weighted grid model of a chart");
    CLI::App* plan_cmd = app.add_subcommand("plan", "Plan a route between two points");
    CLI::App* tour = app.add_subcommand("tour", "Plan a tour through several task points");
    for (CLI::App* sub : {model, plan_cmd, tour}) add_flags(sub, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_code(ErrorKind::kInvalidInput);
    }

    try {
        if (model->parsed()) {
            cmd_model(merge(flags, false), out);
        } else if (plan_cmd->parsed()) {
            if (!cmd_plan(merge(flags, false), out)) return exit_code(ErrorKind::kInfeasible);
        } else {
            cmd_tour(merge(flags, true), out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(ErrorKind::kInvalidInput);
    }
    return 0;
}

}  // namespace hexroute::cli
