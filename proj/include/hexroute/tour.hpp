#pragma once

// Visiting order for multiple task points. Nodes are ordered
// [start, task 1 .. task n, target]; ants always leave the start and finish
// at the target, which closes the loop through a zero-cost virtual border
// between target and start.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hexroute/error.hpp"
#include "hexroute/geometry.hpp"
#include "hexroute/search.hpp"
#include "hexroute/smoothing.hpp"

namespace hexroute {

class TaskNetwork {
public:
    TaskNetwork() = default;

    /// `cost[i][j]` in nautical miles; nullopt marks an unreachable pair. The
    /// start/target entry is the virtual border and is ignored. Only the upper
    /// triangle is read; it is mirrored into the lower one.
    TaskNetwork(std::vector<std::string> labels, const std::vector<std::vector<std::optional<double>>>& cost)
        : labels_(std::move(labels))
    {
        const std::size_t n = labels_.size();
        if (n < 3) throw invalid_input("network needs a start, at least one task point and a target");
        if (cost.size() != n) throw invalid_input("matrix: row count does not match labels");
        cost_.assign(n, std::vector<double>(n, 0.0));
        reachable_.assign(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) {
            if (cost[i].size() != n) throw invalid_input("matrix: row " + std::to_string(i) + " has wrong length");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (is_virtual_border(i, j)) continue;
                const auto& c = cost[i][j];
                if (!c) continue;
                if (!std::isfinite(*c) || !(*c > 0.0)) {
                    throw invalid_input("matrix[" + std::to_string(i) + "][" + std::to_string(j) +
                                        "]: cost must be positive and finite");
                }
                cost_[i][j] = cost_[j][i] = *c;
                reachable_[i][j] = reachable_[j][i] = true;
                const auto& mirrored = cost[j][i];
                if (mirrored.has_value() != c.has_value() || (mirrored && *mirrored != *c)) {
                    asymmetries_.emplace_back(i, j);
                }
            }
        }
    }

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t task_count() const noexcept { return labels_.size() - 2; }
    std::size_t start() const noexcept { return 0; }
    std::size_t target() const noexcept { return labels_.size() - 1; }

    bool is_virtual_border(std::size_t i, std::size_t j) const noexcept
    {
        return (i == start() && j == target()) || (i == target() && j == start());
    }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    double cost(std::size_t i, std::size_t j) const { return cost_.at(i).at(j); }
    bool reachable(std::size_t i, std::size_t j) const { return reachable_.at(i).at(j); }

    /// Pairs (i < j) whose lower-triangle entry disagreed with the upper one.
    const std::vector<std::pair<std::size_t, std::size_t>>& asymmetries() const noexcept { return asymmetries_; }

    /// Task points with no reachable partner at all.
    std::vector<std::size_t> isolated() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < node_count(); ++i) {
            bool any = false;
            for (std::size_t j = 0; j < node_count(); ++j) any = any || reachable_[i][j];
            if (!any) out.push_back(i);
        }
        return out;
    }

    /// Length of start -> order... -> target.
    double tour_length(std::span<const std::size_t> order) const
    {
        double total = 0.0;
        std::size_t at = start();
        for (const std::size_t next : order) {
            total += cost_[at][next];
            at = next;
        }
        return total + cost_[at][target()];
    }

    bool tour_feasible(std::span<const std::size_t> order) const
    {
        std::size_t at = start();
        for (const std::size_t next : order) {
            if (!reachable_[at][next]) return false;
            at = next;
        }
        return reachable_[at][target()];
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<double>> cost_;
    std::vector<std::vector<bool>> reachable_;
    std::vector<std::pair<std::size_t, std::size_t>> asymmetries_;
};

inline std::vector<std::string> default_labels(std::size_t task_count)
{
    std::vector<std::string> labels{"S0"};
    for (std::size_t i = 1; i <= task_count; ++i) labels.push_back(std::to_string(i));
    labels.emplace_back("G0");
    return labels;
}

struct NetworkOptions {
    GridMode grid_mode = GridMode::kHex;
    HeuristicMode heuristic_mode = HeuristicMode::kGuided;
};

using PairRoutes = std::map<std::pair<std::size_t, std::size_t>, Route>;

/// Pairwise smoothed route distances between [start, tasks..., target].
template <PlanningGrid G>
TaskNetwork build_network(const G& grid, std::span<const GeoPoint> points, const TurnSpec& turn,
                          const NetworkOptions& options = {}, PairRoutes* routes = nullptr)
{
    if (points.size() < 3) throw invalid_input("tasks: need a start, at least one task point and a target");
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = grid.locate(points[i]);
        if (!c || !grid.navigable(*c)) {
            throw invalid_input("point " + std::to_string(i) + " is off the map or unnavigable");
        }
        cells.push_back(*c);
    }
    const std::size_t n = points.size();
    std::vector<std::vector<std::optional<double>>> cost(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const PlanResult r = plan_cells(grid, cells[i], cells[j], options.grid_mode, options.heuristic_mode);
            if (!r.found()) continue;
            Route route = make_route(grid, *r.path, turn);
            // Two points in the same cell still get a positive, tiny distance.
            cost[i][j] = cost[j][i] = std::max(route.total_distance, 1e-9);
            if (routes) routes->emplace(std::pair{i, j}, std::move(route));
        }
    }
    return TaskNetwork(default_labels(n - 2), cost);
}

struct QStage {
    int until = 0;           // last iteration using this intensity
    double intensity = 0.0;  // Q
};

struct AcoConfig {
    double alpha = 1.0;
    double beta = 5.0;
    int ants = 0;  // 0 = one ant per node
    double rho0 = 0.5;
    double rho_min = 0.1;
    int stagnation_cycles = 20;
    std::array<QStage, 3> q_schedule{{{50, 100.0}, {150, 50.0}, {300, 25.0}}};
    int max_iterations = 500;
    std::uint64_t seed = 1;
    int max_restarts = 1000;  // per ant per cycle

    void validate() const
    {
        if (!(alpha >= 0.0) || !(beta >= 0.0)) throw invalid_input("aco: alpha and beta must be >= 0");
        if (ants < 0) throw invalid_input("aco: ants must be >= 1 (or 0 for one per node)");
        if (!(rho_min > 0.0) || !(rho_min <= rho0) || !(rho0 <= 1.0)) {
            throw invalid_input("aco: need 0 < rho_min <= rho0 <= 1");
        }
        if (stagnation_cycles < 1) throw invalid_input("aco: stagnation_cycles must be >= 1");
        for (const QStage& s : q_schedule) {
            if (!(s.intensity > 0.0)) throw invalid_input("aco: Q values must be > 0");
        }
        if (!(q_schedule[0].until < q_schedule[1].until && q_schedule[1].until < q_schedule[2].until)) {
            throw invalid_input("aco: Q thresholds must satisfy T1 < T2 < T3");
        }
        if (max_iterations < 1) throw invalid_input("aco: max_iterations must be >= 1");
        if (max_restarts < 1) throw invalid_input("aco: max_restarts must be >= 1");
    }
};

/// Pheromone intensity Q(t), holding Q3 past T3.
inline double pheromone_intensity(int t, const AcoConfig& config)
{
    for (const QStage& s : config.q_schedule) {
        if (t <= s.until) return s.intensity;
    }
    return config.q_schedule.back().intensity;
}

inline constexpr double kTauFloor = std::numeric_limits<double>::min();

struct PheromoneState {
    std::vector<std::vector<double>> tau;
    double rho = 0.5;
    std::vector<std::size_t> best_order;
    double best_length = std::numeric_limits<double>::infinity();
    int best_iteration = -1;
    int iteration = 0;
    int stagnation = 0;  // cycles since the incumbent last improved
    std::vector<double> history;    // incumbent length after each cycle
    std::vector<double> rho_trace;  // rho after each cycle

    static PheromoneState initial(const TaskNetwork& network, const AcoConfig& config)
    {
        PheromoneState s;
        const std::size_t n = network.node_count();
        s.tau.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && network.reachable(i, j)) s.tau[i][j] = 1.0;
            }
        }
        s.rho = config.rho0;
        return s;
    }
};

/// Transition probabilities over `allowed`, evaluated in log space. Returns nullopt when no
/// allowed node is reachable from `current` (a dead end).
inline std::optional<std::vector<double>> transition_probabilities(const TaskNetwork& network,
                                                                   const PheromoneState& state,
                                                                   const AcoConfig& config, std::size_t current,
                                                                   std::span<const std::size_t> allowed)
{
    std::vector<double> logw(allowed.size(), -std::numeric_limits<double>::infinity());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < allowed.size(); ++k) {
        const std::size_t j = allowed[k];
        if (!network.reachable(current, j)) continue;
        const double eta = 1.0 / network.cost(current, j);
        logw[k] = config.alpha * std::log(state.tau[current][j]) + config.beta * std::log(eta);
        top = std::max(top, logw[k]);
    }
    if (!std::isfinite(top)) return std::nullopt;
    std::vector<double> p(allowed.size(), 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < allowed.size(); ++k) {
        if (std::isfinite(logw[k])) {
            p[k] = std::exp(logw[k] - top);
            sum += p[k];
        }
    }
    for (double& v : p) v /= sum;
    return p;
}

struct AntTour {
    std::vector<std::size_t> order;  // task nodes in visiting order
    double length = 0.0;
};

/// Evaporate every edge by (1 - rho) and deposit Q(t) / L_k on each
/// edge of each ant's tour, symmetrically. The virtual border carries no pheromone.
inline void deposit_and_evaporate(PheromoneState& state, std::span<const AntTour> tours, const TaskNetwork& network,
                                  const AcoConfig& config)
{
    const std::size_t n = network.node_count();
    std::vector<std::vector<double>> delta(n, std::vector<double>(n, 0.0));
    const double q = pheromone_intensity(state.iteration, config);
    for (const AntTour& tour : tours) {
        const double amount = q / tour.length;
        std::size_t at = network.start();
        auto lay = [&](std::size_t a, std::size_t b) {
            delta[a][b] += amount;
            delta[b][a] += amount;
        };
        for (const std::size_t next : tour.order) {
            lay(at, next);
            at = next;
        }
        lay(at, network.target());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !network.reachable(i, j)) continue;
            state.tau[i][j] = std::max(kTauFloor, (1.0 - state.rho) * state.tau[i][j] + delta[i][j]);
        }
    }
}

/// After `stagnation_cycles` cycles without improvement,
/// rho <- max(0.98 rho, rho_min) and the counter restarts.
inline void adapt_rho(PheromoneState& state, const AcoConfig& config, bool improved)
{
    if (improved) {
        state.stagnation = 0;
        return;
    }
    if (++state.stagnation >= config.stagnation_cycles) {
        state.rho = std::max(0.98 * state.rho, config.rho_min);
        state.stagnation = 0;
    }
}

struct TourResult {
    std::vector<std::size_t> order;
    double length = 0.0;
    int iterations_to_best = 0;
    int iterations = 0;
    bool converged = false;  // incumbent unchanged over the final stagnation window
    long restarts = 0;       // dead-end tours that were rebuilt
    std::vector<double> history;
    std::vector<double> rho_trace;
};

/// Observer hooks for solve(); both are optional.
///   on_step(current, allowed, probabilities)
///   on_cycle(const PheromoneState&)
struct NoObserver {};

namespace detail {

/// Uniform double in [0, 1) with a platform-independent mapping.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class Observer>
std::optional<AntTour> construct_tour(const TaskNetwork& network, const PheromoneState& state,
                                      const AcoConfig& config, std::mt19937_64& rng, Observer& observer)
{
    std::vector<std::size_t> allowed(network.task_count());
    std::iota(allowed.begin(), allowed.end(), std::size_t{1});
    AntTour tour;
    std::size_t at = network.start();
    while (!allowed.empty()) {
        const auto p = transition_probabilities(network, state, config, at, allowed);
        if (!p) return std::nullopt;
        if constexpr (requires { observer.on_step(at, std::span<const std::size_t>(allowed), std::span<const double>(*p)); }) {
            observer.on_step(at, std::span<const std::size_t>(allowed), std::span<const double>(*p));
        }
        const double u = unit_uniform(rng);
        double acc = 0.0;
        std::size_t pick = allowed.size();
        std::size_t last_positive = allowed.size();
        for (std::size_t k = 0; k < allowed.size(); ++k) {
            if ((*p)[k] <= 0.0) continue;
            last_positive = k;
            acc += (*p)[k];
            if (u < acc) {
                pick = k;
                break;
            }
        }
        if (pick == allowed.size()) pick = last_positive;
        at = allowed[pick];
        tour.order.push_back(at);
        allowed.erase(allowed.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    if (!network.reachable(at, network.target())) return std::nullopt;
    tour.length = network.tour_length(tour.order);
    return tour;
}

}  // namespace detail

/// Improved ACO with time-varying pheromone intensity and adaptive evaporation.
template <class Observer = NoObserver>
TourResult solve(const TaskNetwork& network, const AcoConfig& config, Observer&& observer = {})
{
    config.validate();
    if (network.task_count() < 1) throw invalid_input("network has no task points");
    if (const auto iso = network.isolated(); !iso.empty()) {
        throw infeasible("node " + network.labels()[iso.front()] + " is unreachable from every other node");
    }

    const int ants = config.ants > 0 ? config.ants : static_cast<int>(network.node_count());
    std::mt19937_64 rng(config.seed);
    PheromoneState state = PheromoneState::initial(network, config);
    TourResult result;

    for (int t = 0; t < config.max_iterations; ++t) {
        state.iteration = t;
        std::vector<AntTour> tours;
        tours.reserve(static_cast<std::size_t>(ants));
        for (int k = 0; k < ants; ++k) {
            std::optional<AntTour> tour;
            for (int attempt = 0; attempt <= config.max_restarts && !tour; ++attempt) {
                tour = detail::construct_tour(network, state, config, rng, observer);
                if (!tour) ++result.restarts;
            }
            if (!tour) throw infeasible("no ant completed a tour; the task network is not traversable");
            tours.push_back(std::move(*tour));
        }

        bool improved = false;
        for (const AntTour& tour : tours) {
            if (tour.length < state.best_length) {
                state.best_length = tour.length;
                state.best_order = tour.order;
                state.best_iteration = t;
                improved = true;
            }
        }
        deposit_and_evaporate(state, tours, network, config);
        adapt_rho(state, config, improved);
        state.history.push_back(state.best_length);
        state.rho_trace.push_back(state.rho);
        if constexpr (requires { observer.on_cycle(state); }) observer.on_cycle(state);
    }

    result.order = state.best_order;
    result.length = state.best_length;
    result.iterations_to_best = state.best_iteration;
    result.iterations = config.max_iterations;
    result.converged = config.max_iterations - 1 - state.best_iteration >= config.stagnation_cycles;
    result.history = std::move(state.history);
    result.rho_trace = std::move(state.rho_trace);
    return result;
}

/// Exact optimum by enumerating task orders lexicographically; the first
/// strictly shortest order wins ties.
inline TourResult brute_force(const TaskNetwork& network, std::size_t max_tasks = 11)
{
    const std::size_t n = network.task_count();
    if (n < 1) throw invalid_input("network has no task points");
    if (n > max_tasks) {
        throw capacity_exceeded("brute force limited to " + std::to_string(max_tasks) + " task points, got " +
                                std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{1});
    TourResult best;
    best.length = std::numeric_limits<double>::infinity();
    do {
        if (!network.tour_feasible(order)) continue;
        const double len = network.tour_length(order);
        if (len < best.length) {
            best.length = len;
            best.order = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    if (best.order.empty()) throw infeasible("no order visits every task point");
    best.converged = true;
    return best;
}

}  // namespace hexroute
