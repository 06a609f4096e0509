#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "neurograph/estimator.hpp"
#include "neurograph/selection.hpp"
#include "neurograph/simulator.hpp"

namespace neurograph {

inline constexpr std::uint64_t kDefaultBaseSeed = 20240917;

struct ScenarioSpec {
    int id = 0;  // 1..4 for the built-in scenarios, 0 for custom matrices
    WeightMatrix weights;
    std::vector<int> horizons{500, 1000, 5000, 10000};
    std::vector<double> epsilons{1e-5, 1e-4, 1e-3, 1e-2};
    int replicas = 100;
    int memory_cap = 50;
    std::uint64_t base_seed = kDefaultBaseSeed;
    InitMode init_mode = InitMode::AllSpikeAtZero;
    FitOptions fit{};
    bool select = true;  // run the neighborhood selection as well as the fit

    int n_neurons() const { return static_cast<int>(weights.rows()); }
};

/// Scenarios 1-3: fixed 5x5 matrices. Scenario 4: 20x20 with 152 of the 380
/// off-diagonal entries connected, 122 of weight +4 and 30 of weight -1, at
/// positions drawn from base_seed.
WeightMatrix scenario_matrix(int id, std::uint64_t base_seed = kDefaultBaseSeed);
ScenarioSpec make_scenario(int id, std::uint64_t base_seed = kDefaultBaseSeed);
ScenarioSpec custom_scenario(WeightMatrix weights, std::uint64_t base_seed = kDefaultBaseSeed);

struct ReplicaResult {
    int horizon = 0;
    int replica = 0;
    bool failed = false;
    std::string failure;
    WeightMatrix estimate;
    Eigen::MatrixXd squared_errors;
    double frobenius = 0.0;
    Eigen::MatrixXd sensitivities;            // empty unless spec.select
    std::vector<Adjacency> graphs;            // one per epsilon
    std::vector<double> proportion_correct;   // one per epsilon
    int optimizer_warnings = 0;
};

/// Simulates with stream (base_seed, replica), fits the network and, when
/// requested, thresholds the sensitivities at every epsilon. Deterministic in
/// (spec, horizon, replica). Optimizer failures are recorded, not thrown.
ReplicaResult run_replica(const ScenarioSpec& spec, int horizon, int replica);

/// Fraction of ordered pairs j != i whose selected/absent status matches truth.
double proportion_correct(const Adjacency& graph, const WeightMatrix& truth);

struct HorizonMetrics {
    int horizon = 0;
    int replicas_used = 0;
    int failed_replicas = 0;
    int optimizer_warnings = 0;
    Eigen::MatrixXd mse;  // (j, i) = mean squared error of w_{j->i}
    double mean_frobenius = 0.0;
    std::vector<double> proportion_correct;              // per epsilon
    std::vector<Eigen::MatrixXd> selection_frequency;    // per epsilon, (j, i)
};

struct MetricsReport {
    int scenario = 0;
    WeightMatrix truth;
    std::vector<double> epsilons;
    std::vector<HorizonMetrics> by_horizon;
    std::vector<ReplicaResult> replicas;  // horizon-major

    const HorizonMetrics& at(int horizon) const;
};

using ProgressFn = std::function<void(int horizon, int done, int total)>;

MetricsReport monte_carlo(const ScenarioSpec& spec, unsigned workers = 1,
                          const ProgressFn& progress = {});

/// Writes the table CSVs (MSE or distance table, selection table, distance
/// curve, per-pair selection frequencies, per-replica log, true matrix).
/// Returns the paths written.
std::vector<std::filesystem::path> write_report(const MetricsReport& report,
                                                const std::filesystem::path& dir);

}  // namespace neurograph
