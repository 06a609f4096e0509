#include "neurograph/experiments.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include "neurograph/error.hpp"
#include "neurograph/io.hpp"
#include "neurograph/parallel.hpp"
#include "neurograph/rng.hpp"

namespace neurograph {

namespace fs = std::filesystem;

namespace {

WeightMatrix fixed_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    WeightMatrix w(rows.size(), rows.size());
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) w(r, c++) = v;
        ++r;
    }
    return w;
}

// Scenario 4 layout constants.
constexpr int kLargeNetwork = 20;
constexpr double kConnectedFraction = 0.4;
constexpr double kExcitatoryFraction = 0.8;
constexpr double kExcitatoryWeight = 4.0;
constexpr double kInhibitoryWeight = -1.0;
constexpr std::uint64_t kLayoutStream = 0x5ce4a710c0ffee00ULL;

WeightMatrix random_sparse_matrix(std::uint64_t base_seed) {
    const int n = kLargeNetwork;
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j) pairs.emplace_back(j, i);

    Xoshiro256 rng(base_seed ^ kLayoutStream);
    for (std::size_t k = pairs.size() - 1; k > 0; --k) {
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(k + 1));
        std::swap(pairs[k], pairs[std::min(pick, k)]);
    }
    const auto connected = static_cast<std::size_t>(std::lround(kConnectedFraction * pairs.size()));
    const auto excitatory = static_cast<std::size_t>(std::lround(kExcitatoryFraction * connected));

    WeightMatrix w = WeightMatrix::Zero(n, n);
    for (std::size_t k = 0; k < connected; ++k)
        w(pairs[k].first, pairs[k].second) = k < excitatory ? kExcitatoryWeight : kInhibitoryWeight;
    return w;
}

std::string eps_label(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

}  // namespace

WeightMatrix scenario_matrix(int id, std::uint64_t base_seed) {
    switch (id) {
        case 1:
            return fixed_matrix({{0, 0, 1, 1, 1},
                                 {0, 0, 1, 1, 1},
                                 {1, 1, 0, 1, -4},
                                 {1, 1, 1, 0, -4},
                                 {1, 1, -4, -4, 0}});
        case 2:
            return fixed_matrix({{0, 0, 3, 3, 3},
                                 {0, 0, 3, 3, 3},
                                 {3, 3, 0, 3, -12},
                                 {3, 3, 3, 0, -12},
                                 {3, 3, -12, -12, 0}});
        case 3:
            return fixed_matrix({{0, 0, 3, 3, 3},
                                 {0, 0, 1, 1, 1},
                                 {3, 1, 0, 1, -12},
                                 {3, 1, 1, 0, -4},
                                 {3, 1, -12, -4, 0}});
        case 4:
            return random_sparse_matrix(base_seed);
        default:
            throw InputError("unknown scenario " + std::to_string(id) + " (expected 1..4)");
    }
}

ScenarioSpec make_scenario(int id, std::uint64_t base_seed) {
    ScenarioSpec spec;
    spec.id = id;
    spec.base_seed = base_seed;
    spec.weights = scenario_matrix(id, base_seed);
    return spec;
}

ScenarioSpec custom_scenario(WeightMatrix weights, std::uint64_t base_seed) {
    validate_weights(weights);
    ScenarioSpec spec;
    spec.id = 0;
    spec.base_seed = base_seed;
    spec.weights = std::move(weights);
    return spec;
}

double proportion_correct(const Adjacency& graph, const WeightMatrix& truth) {
    const auto n = truth.rows();
    if (graph.rows() != n || graph.cols() != n) throw InputError("graph size mismatch");
    if (n < 2) return 1.0;
    int correct = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && (graph(j, i) != 0) == (truth(j, i) != 0.0)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(n * (n - 1));
}

ReplicaResult run_replica(const ScenarioSpec& spec, int horizon, int replica) {
    ReplicaResult out;
    out.horizon = horizon;
    out.replica = replica;
    const int n = spec.n_neurons();

    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.memory_cap = spec.memory_cap;
    cfg.seed = spec.base_seed ^ static_cast<std::uint64_t>(replica);
    cfg.init_mode = spec.init_mode;
    const SpikeSample sample = simulate(spec.weights, cfg);

    try {
        if (spec.select) {
            const GraphSelection graph = select_graph(sample, spec.fit);
            out.estimate = graph.weights;
            out.sensitivities = graph.sensitivities;
            out.optimizer_warnings = graph.optimizer_warnings();
            for (double eps : spec.epsilons) {
                out.graphs.push_back(threshold_graph(graph.sensitivities, eps));
                out.proportion_correct.push_back(proportion_correct(out.graphs.back(), spec.weights));
            }
        } else {
            const NetworkFit fit = fit_network(sample, spec.fit);
            out.estimate = fit.weights;
            for (const auto& f : fit.fits)
                if (!f.converged || f.hit_bound) ++out.optimizer_warnings;
        }
    } catch (const NumericalError& e) {
        out.failed = true;
        out.failure = e.what();
        out.estimate = WeightMatrix::Constant(n, n, std::nan(""));
        return out;
    }
    out.squared_errors = (out.estimate - spec.weights).array().square();
    out.frobenius = (out.estimate - spec.weights).norm();
    return out;
}

const HorizonMetrics& MetricsReport::at(int horizon) const {
    for (const auto& h : by_horizon)
        if (h.horizon == horizon) return h;
    throw InputError("no metrics for T = " + std::to_string(horizon));
}

MetricsReport monte_carlo(const ScenarioSpec& spec, unsigned workers, const ProgressFn& progress) {
    validate_weights(spec.weights);
    if (spec.replicas < 1) throw InputError("replicas must be >= 1");
    const int n = spec.n_neurons();
    const auto n_eps = spec.epsilons.size();

    MetricsReport report;
    report.scenario = spec.id;
    report.truth = spec.weights;
    report.epsilons = spec.epsilons;

    for (int horizon : spec.horizons) {
        std::vector<ReplicaResult> results(spec.replicas);
        std::atomic<int> done{0};
        parallel_for(static_cast<std::size_t>(spec.replicas), workers, [&](std::size_t r) {
            results[r] = run_replica(spec, horizon, static_cast<int>(r));
            const int d = ++done;
            if (progress) progress(horizon, d, spec.replicas);
        });

        HorizonMetrics m;
        m.horizon = horizon;
        m.mse = Eigen::MatrixXd::Zero(n, n);
        m.proportion_correct.assign(n_eps, 0.0);
        m.selection_frequency.assign(n_eps, Eigen::MatrixXd::Zero(n, n));
        for (const auto& r : results) {
            m.optimizer_warnings += r.optimizer_warnings;
            if (r.failed) {
                ++m.failed_replicas;
                continue;
            }
            ++m.replicas_used;
            m.mse += r.squared_errors;
            m.mean_frobenius += r.frobenius;
            for (std::size_t e = 0; e < r.graphs.size(); ++e) {
                m.proportion_correct[e] += r.proportion_correct[e];
                m.selection_frequency[e] += r.graphs[e].cast<double>();
            }
        }
        if (m.replicas_used > 0) {
            const double used = m.replicas_used;
            m.mse /= used;
            m.mean_frobenius /= used;
            for (auto& p : m.proportion_correct) p /= used;
            for (auto& f : m.selection_frequency) f /= used;
        }
        if (!spec.select) {
            m.proportion_correct.clear();
            m.selection_frequency.clear();
        }
        report.by_horizon.push_back(std::move(m));
        for (auto& r : results) report.replicas.push_back(std::move(r));
    }
    return report;
}

std::vector<fs::path> write_report(const MetricsReport& report, const fs::path& dir) {
    fs::create_directories(dir);
    std::vector<fs::path> written;
    const auto n = report.truth.rows();
    const bool small = report.scenario >= 1 && report.scenario <= 3;
    const int id = report.scenario;

    auto open = [&](const std::string& name) {
        written.push_back(dir / name);
        std::ofstream out(written.back());
        if (!out) throw InputError("cannot write " + written.back().string());
        return out;
    };
    auto header_horizons = [&](std::ofstream& out) {
        for (const auto& h : report.by_horizon) out << ",T=" << h.horizon;
        out << '\n';
    };

    // Per-weight MSE for the 5-neuron scenarios, distance table otherwise.
    if (small || id == 0) {
        auto out = open(id == 0 ? "mse.csv" : "table" + std::to_string(id) + ".csv");
        out << "weight,value";
        header_horizons(out);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                out << "w_" << j + 1 << "->" << i + 1 << ',' << format_double(report.truth(j, i));
                for (const auto& h : report.by_horizon) out << ',' << format_double(h.mse(j, i));
                out << '\n';
            }
    }
    if (id == 4) {
        auto out = open("table4.csv");
        out << "matrix";
        header_horizons(out);
        out << "W";
        for (const auto& h : report.by_horizon) out << ',' << format_double(h.mean_frobenius);
        out << '\n';
    }
    {
        auto out = open("distance.csv");
        out << "T,mean_frobenius,replicas_used,failed_replicas,optimizer_warnings\n";
        for (const auto& h : report.by_horizon)
            out << h.horizon << ',' << format_double(h.mean_frobenius) << ',' << h.replicas_used
                << ',' << h.failed_replicas << ',' << h.optimizer_warnings << '\n';
    }

    const bool has_selection =
        !report.by_horizon.empty() && !report.by_horizon.front().proportion_correct.empty();
    if (has_selection) {
        const std::string name =
            id == 4 ? "table9.csv" : (small ? "table" + std::to_string(5 + id) + ".csv" : "selection.csv");
        auto out = open(name);
        out << "epsilon";
        header_horizons(out);
        for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
            out << eps_label(report.epsilons[e]);
            for (const auto& h : report.by_horizon) out << ',' << format_double(h.proportion_correct[e]);
            out << '\n';
        }

        auto freq = open("selection_frequency.csv");
        freq << "T,epsilon,pre,post,true_weight,frequency\n";
        for (const auto& h : report.by_horizon)
            for (std::size_t e = 0; e < report.epsilons.size(); ++e)
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j) {
                        if (i == j) continue;
                        freq << h.horizon << ',' << eps_label(report.epsilons[e]) << ',' << j + 1
                             << ',' << i + 1 << ',' << format_double(report.truth(j, i)) << ','
                             << format_double(h.selection_frequency[e](j, i)) << '\n';
                    }
    }

    {
        auto out = open("replicas.csv");
        out << "T,replica,failed,optimizer_warnings,frobenius\n";
        for (const auto& r : report.replicas)
            out << r.horizon << ',' << r.replica << ',' << (r.failed ? 1 : 0) << ','
                << r.optimizer_warnings << ',' << format_double(r.frobenius) << '\n';
    }
    written.push_back(dir / "weights_true.csv");
    write_matrix_csv(report.truth, written.back());
    return written;
}

}  // namespace neurograph
