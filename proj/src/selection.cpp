#include "neurograph/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "neurograph/error.hpp"
#include "neurograph/parallel.hpp"

namespace neurograph {

namespace {

void check_fit_matches(const FitResult& fit, int neuron, const NeuronMask& subset) {
    if (fit.neuron != neuron) throw InputError("fit belongs to a different neuron");
    if (subset.size() != fit.weights.size() || fit.support.size() != subset.size())
        throw InputError("subset size does not match the fit");
    for (Eigen::Index j = 0; j < subset.size(); ++j) {
        const bool expected = subset(j) && j != neuron;
        if (fit.support(j) != expected)
            throw InputError("fit was not produced on presynaptic subset (coordinate " +
                             std::to_string(j) + ")");
        if (!expected && fit.weights(j) != 0.0)
            throw InputError("fit has a nonzero weight outside the subset");
    }
}

// (1/T) sum over gated rows of (phi(z.a) - phi(z.b))^2; reset rows add zero.
double design_sensitivity(const Design& design, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta_a = design.z * a;
    const Eigen::VectorXd eta_b = design.z * b;
    double total = 0.0;
    for (Eigen::Index r = 0; r < eta_a.size(); ++r) {
        const double diff = logistic(eta_a(r)) - logistic(eta_b(r));
        total += design.trials(r) * diff * diff;
    }
    return total / design.horizon;
}

}  // namespace

PredictedProbVector predicted_probabilities(const FeatureTable& features,
                                            const NeuronMask& subset, const FitResult& fit) {
    check_fit_matches(fit, features.neuron, subset);
    PredictedProbVector out{features.neuron, subset, Eigen::VectorXd(features.horizon())};
    const Eigen::VectorXd eta = features.z * fit.weights;
    for (int t = 0; t < features.horizon(); ++t)
        out.probs(t) = features.gate(t) ? logistic(eta(t)) : 0.5;
    return out;
}

PredictedProbVector predicted_probabilities(const SpikeSample& sample, int neuron,
                                            const NeuronMask& subset, const FitResult& fit) {
    return predicted_probabilities(build_features(sample, neuron), subset, fit);
}

double sensitivity(const PredictedProbVector& reduced, const PredictedProbVector& full) {
    if (reduced.probs.size() != full.probs.size())
        throw InputError("predicted probability vectors differ in length");
    if (reduced.neuron != full.neuron)
        throw InputError("predicted probability vectors belong to different neurons");
    if (full.probs.size() == 0) throw InputError("empty predicted probability vectors");
    return (reduced.probs - full.probs).squaredNorm() / static_cast<double>(full.probs.size());
}

NeuronSelection select_neuron(const Design& design, const FitOptions& opts) {
    const int n = design.n_neurons();
    const int self = design.neuron;
    NeuronSelection sel;
    sel.full = fit_neuron(design, opts);
    sel.reduced.resize(n);
    sel.sensitivities = Eigen::VectorXd::Zero(n);
    sel.lrt = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (j == self) continue;
        NeuronMask support = sel.full.support;
        support(j) = false;
        Eigen::VectorXd start = sel.full.weights;
        start(j) = 0.0;
        try {
            sel.reduced[j] = fit_neuron(design, opts, support, &start);
        } catch (const OptimizerError& e) {
            throw OptimizerError(std::string(e.what()) + " (leave-out pair " + std::to_string(j) +
                                 " -> " + std::to_string(self) + ")");
        }
        sel.sensitivities(j) =
            design_sensitivity(design, sel.reduced[j].weights, sel.full.weights);
        sel.lrt(j) = lrt_statistic(sel.full, sel.reduced[j], design.horizon);
    }
    return sel;
}

NeighborhoodEstimate threshold_neighborhood(const NeuronSelection& sel, int neuron,
                                            double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    NeighborhoodEstimate est{neuron, epsilon, {}, sel.sensitivities};
    for (Eigen::Index j = 0; j < sel.sensitivities.size(); ++j)
        if (j != neuron && sel.sensitivities(j) > epsilon) est.selected.push_back(static_cast<int>(j));
    return est;
}

NeighborhoodEstimate estimate_neighborhood(const SpikeSample& sample, int neuron, double epsilon,
                                           const FitOptions& opts) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    const Design design = compress(build_features(sample, neuron));
    return threshold_neighborhood(select_neuron(design, opts), neuron, epsilon);
}

int GraphSelection::optimizer_warnings() const {
    int count = 0;
    for (const auto& sel : neurons) {
        if (!sel.full.converged || sel.full.hit_bound) ++count;
        for (std::size_t j = 0; j < sel.reduced.size(); ++j) {
            if (static_cast<int>(j) == sel.full.neuron) continue;
            if (!sel.reduced[j].converged || sel.reduced[j].hit_bound) ++count;
        }
    }
    return count;
}

GraphSelection select_graph(const SpikeSample& sample, const FitOptions& opts, unsigned workers) {
    const int n = sample.n_neurons();
    GraphSelection graph;
    graph.neurons.resize(n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
        const Design design = compress(build_features(sample, static_cast<int>(i)));
        graph.neurons[i] = select_neuron(design, opts);
    });
    graph.weights = WeightMatrix::Zero(n, n);
    graph.sensitivities = Eigen::MatrixXd::Zero(n, n);
    graph.lrt = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        graph.weights.col(i) = graph.neurons[i].full.weights;
        graph.sensitivities.col(i) = graph.neurons[i].sensitivities;
        graph.lrt.col(i) = graph.neurons[i].lrt;
    }
    return graph;
}

Adjacency threshold_graph(const Eigen::MatrixXd& sensitivities, double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    Adjacency adj = (sensitivities.array() > epsilon).cast<std::uint8_t>();
    adj.diagonal().setZero();
    return adj;
}

double lrt_statistic(const FitResult& full, const FitResult& reduced, int horizon) {
    if (full.neuron != reduced.neuron) throw InputError("fits belong to different neurons");
    return std::max(0.0, 2.0 * horizon * (full.log_lik - reduced.log_lik));
}

double lrt_statistic(const SpikeSample& sample, int neuron, int candidate,
                     const FitOptions& opts) {
    if (candidate < 0 || candidate >= sample.n_neurons() || candidate == neuron)
        throw InputError("candidate must be another neuron of the sample");
    const Design design = compress(build_features(sample, neuron));
    const FitResult full = fit_neuron(design, opts);
    NeuronMask support = full.support;
    support(candidate) = false;
    Eigen::VectorXd start = full.weights;
    start(candidate) = 0.0;
    const FitResult reduced = fit_neuron(design, opts, support, &start);
    return lrt_statistic(full, reduced, design.horizon);
}

double chi_square1_upper_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    // P(X > x) = erfc(sqrt(x / 2)); solve erfc(y) = alpha for y, return 2 y^2.
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (std::erfc(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    const double y = 0.5 * (lo + hi);
    return 2.0 * y * y;
}

double epsilon_from_alpha(double alpha, int horizon) {
    if (horizon < 1) throw InputError("T must be >= 1");
    return chi_square1_upper_quantile(alpha) / (2.0 * horizon);
}

std::optional<double> theoretical_margin(const Eigen::VectorXd& column) {
    double negative = 0.0, positive = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < column.size(); ++j) {
        const double w = column(j);
        if (w == 0.0) continue;
        if (w < 0.0)
            negative += w;
        else
            positive += w;
        smallest = std::min(smallest, std::abs(w));
    }
    if (!std::isfinite(smallest)) return std::nullopt;
    // phi' decreases in |u|, so the infimum sits at the wider end of D_i.
    const double edge = std::max(-negative, positive);
    return logistic_derivative(edge) * smallest;
}

}  // namespace neurograph
