#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "neurograph/estimator.hpp"

namespace neurograph {

/// Predicted spiking probabilities of neuron i for t = 1..T using only the
/// presynaptic neurons in `subset`.
struct PredictedProbVector {
    int neuron = 0;
    NeuronMask subset;
    Eigen::VectorXd probs;
};

/// `fit` must come from a fit of neuron i whose free coordinates are exactly
/// `subset` minus i; anything else is an InputError.
PredictedProbVector predicted_probabilities(const FeatureTable& features,
                                            const NeuronMask& subset, const FitResult& fit);
PredictedProbVector predicted_probabilities(const SpikeSample& sample, int neuron,
                                            const NeuronMask& subset, const FitResult& fit);

/// d = (1/T) sum_t (p_F[t] - p_I[t])^2
double sensitivity(const PredictedProbVector& reduced, const PredictedProbVector& full);

/// Full fit, leave-one-out refits and their sensitivities for one neuron.
struct NeuronSelection {
    FitResult full;
    std::vector<FitResult> reduced;  // reduced[j]: coordinate j held at zero; reduced[i] unused
    Eigen::VectorXd sensitivities;   // d for each candidate j, 0 at i
    Eigen::VectorXd lrt;             // 2T (l_full - l_reduced), clamped at 0
};

NeuronSelection select_neuron(const Design& design, const FitOptions& opts = {});

struct NeighborhoodEstimate {
    int neuron = 0;
    double epsilon = 0.0;
    std::vector<int> selected;      // ascending
    Eigen::VectorXd sensitivities;  // indexed by j, 0 at i
};

NeighborhoodEstimate threshold_neighborhood(const NeuronSelection& sel, int neuron,
                                            double epsilon);
NeighborhoodEstimate estimate_neighborhood(const SpikeSample& sample, int neuron, double epsilon,
                                           const FitOptions& opts = {});

/// Whole-network selection: column i of each matrix belongs to neuron i.
struct GraphSelection {
    WeightMatrix weights;
    Eigen::MatrixXd sensitivities;  // (j, i) = d for j -> i
    Eigen::MatrixXd lrt;
    std::vector<NeuronSelection> neurons;

    int optimizer_warnings() const;  // fits that did not converge or hit the box
};

GraphSelection select_graph(const SpikeSample& sample, const FitOptions& opts = {},
                            unsigned workers = 1);

using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// (j, i) = 1 iff j != i and d(j -> i) > epsilon.
Adjacency threshold_graph(const Eigen::MatrixXd& sensitivities, double epsilon);

double lrt_statistic(const FitResult& full, const FitResult& reduced, int horizon);
double lrt_statistic(const SpikeSample& sample, int neuron, int candidate,
                     const FitOptions& opts = {});

/// Upper quantile of the chi-square distribution with one degree of freedom:
/// the x with P(X > x) = alpha.
double chi_square1_upper_quantile(double alpha);

/// Heuristic threshold from a significance level: chi2_1 quantile(1 - alpha) / (2T).
double epsilon_from_alpha(double alpha, int horizon);

/// Detectability margin of neuron i: inf of phi' over the reachable potential
/// range times the smallest nonzero |w_{j->i}|. Empty when no weight is nonzero.
std::optional<double> theoretical_margin(const Eigen::VectorXd& column);

}  // namespace neurograph
