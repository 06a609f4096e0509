#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "neurograph/model.hpp"
#include "neurograph/spike_sample.hpp"

namespace neurograph {

/// Which presynaptic coordinates a fit may move. The postsynaptic neuron's own
/// coordinate is never free.
using NeuronMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Regression rows of one postsynaptic neuron, one per t = 1..T.
///
/// Row t holds gate = 1 - x_{t-1}(i), the leak-scaled presynaptic counts
/// z_t[j] = gate * #spikes of j in (L, t-1] / 2^(t-L-1), the label x_t(i) and
/// the elapsed time t - L.
struct FeatureTable {
    int neuron = 0;
    Eigen::MatrixXd z;                 // T x N
    Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> gate;
    Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> label;
    Eigen::ArrayXi elapsed;

    int horizon() const { return static_cast<int>(z.rows()); }
    int n_neurons() const { return static_cast<int>(z.cols()); }
};

FeatureTable build_features(const SpikeSample& sample, int neuron);

/// Gated rows grouped by identical feature vectors (a weighted logistic
/// design). Reset rows only contribute the constant -log 2 each.
struct Design {
    int neuron = 0;
    int horizon = 0;
    Eigen::MatrixXd z;       // unique gated rows
    Eigen::VectorXd trials;  // rows sharing each feature vector
    Eigen::VectorXd ones;    // of which labelled 1
    int reset_rows = 0;

    int n_neurons() const { return static_cast<int>(z.cols()); }
};

Design compress(const FeatureTable& features);

/// Rescaled log-likelihood (1/T) sum_t log P(x_t(i) | past), reset rows included.
double log_likelihood(const FeatureTable& features, const Eigen::VectorXd& w);
double log_likelihood(const Design& design, const Eigen::VectorXd& w);

struct Derivatives {
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

Derivatives log_likelihood_derivatives(const FeatureTable& features, const Eigen::VectorXd& w);
Derivatives log_likelihood_derivatives(const Design& design, const Eigen::VectorXd& w);

struct FitOptions {
    double tol = 1e-8;  // sup-norm of the projected gradient
    int max_iter = 200;
    double box = 30.0;  // |w_j| <= box
};

struct FitResult {
    int neuron = 0;
    Eigen::VectorXd weights;  // weights(i) == 0
    NeuronMask support;       // coordinates that were fitted
    bool converged = false;
    int iterations = 0;
    double final_grad_norm = 0.0;
    bool hit_bound = false;
    double log_lik = 0.0;
};

/// Box-constrained maximum likelihood by damped Newton with Armijo
/// backtracking, started from `start` (zero when absent). Coordinates outside
/// `support` stay at zero.
FitResult fit_neuron(const Design& design, const FitOptions& opts, const NeuronMask& support,
                     const Eigen::VectorXd* start = nullptr);
FitResult fit_neuron(const Design& design, const FitOptions& opts = {});
FitResult fit_neuron(const SpikeSample& sample, int neuron, const FitOptions& opts = {});

/// Every coordinate except the neuron itself.
NeuronMask full_support(int n_neurons, int neuron);

struct NetworkFit {
    WeightMatrix weights;  // column i = fit of neuron i
    std::vector<FitResult> fits;
};

NetworkFit fit_network(const SpikeSample& sample, const FitOptions& opts = {});

/// Sum over neurons of the per-neuron rescaled log-likelihoods at W.
double network_log_likelihood(const SpikeSample& sample, const WeightMatrix& weights);

/// Occurrence counts of each context of neuron i. The key is the elapsed time
/// l = t - L as a little-endian u16 followed by the spikes of the other
/// neurons over the l-1 window bins, bit-packed row-major (neurons ascending,
/// time ascending, least significant bit first).
struct ContextCounts {
    int neuron = 0;
    int n_neurons = 0;
    int horizon = 0;
    std::map<std::string, std::array<std::int64_t, 2>> counts;  // key -> (N(u,0), N(u,1))

    std::int64_t total() const;
};

std::string context_key(const SpikeSample& sample, int neuron, int t);
ContextCounts context_counts(const SpikeSample& sample, int neuron);

/// Elapsed time and per-neuron window spike counts encoded in a context key.
struct DecodedContext {
    int elapsed = 1;
    Eigen::VectorXi counts;  // entry for the postsynaptic neuron is 0
};
DecodedContext decode_context(const std::string& key, int n_neurons, int neuron);

/// sum_u sum_a N(u,a)/T log P_ua(w); equals log_likelihood on the same sample.
double count_based_log_likelihood(const ContextCounts& contexts, const Eigen::VectorXd& w);

}  // namespace neurograph
