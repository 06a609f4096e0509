#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "neurograph/error.hpp"
#include "neurograph/spike_sample.hpp"

namespace neurograph {

/// Synaptic weights, W(j, i) = weight of presynaptic j on postsynaptic i.
template <typename Scalar>
using WeightMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using WeightMatrix = WeightMatrixT<double>;

// Numerically stable logistic; branches on the sign so exp never overflows.
template <typename Scalar>
Scalar logistic(Scalar v) {
    if (v >= Scalar(0)) {
        const Scalar e = std::exp(-v);
        return Scalar(1) / (Scalar(1) + e);
    }
    const Scalar e = std::exp(v);
    return e / (Scalar(1) + e);
}

// log(1 + exp(v)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar v) {
    if (v > Scalar(0)) return v + std::log1p(std::exp(-v));
    return std::log1p(std::exp(v));
}

template <typename Scalar>
Scalar logistic_derivative(Scalar v) {
    const Scalar p = logistic(v);
    return p * (Scalar(1) - p);
}

enum class RateKind { Logistic };

struct RateParams {
    RateKind kind = RateKind::Logistic;
    // delta <= phi(v) <= 1 - delta on every reachable potential.
    double bound_delta = 0.5;
};

/// r = max_i sum_j |W(j, i)|; bounds |v| for every history.
template <typename Derived>
typename Derived::Scalar summability_bound(const Eigen::MatrixBase<Derived>& weights) {
    if (weights.size() == 0) return typename Derived::Scalar(0);
    return weights.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
RateParams rate_params(const Eigen::MatrixBase<Derived>& weights) {
    return {RateKind::Logistic, static_cast<double>(logistic(-summability_bound(weights)))};
}

/// Throws InputError unless the matrix is square, finite and has a zero diagonal.
template <typename Derived>
void validate_weights(const Eigen::MatrixBase<Derived>& weights) {
    if (weights.rows() != weights.cols() || weights.rows() < 1)
        throw InputError("weight matrix must be square and non-empty");
    if (!weights.allFinite()) throw InputError("weight matrix has non-finite entries");
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
        if (weights(i, i) != 0)
            throw InputError("weight matrix diagonal must be zero (neuron " + std::to_string(i) +
                             ")");
}

// 1 / 2^(t - L - 1) for elapsed = t - L >= 1.
inline double leak_factor(int elapsed) { return std::ldexp(1.0, -(elapsed - 1)); }

/// Last spike time of neuron i before t, floored at t - K.
int last_spike_time(const SpikeSample& sample, int neuron, int t);

/// Spike counts of every neuron over the window L+1 .. t-1 of neuron i.
Eigen::VectorXi window_counts(const SpikeSample& sample, int neuron, int t);

/// Potential v_{t-1}(i): zero right after a spike of i, otherwise the leak-scaled
/// weighted count of presynaptic spikes since the last spike of i.
template <typename Derived>
typename Derived::Scalar membrane_potential(const SpikeSample& sample,
                                            const Eigen::MatrixBase<Derived>& weights,
                                            int neuron, int t) {
    using Scalar = typename Derived::Scalar;
    if (weights.rows() != sample.n_neurons() || weights.cols() != sample.n_neurons())
        throw InputError("weight matrix size does not match sample");
    const int last = last_spike_time(sample, neuron, t);
    if (last == t - 1) return Scalar(0);
    const Eigen::VectorXi counts = window_counts(sample, neuron, t);
    const Scalar drive = weights.col(neuron).dot(counts.cast<Scalar>());
    return drive * Scalar(leak_factor(t - last));
}

template <typename Derived>
typename Derived::Scalar spike_probability(const SpikeSample& sample,
                                           const Eigen::MatrixBase<Derived>& weights,
                                           int neuron, int t) {
    return logistic(membrane_potential(sample, weights, neuron, t));
}

}  // namespace neurograph

namespace neurograph {

/// Prefix spike counts of a sample, used to evaluate window sums in O(N).
class SpikePrefix {
public:
    explicit SpikePrefix(const SpikeSample& sample);

    // Spikes of every neuron in columns [begin, end).
    Eigen::VectorXi window(int begin_col, int end_col) const {
        return counts_.col(end_col) - counts_.col(begin_col);
    }

private:
    Eigen::MatrixXi counts_;
};

}  // namespace neurograph
