#include "neurograph/simulator.hpp"

#include <algorithm>
#include <vector>

#include "neurograph/error.hpp"

namespace neurograph {

SpikeMatrix admissible_initial_past(int n_neurons, int memory_cap, InitMode mode, double p,
                                    Xoshiro256& rng) {
    if (n_neurons < 1 || memory_cap < 1) throw InputError("N and K must be >= 1");
    SpikeMatrix past = SpikeMatrix::Zero(n_neurons, memory_cap);
    switch (mode) {
        case InitMode::AllSpikeAtZero:
            past.col(memory_cap - 1).setOnes();
            break;
        case InitMode::BernoulliConditioned:
            if (!(p > 0.0 && p < 1.0)) throw InputError("Bernoulli init probability must be in (0,1)");
            for (int i = 0; i < n_neurons; ++i) {
                do {
                    for (int c = 0; c < memory_cap; ++c) past(i, c) = rng.bernoulli(p) ? 1 : 0;
                } while ((past.row(i).array() == 0).all());
            }
            break;
    }
    return past;
}

SpikeMatrix admissible_initial_past(int n_neurons, int memory_cap, InitMode mode, double p,
                                    std::uint64_t seed) {
    Xoshiro256 rng(seed);
    return admissible_initial_past(n_neurons, memory_cap, mode, p, rng);
}

SpikeSample simulate(const WeightMatrix& weights, const SimConfig& cfg) {
    validate_weights(weights);
    if (cfg.horizon < 1 || cfg.memory_cap < 1) throw InputError("T and K must be >= 1");

    const int n = static_cast<int>(weights.rows());
    const int k = cfg.memory_cap;
    const int cols = k + cfg.horizon;

    Xoshiro256 rng(cfg.seed);
    SpikeMatrix data(n, cols);
    data.leftCols(k) = admissible_initial_past(n, k, cfg.init_mode, cfg.init_p, rng);

    // prefix(j, c) = spikes of j in columns < c
    Eigen::MatrixXi prefix = Eigen::MatrixXi::Zero(n, cols + 1);
    std::vector<int> last_col(n, -1);
    for (int c = 0; c < k; ++c) {
        prefix.col(c + 1) = prefix.col(c) + data.col(c).cast<int>();
        for (int i = 0; i < n; ++i)
            if (data(i, c)) last_col[i] = c;
    }

    Eigen::VectorXd counts(n);
    for (int c = k; c < cols; ++c) {
        for (int i = 0; i < n; ++i) {
            const int floor_col = std::max(c - k, last_col[i]);
            double v = 0.0;
            if (floor_col < c - 1) {
                counts = (prefix.col(c) - prefix.col(floor_col + 1)).cast<double>();
                v = weights.col(i).dot(counts) * leak_factor(c - floor_col);
            }
            data(i, c) = rng.bernoulli(logistic(v)) ? 1 : 0;
        }
        prefix.col(c + 1) = prefix.col(c) + data.col(c).cast<int>();
        for (int i = 0; i < n; ++i)
            if (data(i, c)) last_col[i] = c;
    }
    return SpikeSample(std::move(data), k);
}

Eigen::VectorXd exact_transition_distribution(const SpikeSample& sample,
                                              const WeightMatrix& weights, int t) {
    const int n = sample.n_neurons();
    if (n > kMaxExactNeurons)
        throw CapabilityError("exact transition distribution supports at most " +
                              std::to_string(kMaxExactNeurons) + " neurons, got " +
                              std::to_string(n));
    Eigen::VectorXd marginal(n);
    for (int i = 0; i < n; ++i) marginal(i) = spike_probability(sample, weights, i, t);

    const Eigen::Index states = Eigen::Index{1} << n;
    Eigen::VectorXd probs(states);
    for (Eigen::Index b = 0; b < states; ++b) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) p *= ((b >> i) & 1) ? marginal(i) : 1.0 - marginal(i);
        probs(b) = p;
    }
    return probs;
}

}  // namespace neurograph
