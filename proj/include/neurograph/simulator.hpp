#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "neurograph/model.hpp"
#include "neurograph/rng.hpp"
#include "neurograph/spike_sample.hpp"

namespace neurograph {

enum class InitMode { AllSpikeAtZero, BernoulliConditioned };

struct SimConfig {
    int horizon = 1000;
    int memory_cap = 50;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::AllSpikeAtZero;
    double init_p = 0.5;  // only used by BernoulliConditioned
};

/// N x K block for times -K+1..0 in which every neuron spikes at least once.
SpikeMatrix admissible_initial_past(int n_neurons, int memory_cap, InitMode mode, double p,
                                    Xoshiro256& rng);
SpikeMatrix admissible_initial_past(int n_neurons, int memory_cap, InitMode mode, double p,
                                    std::uint64_t seed);

/// Draws x_1..x_T forward in time. At each step every neuron spikes
/// independently with probability logistic(v_{t-1}(i)); potentials only use
/// the past. Identical (weights, cfg) give identical samples.
SpikeSample simulate(const WeightMatrix& weights, const SimConfig& cfg);

/// Joint law of x_t given x_{-K+1..t-1} from `sample`. Entry b is the
/// probability of the configuration whose bit i is x_t(i). Limited to N <= 12.
Eigen::VectorXd exact_transition_distribution(const SpikeSample& sample,
                                              const WeightMatrix& weights, int t);

inline constexpr int kMaxExactNeurons = 12;

}  // namespace neurograph
