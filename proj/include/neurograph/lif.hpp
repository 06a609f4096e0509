#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "neurograph/model.hpp"

namespace neurograph {

// Keeps the per-step Poisson draw (product method) cheap and exact.
inline constexpr double kMaxDriveEventsPerStep = 50.0;

/// Conductance-based LIF microcircuit parameters. Voltages in mV, times in ms,
/// conductances relative to the leak conductance.
struct LifParams {
    double v_threshold = -50.0;
    double v_reset = -65.0;  // also the leak reversal
    double tau_m = 10.0;
    double syn_tau = 0.5;
    double e_exc = 0.0;
    double e_inh = -70.0;
    double dt = 0.1;
    double duration = 2000.0;
    double drive_rate_hz = 800.0;  // Poisson background events per neuron
    double drive_weight = 0.5;     // excitatory conductance added per event
    double conductance_scale = 0.05;
    double weight_clip = 10.0;     // |w| clipped to this before building

    void validate() const;
    long steps() const;
};

/// Peak conductances, (j, i) for the synapse j -> i.
struct Circuit {
    Eigen::MatrixXd g_exc;
    Eigen::MatrixXd g_inh;

    int n_neurons() const { return static_cast<int>(g_exc.rows()); }
    int synapse_count() const;
};

/// Positive weights become excitatory synapses, negative ones inhibitory,
/// both with peak conductance_scale * |w| after clipping to +-weight_clip.
Circuit build_microcircuit(const WeightMatrix& w_hat, const LifParams& params);

struct LifTrace {
    double dt = 0.1;
    double duration = 0.0;
    Eigen::MatrixXd voltage;  // (steps + 1) x N, row k at time k dt
    Eigen::MatrixXd g_exc;    // total excitatory conductance per step
    Eigen::MatrixXd g_inh;
    std::vector<std::vector<double>> spike_times;  // ms
};

/// Exact exponential update per step with conductances held over the step:
/// conductances decay by exp(-dt/syn_tau), then v relaxes toward the
/// conductance-weighted reversal mix. Crossing v_threshold records a spike and
/// stores v_reset for that step. `v0` defaults to v_reset for every neuron.
LifTrace simulate_lif(const Circuit& circuit, const LifParams& params, std::uint64_t seed,
                      const Eigen::VectorXd* v0 = nullptr);

/// Spike count / duration in Hz.
Eigen::VectorXd firing_rates(const LifTrace& trace);

/// Bisection on the background rate until the mean firing rate is within
/// `tolerance_hz` of the target. Returns the calibrated drive rate in Hz.
double calibrate_drive(const Circuit& circuit, LifParams params, double target_hz,
                       std::uint64_t seed, double tolerance_hz = 0.25, int max_iter = 40);

}  // namespace neurograph
