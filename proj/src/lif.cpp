#include "neurograph/lif.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurograph/error.hpp"
#include "neurograph/rng.hpp"

namespace neurograph {

void LifParams::validate() const {
    if (!(v_reset < v_threshold)) throw InputError("v_reset must be below v_threshold");
    if (!(tau_m > 0.0) || !(syn_tau > 0.0)) throw InputError("time constants must be positive");
    if (!(dt > 0.0) || !(dt < syn_tau)) throw InputError("dt must be positive and below syn_tau");
    if (!(duration > 0.0)) throw InputError("duration must be positive");
    if (!(drive_rate_hz >= 0.0) || !(drive_weight >= 0.0))
        throw InputError("drive rate and weight must be non-negative");
    if (drive_rate_hz * dt / 1000.0 > kMaxDriveEventsPerStep)
        throw InputError("drive rate exceeds " + std::to_string(static_cast<int>(kMaxDriveEventsPerStep)) +
                         " background events per step");
    if (!(conductance_scale >= 0.0) || !(weight_clip > 0.0))
        throw InputError("conductance scale must be non-negative and clip positive");
}

long LifParams::steps() const { return std::lround(duration / dt); }

int Circuit::synapse_count() const {
    return static_cast<int>((g_exc.array() > 0.0).count() + (g_inh.array() > 0.0).count());
}

Circuit build_microcircuit(const WeightMatrix& w_hat, const LifParams& params) {
    params.validate();
    if (w_hat.rows() != w_hat.cols()) throw InputError("weight matrix must be square");
    if (!w_hat.allFinite()) throw InputError("weight matrix has non-finite entries");
    const Eigen::MatrixXd w = w_hat.cwiseMax(-params.weight_clip).cwiseMin(params.weight_clip);
    Circuit c;
    c.g_exc = params.conductance_scale * w.cwiseMax(0.0);
    c.g_inh = params.conductance_scale * (-w).cwiseMax(0.0);
    c.g_exc.diagonal().setZero();
    c.g_inh.diagonal().setZero();
    return c;
}

LifTrace simulate_lif(const Circuit& circuit, const LifParams& params, std::uint64_t seed,
                      const Eigen::VectorXd* v0) {
    params.validate();
    const int n = circuit.n_neurons();
    const long steps = params.steps();
    if (v0 && v0->size() != n) throw InputError("initial voltage vector has wrong length");

    LifTrace trace;
    trace.dt = params.dt;
    trace.duration = static_cast<double>(steps) * params.dt;
    trace.voltage.resize(steps + 1, n);
    trace.g_exc.resize(steps + 1, n);
    trace.g_inh.resize(steps + 1, n);
    trace.spike_times.assign(n, {});

    Eigen::VectorXd v = v0 ? *v0 : Eigen::VectorXd::Constant(n, params.v_reset);
    Eigen::VectorXd ge = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd gi = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd spiked = Eigen::VectorXd::Zero(n);
    trace.voltage.row(0) = v.transpose();
    trace.g_exc.row(0).setZero();
    trace.g_inh.row(0).setZero();

    Xoshiro256 rng(seed);
    const double syn_decay = std::exp(-params.dt / params.syn_tau);
    const double drive_mean = params.drive_rate_hz * params.dt / 1000.0;

    for (long k = 0; k < steps; ++k) {
        ge = ge * syn_decay + circuit.g_exc.transpose() * spiked;
        gi = gi * syn_decay + circuit.g_inh.transpose() * spiked;
        for (int i = 0; i < n; ++i) ge(i) += params.drive_weight * rng.poisson(drive_mean);

        spiked.setZero();
        for (int i = 0; i < n; ++i) {
            const double g_total = 1.0 + ge(i) + gi(i);
            const double v_inf =
                (params.v_reset + ge(i) * params.e_exc + gi(i) * params.e_inh) / g_total;
            v(i) = v_inf + (v(i) - v_inf) * std::exp(-params.dt * g_total / params.tau_m);
            if (!std::isfinite(v(i)))
                throw IntegrationError("non-finite membrane potential at step " +
                                       std::to_string(k + 1) + ", neuron " + std::to_string(i));
            if (v(i) >= params.v_threshold) {
                trace.spike_times[i].push_back(static_cast<double>(k + 1) * params.dt);
                v(i) = params.v_reset;
                spiked(i) = 1.0;
            }
        }
        trace.voltage.row(k + 1) = v.transpose();
        trace.g_exc.row(k + 1) = ge.transpose();
        trace.g_inh.row(k + 1) = gi.transpose();
    }
    return trace;
}

Eigen::VectorXd firing_rates(const LifTrace& trace) {
    if (!(trace.duration > 0.0)) throw InputError("firing rates need a positive duration");
    Eigen::VectorXd rates(static_cast<Eigen::Index>(trace.spike_times.size()));
    for (std::size_t i = 0; i < trace.spike_times.size(); ++i)
        rates(static_cast<Eigen::Index>(i)) =
            static_cast<double>(trace.spike_times[i].size()) / (trace.duration / 1000.0);
    return rates;
}

double calibrate_drive(const Circuit& circuit, LifParams params, double target_hz,
                       std::uint64_t seed, double tolerance_hz, int max_iter) {
    if (!(target_hz > 0.0)) throw InputError("target rate must be positive");
    if (target_hz >= 1000.0 / params.dt) throw InputError("target rate must be below one spike per step");
    const double max_drive = kMaxDriveEventsPerStep * 1000.0 / params.dt;
    auto mean_rate = [&](double drive) {
        params.drive_rate_hz = drive;
        return firing_rates(simulate_lif(circuit, params, seed)).mean();
    };
    double lo = 0.0, hi = std::clamp(params.drive_rate_hz, 1.0, max_drive);
    while (mean_rate(hi) < target_hz) {
        if (hi >= max_drive)
            throw NumericalError("background drive cannot reach the target rate within " +
                                 std::to_string(static_cast<int>(kMaxDriveEventsPerStep)) + " events per step");
        lo = hi;
        hi = std::min(2.0 * hi, max_drive);
    }
    double mid = hi;
    for (int it = 0; it < max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        const double rate = mean_rate(mid);
        if (std::abs(rate - target_hz) <= tolerance_hz) break;
        if (rate < target_hz)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

}  // namespace neurograph
