#include "neurograph/estimator.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <unordered_map>

#include "neurograph/error.hpp"

namespace neurograph {

namespace {

constexpr double kLog2 = std::numbers::ln2;

void check_neuron(const SpikeSample& sample, int neuron) {
    if (neuron < 0 || neuron >= sample.n_neurons())
        throw InputError("neuron index " + std::to_string(neuron) + " out of range");
}

void check_weights(const Eigen::VectorXd& w, int n_neurons, int neuron) {
    if (w.size() != n_neurons)
        throw InputError("weight vector has length " + std::to_string(w.size()) + ", expected " +
                         std::to_string(n_neurons));
    if (!w.allFinite()) throw InputError("weight vector has non-finite entries");
    if (w(neuron) != 0.0)
        throw InputError("self-weight of neuron " + std::to_string(neuron) + " must be zero");
}

// Walks t = 1..T for one neuron and hands (t, floor column, current column)
// to the callback; floor column is the column of L_t.
template <typename F>
void for_each_time(const SpikeSample& sample, int neuron, F&& f) {
    const int k = sample.memory_cap();
    const int cols = static_cast<int>(sample.data().cols());
    const auto& data = sample.data();
    int last_col = -1;
    for (int c = 0; c < k; ++c)
        if (data(neuron, c)) last_col = c;
    for (int c = k; c < cols; ++c) {
        f(c - k + 1, std::max(c - k, last_col), c);
        if (data(neuron, c)) last_col = c;
    }
}

}  // namespace

FeatureTable build_features(const SpikeSample& sample, int neuron) {
    check_neuron(sample, neuron);
    const int n = sample.n_neurons();
    const int horizon = sample.horizon();
    const SpikePrefix prefix(sample);

    FeatureTable table;
    table.neuron = neuron;
    table.z = Eigen::MatrixXd::Zero(horizon, n);
    table.gate.resize(horizon);
    table.label.resize(horizon);
    table.elapsed.resize(horizon);

    for_each_time(sample, neuron, [&](int t, int floor_col, int c) {
        const int row = t - 1;
        table.gate(row) = sample.data()(neuron, c - 1) ? 0 : 1;
        table.label(row) = sample.data()(neuron, c);
        table.elapsed(row) = c - floor_col;
        if (table.gate(row) && floor_col < c - 1) {
            table.z.row(row) =
                prefix.window(floor_col + 1, c).cast<double>().transpose() *
                leak_factor(c - floor_col);
            table.z(row, neuron) = 0.0;
        }
    });
    return table;
}

Design compress(const FeatureTable& features) {
    const int n = features.n_neurons();
    Design design;
    design.neuron = features.neuron;
    design.horizon = features.horizon();

    std::unordered_map<std::string, Eigen::Index> index;
    std::vector<Eigen::Index> row_of;
    std::vector<double> trials, ones;
    std::string key(sizeof(double) * n, '\0');
    for (int t = 0; t < features.horizon(); ++t) {
        if (!features.gate(t)) {
            ++design.reset_rows;
            continue;
        }
        for (int j = 0; j < n; ++j) {
            const double v = features.z(t, j);
            std::memcpy(key.data() + sizeof(double) * j, &v, sizeof(double));
        }
        auto [it, inserted] = index.try_emplace(key, static_cast<Eigen::Index>(trials.size()));
        if (inserted) {
            row_of.push_back(t);
            trials.push_back(0.0);
            ones.push_back(0.0);
        }
        trials[it->second] += 1.0;
        ones[it->second] += features.label(t);
    }

    const auto m = static_cast<Eigen::Index>(trials.size());
    design.z.resize(m, n);
    design.trials.resize(m);
    design.ones.resize(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        design.z.row(r) = features.z.row(row_of[r]);
        design.trials(r) = trials[r];
        design.ones(r) = ones[r];
    }
    return design;
}

double log_likelihood(const FeatureTable& features, const Eigen::VectorXd& w) {
    check_weights(w, features.n_neurons(), features.neuron);
    const Eigen::VectorXd eta = features.z * w;
    double total = 0.0;
    for (int t = 0; t < features.horizon(); ++t) {
        if (features.gate(t))
            total += features.label(t) * eta(t) - softplus(eta(t));
        else
            total -= kLog2;
    }
    return total / features.horizon();
}

double log_likelihood(const Design& design, const Eigen::VectorXd& w) {
    check_weights(w, design.n_neurons(), design.neuron);
    const Eigen::VectorXd eta = design.z * w;
    double total = -kLog2 * design.reset_rows;
    for (Eigen::Index r = 0; r < eta.size(); ++r)
        total += design.ones(r) * eta(r) - design.trials(r) * softplus(eta(r));
    return total / design.horizon;
}

Derivatives log_likelihood_derivatives(const FeatureTable& features, const Eigen::VectorXd& w) {
    check_weights(w, features.n_neurons(), features.neuron);
    const int n = features.n_neurons();
    const Eigen::VectorXd eta = features.z * w;
    Derivatives d{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    for (int t = 0; t < features.horizon(); ++t) {
        if (!features.gate(t)) continue;
        const double p = logistic(eta(t));
        const auto zt = features.z.row(t).transpose();
        d.gradient += zt * (features.label(t) - p);
        d.hessian.selfadjointView<Eigen::Lower>().rankUpdate(zt, -p * (1.0 - p));
    }
    d.hessian = d.hessian.selfadjointView<Eigen::Lower>();
    d.gradient /= features.horizon();
    d.hessian /= features.horizon();
    return d;
}

Derivatives log_likelihood_derivatives(const Design& design, const Eigen::VectorXd& w) {
    check_weights(w, design.n_neurons(), design.neuron);
    const Eigen::VectorXd eta = design.z * w;
    Eigen::VectorXd residual(eta.size()), curvature(eta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
        const double p = logistic(eta(r));
        residual(r) = design.ones(r) - design.trials(r) * p;
        curvature(r) = design.trials(r) * p * (1.0 - p);
    }
    Derivatives d;
    d.gradient = design.z.transpose() * residual / design.horizon;
    d.hessian = -(design.z.transpose() * curvature.asDiagonal() * design.z) / design.horizon;
    return d;
}

NeuronMask full_support(int n_neurons, int neuron) {
    NeuronMask mask = NeuronMask::Constant(n_neurons, true);
    mask(neuron) = false;
    return mask;
}

FitResult fit_neuron(const Design& design, const FitOptions& opts, const NeuronMask& support,
                     const Eigen::VectorXd* start) {
    const int n = design.n_neurons();
    const int self = design.neuron;
    if (support.size() != n) throw InputError("support mask has wrong length");
    if (!(opts.box > 0.0) || !(opts.tol > 0.0) || opts.max_iter < 0)
        throw InputError("invalid fit options");

    FitResult result;
    result.neuron = self;
    result.support = support;
    result.support(self) = false;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (start) {
        if (start->size() != n || !start->allFinite()) throw InputError("invalid start vector");
        w = start->cwiseMax(-opts.box).cwiseMin(opts.box);
    }
    for (int j = 0; j < n; ++j)
        if (!result.support(j)) w(j) = 0.0;

    std::vector<int> active_free;
    double f = log_likelihood(design, w);
    for (;;) {
        if (!std::isfinite(f))
            throw OptimizerError("non-finite log-likelihood for neuron " + std::to_string(self) +
                                 " at iteration " + std::to_string(result.iterations));
        const Derivatives d = log_likelihood_derivatives(design, w);

        // Projected gradient: a coordinate pinned at the box with the
        // gradient pointing outward is optimal in that direction.
        active_free.clear();
        double grad_norm = 0.0;
        for (int j = 0; j < n; ++j) {
            if (!result.support(j)) continue;
            const double g = d.gradient(j);
            const bool pinned = (w(j) >= opts.box && g > 0.0) || (w(j) <= -opts.box && g < 0.0);
            if (pinned) continue;
            active_free.push_back(j);
            grad_norm = std::max(grad_norm, std::abs(g));
        }
        result.final_grad_norm = grad_norm;
        if (grad_norm <= opts.tol) {
            result.converged = true;
            break;
        }
        if (result.iterations >= opts.max_iter) break;

        const auto m = static_cast<Eigen::Index>(active_free.size());
        Eigen::MatrixXd info(m, m);
        Eigen::VectorXd g(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            g(a) = d.gradient(active_free[a]);
            for (Eigen::Index b = 0; b < m; ++b)
                info(a, b) = -d.hessian(active_free[a], active_free[b]);
        }
        // Coordinates without information (no spikes in any window) have a
        // zero row; a unit diagonal leaves them in place.
        for (Eigen::Index a = 0; a < m; ++a)
            if (info(a, a) <= 1e-14) info(a, a) = 1.0;

        Eigen::VectorXd step;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(g);
        if (step.size() != m || !step.allFinite() || g.dot(step) <= 0.0) step = g;

        bool accepted = false;
        double scale = 1.0;
        Eigen::VectorXd trial = w;
        for (int halvings = 0; halvings < 60; ++halvings, scale *= 0.5) {
            trial = w;
            for (Eigen::Index a = 0; a < m; ++a) {
                const int j = active_free[a];
                trial(j) = std::clamp(w(j) + scale * step(a), -opts.box, opts.box);
            }
            const double f_trial = log_likelihood(design, trial);
            if (!std::isfinite(f_trial)) continue;
            const double predicted = d.gradient.dot(trial - w);
            // Within rounding of the optimum a full Newton step may not show
            // a measurable increase; accept it when it does not lose accuracy.
            const bool armijo = f_trial >= f + 1e-4 * predicted;
            const bool flat = halvings == 0 && f_trial >= f - 1e-15 * std::max(1.0, std::abs(f));
            if (armijo || flat) {
                w = trial;
                f = f_trial;
                accepted = true;
                break;
            }
        }
        ++result.iterations;
        if (!accepted) break;
    }

    result.weights = w;
    result.log_lik = f;
    for (int j = 0; j < n; ++j)
        if (result.support(j) && std::abs(w(j)) >= opts.box) result.hit_bound = true;
    return result;
}

FitResult fit_neuron(const Design& design, const FitOptions& opts) {
    return fit_neuron(design, opts, full_support(design.n_neurons(), design.neuron));
}

FitResult fit_neuron(const SpikeSample& sample, int neuron, const FitOptions& opts) {
    return fit_neuron(compress(build_features(sample, neuron)), opts);
}

NetworkFit fit_network(const SpikeSample& sample, const FitOptions& opts) {
    const int n = sample.n_neurons();
    NetworkFit net;
    net.weights = WeightMatrix::Zero(n, n);
    net.fits.reserve(n);
    for (int i = 0; i < n; ++i) {
        net.fits.push_back(fit_neuron(sample, i, opts));
        net.weights.col(i) = net.fits.back().weights;
    }
    return net;
}

double network_log_likelihood(const SpikeSample& sample, const WeightMatrix& weights) {
    validate_weights(weights);
    if (weights.rows() != sample.n_neurons()) throw InputError("weight matrix size mismatch");
    double total = 0.0;
    for (int i = 0; i < sample.n_neurons(); ++i)
        total += log_likelihood(build_features(sample, i), Eigen::VectorXd(weights.col(i)));
    return total;
}

// ---- context counts --------------------------------------------------------

std::int64_t ContextCounts::total() const {
    std::int64_t sum = 0;
    for (const auto& [key, c] : counts) sum += c[0] + c[1];
    return sum;
}

namespace {

std::string encode_context(const SpikeSample& sample, int neuron, int floor_col, int c) {
    const int elapsed = c - floor_col;
    if (elapsed > 0xFFFF) throw CapabilityError("context length exceeds 65535 bins");
    const int width = elapsed - 1;
    const int n = sample.n_neurons();
    const std::size_t bits = static_cast<std::size_t>(width) * (n - 1);
    std::string key(2 + (bits + 7) / 8, '\0');
    key[0] = static_cast<char>(elapsed & 0xFF);
    key[1] = static_cast<char>((elapsed >> 8) & 0xFF);
    std::size_t bit = 0;
    for (int j = 0; j < n; ++j) {
        if (j == neuron) continue;
        for (int s = 0; s < width; ++s, ++bit)
            if (sample.data()(j, floor_col + 1 + s))
                key[2 + bit / 8] = static_cast<char>(key[2 + bit / 8] | (1u << (bit % 8)));
    }
    return key;
}

}  // namespace

std::string context_key(const SpikeSample& sample, int neuron, int t) {
    const int last = last_spike_time(sample, neuron, t);
    return encode_context(sample, neuron, sample.column(last), sample.column(t));
}

ContextCounts context_counts(const SpikeSample& sample, int neuron) {
    check_neuron(sample, neuron);
    ContextCounts out;
    out.neuron = neuron;
    out.n_neurons = sample.n_neurons();
    out.horizon = sample.horizon();
    for_each_time(sample, neuron, [&](int, int floor_col, int c) {
        auto& cell = out.counts[encode_context(sample, neuron, floor_col, c)];
        ++cell[sample.data()(neuron, c) ? 1 : 0];
    });
    return out;
}

DecodedContext decode_context(const std::string& key, int n_neurons, int neuron) {
    if (key.size() < 2) throw InputError("context key too short");
    DecodedContext ctx;
    ctx.elapsed = static_cast<unsigned char>(key[0]) | (static_cast<unsigned char>(key[1]) << 8);
    const int width = ctx.elapsed - 1;
    const std::size_t bits = static_cast<std::size_t>(width) * (n_neurons - 1);
    if (ctx.elapsed < 1 || key.size() != 2 + (bits + 7) / 8)
        throw InputError("context key length does not match its elapsed time");
    ctx.counts = Eigen::VectorXi::Zero(n_neurons);
    std::size_t bit = 0;
    for (int j = 0; j < n_neurons; ++j) {
        if (j == neuron) continue;
        for (int s = 0; s < width; ++s, ++bit)
            ctx.counts(j) += (static_cast<unsigned char>(key[2 + bit / 8]) >> (bit % 8)) & 1;
    }
    return ctx;
}

double count_based_log_likelihood(const ContextCounts& contexts, const Eigen::VectorXd& w) {
    check_weights(w, contexts.n_neurons, contexts.neuron);
    double total = 0.0;
    for (const auto& [key, c] : contexts.counts) {
        const DecodedContext ctx = decode_context(key, contexts.n_neurons, contexts.neuron);
        const double v = w.dot(ctx.counts.cast<double>()) * leak_factor(ctx.elapsed);
        // log P(0) = -softplus(v), log P(1) = -softplus(-v)
        if (c[0] > 0) total -= static_cast<double>(c[0]) * softplus(v);
        if (c[1] > 0) total -= static_cast<double>(c[1]) * softplus(-v);
    }
    return total / contexts.horizon;
}

}  // namespace neurograph
