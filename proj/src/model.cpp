#include "neurograph/model.hpp"

namespace neurograph {

namespace {

void check_time(const SpikeSample& sample, int neuron, int t) {
    if (neuron < 0 || neuron >= sample.n_neurons())
        throw InputError("neuron index " + std::to_string(neuron) + " out of range");
    if (t < 1 || t > sample.horizon())
        throw InputError("time " + std::to_string(t) + " outside 1.." +
                         std::to_string(sample.horizon()));
}

}  // namespace

int last_spike_time(const SpikeSample& sample, int neuron, int t) {
    check_time(sample, neuron, t);
    const int floor = t - sample.memory_cap();
    for (int s = t - 1; s > floor; --s)
        if (sample(neuron, s)) return s;
    return floor;
}

Eigen::VectorXi window_counts(const SpikeSample& sample, int neuron, int t) {
    const int last = last_spike_time(sample, neuron, t);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(sample.n_neurons());
    if (t - 1 > last) {
        const int first_col = sample.column(last + 1);
        const int width = t - 1 - last;
        counts = sample.data().middleCols(first_col, width).cast<int>().rowwise().sum();
    }
    return counts;
}

}  // namespace neurograph

namespace neurograph {

SpikePrefix::SpikePrefix(const SpikeSample& sample)
    : counts_(Eigen::MatrixXi::Zero(sample.n_neurons(), sample.data().cols() + 1)) {
    const auto& data = sample.data();
    for (Eigen::Index c = 0; c < data.cols(); ++c)
        counts_.col(c + 1) = counts_.col(c) + data.col(c).cast<int>();
}

}  // namespace neurograph
