#include "neurograph/spike_sample.hpp"

#include <string>

#include "neurograph/error.hpp"

namespace neurograph {

SpikeSample::SpikeSample(SpikeMatrix data, int memory_cap, bool virtual_past)
    : data_(std::move(data)), memory_cap_(memory_cap), virtual_past_(virtual_past) {
    if (memory_cap_ < 1) throw InputError("memory cap K must be >= 1");
    if (data_.rows() < 1) throw InputError("spike sample needs at least one neuron");
    if (data_.cols() < memory_cap_ + 1)
        throw InputError("spike sample needs K past bins plus at least one observed bin");
    if ((data_.array() > 1).any()) throw InputError("spike sample entries must be 0 or 1");
    if (!virtual_past_ && !is_admissible())
        throw InputError("initial past is not admissible: some neuron never spikes in it");
}

std::uint8_t SpikeSample::at(int neuron, int t) const {
    if (neuron < 0 || neuron >= n_neurons())
        throw InputError("neuron index " + std::to_string(neuron) + " out of range");
    if (t < first_time() || t > horizon())
        throw InputError("time " + std::to_string(t) + " out of range");
    return (*this)(neuron, t);
}

bool SpikeSample::is_admissible() const {
    const auto past = data_.leftCols(memory_cap_);
    for (Eigen::Index i = 0; i < past.rows(); ++i)
        if ((past.row(i).array() == 0).all()) return false;
    return true;
}

}  // namespace neurograph
