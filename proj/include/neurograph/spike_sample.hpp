#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace neurograph {

/// Binary spikes, one row per neuron, one column per bin.
using SpikeMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Spike history of N neurons over an initial past of K bins (times -K+1..0)
/// followed by T observed bins (times 1..T).
///
/// Every neuron must spike at least once in the initial past. Samples whose
/// past was completed with virtual spikes (see ingestion) carry the
/// `virtual_past` flag instead; only such samples skip the admissibility check.
class SpikeSample {
public:
    SpikeSample(SpikeMatrix data, int memory_cap, bool virtual_past = false);

    int n_neurons() const { return static_cast<int>(data_.rows()); }
    int memory_cap() const { return memory_cap_; }
    int horizon() const { return static_cast<int>(data_.cols()) - memory_cap_; }
    int first_time() const { return 1 - memory_cap_; }
    bool virtual_past() const { return virtual_past_; }

    // Column in data() holding time t.
    int column(int t) const { return t + memory_cap_ - 1; }

    std::uint8_t operator()(int neuron, int t) const { return data_(neuron, column(t)); }
    std::uint8_t at(int neuron, int t) const;

    const SpikeMatrix& data() const { return data_; }

    bool is_admissible() const;

    friend bool operator==(const SpikeSample& a, const SpikeSample& b) {
        return a.memory_cap_ == b.memory_cap_ && a.virtual_past_ == b.virtual_past_ &&
               a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
               a.data_ == b.data_;
    }

private:
    SpikeMatrix data_;
    int memory_cap_;
    bool virtual_past_;
};

}  // namespace neurograph
