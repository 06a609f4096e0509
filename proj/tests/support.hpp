#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neurograph/rng.hpp"
#include "neurograph/simulator.hpp"
#include "neurograph/spike_sample.hpp"

namespace testing {

using namespace neurograph;

// Rows are bin strings from time -K+1 to T, e.g. {"1000110", "0100101"}.
inline SpikeSample sample_from_rows(const std::vector<std::string>& rows, int memory_cap,
                                    bool virtual_past = false) {
    SpikeMatrix data(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c] == '1';
    return SpikeSample(std::move(data), memory_cap, virtual_past);
}

// Admissible Bernoulli(p) past followed by T independent Bernoulli(p) bins.
inline SpikeSample random_sample(Xoshiro256& rng, int n, int memory_cap, int horizon, double p) {
    SpikeMatrix data(n, memory_cap + horizon);
    data.leftCols(memory_cap) =
        admissible_initial_past(n, memory_cap, InitMode::BernoulliConditioned, p, rng);
    for (int c = memory_cap; c < memory_cap + horizon; ++c)
        for (int i = 0; i < n; ++i) data(i, c) = rng.bernoulli(p);
    return SpikeSample(std::move(data), memory_cap);
}

// Uniform entries in [-scale, scale] with a zero diagonal.
inline Eigen::MatrixXd random_weights(Xoshiro256& rng, int n, double scale) {
    Eigen::MatrixXd w(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) w(j, i) = j == i ? 0.0 : scale * (2.0 * rng.uniform() - 1.0);
    return w;
}

inline Eigen::VectorXd random_vector(Xoshiro256& rng, int n, double scale) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v(k) = scale * (2.0 * rng.uniform() - 1.0);
    return v;
}

inline int random_int(Xoshiro256& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("neurograph_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
