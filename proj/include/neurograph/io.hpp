#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>

#include "neurograph/spike_sample.hpp"

namespace neurograph {

enum class SampleFormat { Csv, Binary };

// NGSP binary layout: "NGSP", u32 N, u32 K, u64 T (little-endian), then each
// neuron row of K+T bits packed least-significant-bit first and padded to a
// whole byte.
inline constexpr char kSampleMagic[4] = {'N', 'G', 'S', 'P'};

void write_sample_bin(const SpikeSample& sample, const std::filesystem::path& path);
SpikeSample read_sample_bin(const std::filesystem::path& path);

/// One row per neuron, one 0/1 column per bin from -K+1 to T, no header, plus
/// a JSON sidecar (same stem, .json) with n_neurons, memory_cap, horizon.
void write_sample_csv(const SpikeSample& sample, const std::filesystem::path& path);
SpikeSample read_sample_csv(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

void write_sample(const SpikeSample& sample, const std::filesystem::path& path,
                  SampleFormat format);
/// Binary when the file starts with the NGSP magic or has a .bin extension,
/// CSV for .csv files.
SpikeSample read_sample(const std::filesystem::path& path);
SampleFormat format_from_extension(const std::filesystem::path& path);

/// Round-trippable decimal rendering of a double.
std::string format_double(double value);

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace neurograph
