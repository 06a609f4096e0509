#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "neurograph/spike_sample.hpp"

namespace neurograph {

/// Spike times in seconds, one ascending list per neuron, within [t_start, t_end].
struct TimestampSet {
    std::vector<std::vector<double>> spikes;
    double t_start = 0.0;
    double t_end = 0.0;

    int n_neurons() const { return static_cast<int>(spikes.size()); }
    double duration() const { return t_end - t_start; }
};

struct ParseNotes {
    int duplicates_removed = 0;
    bool resorted = false;
    std::vector<std::string> messages;
};

/// Reads either a CSV of (neuron_id, time_s) rows, with neuron ids 0..N-1 and
/// an optional header line, or a directory holding one plain-text time list
/// per neuron (files taken in name order). Unsorted input is sorted and
/// duplicate times dropped, both reported in `notes`. The span defaults to
/// [min(0, first spike), last spike].
TimestampSet parse_timestamps(const std::filesystem::path& path, ParseNotes* notes = nullptr);

/// Checks sorting, span and that every neuron spiked; throws InputError.
void validate(const TimestampSet& ts);

/// Per-neuron spike count / duration, in Hz.
Eigen::VectorXd firing_rates(const TimestampSet& ts);

/// Index of the half-open bin [t_start + b w, t_start + (b+1) w) holding t.
long bin_index(double t, double t_start, double bin_s);

struct BinnedRecording {
    SpikeMatrix bins;        // N x n_bins
    double t_start = 0.0;
    double bin_ms = 1.0;
    int collapsed_spikes = 0;  // spikes lost to bins that already held one
    Eigen::VectorXi collapsed_per_neuron;
};

BinnedRecording bin_recording(const TimestampSet& ts, double bin_ms);

/// Bin centers, in seconds, of every occupied bin.
TimestampSet bin_centers(const BinnedRecording& rec);

struct IngestReport {
    int n_bins = 0;
    int first_observed_bin = 0;  // recording bin mapped to t = 1
    int collapsed_spikes = 0;
    int virtual_spikes = 0;
    bool virtual_past = false;
};

struct IngestResult {
    SpikeSample sample;
    IngestReport report;
};

/// Bins at bin_ms and splits off an initial past of K bins. Time t = 1 is the
/// first bin before which every neuron has spiked within the trailing K bins.
/// When no such bin exists, the first K bins form the past and every neuron
/// silent there gets a virtual spike at its leading bin (time -K+1, which
/// leaves all potentials unchanged); a past shorter than K is zero padded on
/// the left. Either completion sets the virtual-past flag.
IngestResult bin_spikes(const TimestampSet& ts, double bin_ms, int memory_cap);
IngestResult split_recording(const BinnedRecording& rec, int memory_cap);

}  // namespace neurograph
