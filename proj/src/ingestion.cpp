#include "neurograph/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "neurograph/error.hpp"

namespace neurograph {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return !t.empty() && ec == std::errc() && ptr == t.data() + t.size();
}

void tidy(std::vector<double>& times, int neuron, ParseNotes& notes) {
    if (!std::is_sorted(times.begin(), times.end())) {
        std::sort(times.begin(), times.end());
        notes.resorted = true;
        notes.messages.push_back("neuron " + std::to_string(neuron) + ": unsorted times were sorted");
    }
    const auto before = times.size();
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (const auto removed = static_cast<int>(before - times.size()); removed > 0) {
        notes.duplicates_removed += removed;
        notes.messages.push_back("neuron " + std::to_string(neuron) + ": dropped " +
                                 std::to_string(removed) + " duplicate timestamps");
    }
}

std::vector<std::vector<double>> read_pairs_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::map<long, std::vector<double>> by_id;
    std::string line;
    int line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        const auto comma = line.find(',');
        long id = 0;
        double t = 0.0;
        const bool ok = comma != std::string::npos && parse_number(line.substr(0, comma), id) &&
                        parse_number(line.substr(comma + 1), t) && std::isfinite(t);
        if (!ok) {
            if (first) {  // header line
                first = false;
                continue;
            }
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 'neuron_id,time_s'");
        }
        first = false;
        if (id < 0)
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": negative neuron id");
        by_id[id].push_back(t);
    }
    if (by_id.empty()) throw InputError(path.string() + ": no spikes found");
    const long n = by_id.rbegin()->first + 1;
    std::vector<std::vector<double>> spikes(static_cast<std::size_t>(n));
    for (auto& [id, times] : by_id) spikes[static_cast<std::size_t>(id)] = std::move(times);
    return spikes;
}

std::vector<std::vector<double>> read_time_lists(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError(dir.string() + ": no spike-time files");
    std::vector<std::vector<double>> spikes;
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw InputError("cannot open " + file.string());
        std::vector<double> times;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                double t = 0.0;
                if (!parse_number(tok, t) || !std::isfinite(t))
                    throw InputError(file.string() + ":" + std::to_string(line_no) +
                                     ": cannot parse '" + tok + "'");
                times.push_back(t);
            }
        }
        spikes.push_back(std::move(times));
    }
    return spikes;
}

}  // namespace

TimestampSet parse_timestamps(const fs::path& path, ParseNotes* notes) {
    ParseNotes local;
    ParseNotes& out_notes = notes ? *notes : local;
    TimestampSet ts;
    ts.spikes = fs::is_directory(path) ? read_time_lists(path) : read_pairs_csv(path);
    for (int i = 0; i < ts.n_neurons(); ++i) {
        if (ts.spikes[i].empty())
            throw InputError("neuron with no spikes: neuron " + std::to_string(i));
        tidy(ts.spikes[i], i, out_notes);
    }
    double first = ts.spikes[0].front(), last = ts.spikes[0].back();
    for (const auto& s : ts.spikes) {
        first = std::min(first, s.front());
        last = std::max(last, s.back());
    }
    ts.t_start = std::min(0.0, first);
    ts.t_end = last;
    validate(ts);
    return ts;
}

void validate(const TimestampSet& ts) {
    if (ts.spikes.empty()) throw InputError("timestamp set has no neurons");
    if (!(ts.t_end >= ts.t_start)) throw InputError("recording span is empty");
    for (int i = 0; i < ts.n_neurons(); ++i) {
        const auto& s = ts.spikes[i];
        if (s.empty()) throw InputError("neuron with no spikes: neuron " + std::to_string(i));
        if (!std::is_sorted(s.begin(), s.end()))
            throw InputError("spike times of neuron " + std::to_string(i) + " are not sorted");
        if (s.front() < ts.t_start || s.back() > ts.t_end)
            throw InputError("spike of neuron " + std::to_string(i) + " outside the recording span");
    }
}

Eigen::VectorXd firing_rates(const TimestampSet& ts) {
    if (!(ts.duration() > 0.0)) throw InputError("firing rates need a positive duration");
    Eigen::VectorXd rates(ts.n_neurons());
    for (int i = 0; i < ts.n_neurons(); ++i)
        rates(i) = static_cast<double>(ts.spikes[i].size()) / ts.duration();
    return rates;
}

long bin_index(double t, double t_start, double bin_s) {
    auto b = static_cast<long>(std::floor((t - t_start) / bin_s));
    // Settle ties against the interval edges exactly as they are computed.
    while (t_start + static_cast<double>(b + 1) * bin_s <= t) ++b;
    while (b > 0 && t_start + static_cast<double>(b) * bin_s > t) --b;
    return b;
}

BinnedRecording bin_recording(const TimestampSet& ts, double bin_ms) {
    if (!(bin_ms > 0.0) || !std::isfinite(bin_ms)) throw InputError("bin size must be positive");
    validate(ts);
    const double bin_s = bin_ms / 1000.0;
    // Smallest bin count whose right edge reaches t_end.
    long n_bins = std::max(0L, static_cast<long>(std::floor(ts.duration() / bin_s)) - 1);
    while (ts.t_start + static_cast<double>(n_bins) * bin_s < ts.t_end) ++n_bins;
    // A spike exactly at t_end (the default span ends on the last spike) needs its own bin.
    for (const auto& train : ts.spikes)
        if (!train.empty()) n_bins = std::max(n_bins, bin_index(train.back(), ts.t_start, bin_s) + 1);

    BinnedRecording rec;
    rec.t_start = ts.t_start;
    rec.bin_ms = bin_ms;
    rec.bins = SpikeMatrix::Zero(ts.n_neurons(), n_bins);
    rec.collapsed_per_neuron = Eigen::VectorXi::Zero(ts.n_neurons());
    for (int i = 0; i < ts.n_neurons(); ++i) {
        for (double t : ts.spikes[i]) {
            const long b = bin_index(t, ts.t_start, bin_s);
            if (rec.bins(i, b))
                ++rec.collapsed_per_neuron(i);
            else
                rec.bins(i, b) = 1;
        }
    }
    rec.collapsed_spikes = rec.collapsed_per_neuron.sum();
    return rec;
}

TimestampSet bin_centers(const BinnedRecording& rec) {
    const double bin_s = rec.bin_ms / 1000.0;
    TimestampSet ts;
    ts.t_start = rec.t_start;
    ts.t_end = rec.t_start + static_cast<double>(rec.bins.cols()) * bin_s;
    ts.spikes.resize(rec.bins.rows());
    for (Eigen::Index i = 0; i < rec.bins.rows(); ++i)
        for (Eigen::Index b = 0; b < rec.bins.cols(); ++b)
            if (rec.bins(i, b)) ts.spikes[i].push_back(rec.t_start + (static_cast<double>(b) + 0.5) * bin_s);
    return ts;
}

IngestResult split_recording(const BinnedRecording& rec, int memory_cap) {
    if (memory_cap < 1) throw InputError("memory cap K must be >= 1");
    const auto n = static_cast<int>(rec.bins.rows());
    const auto n_bins = static_cast<int>(rec.bins.cols());
    if (n_bins < memory_cap + 2)
        throw InputError("recording has " + std::to_string(n_bins) + " bins, fewer than K+2 = " +
                         std::to_string(memory_cap + 2));

    // First c with a spike of every neuron in bins [c-K, c-1] (clipped at 0).
    int start = -1;
    {
        std::vector<int> last(n, -1);
        for (int c = 1; c < n_bins; ++c) {
            for (int i = 0; i < n; ++i)
                if (rec.bins(i, c - 1)) last[i] = c - 1;
            const bool all = std::all_of(last.begin(), last.end(),
                                         [&](int l) { return l >= 0 && l >= c - memory_cap; });
            if (all) {
                start = c;
                break;
            }
        }
    }

    IngestReport report;
    report.n_bins = n_bins;
    report.collapsed_spikes = rec.collapsed_spikes;
    const int first_observed = start >= 0 ? start : memory_cap;
    report.first_observed_bin = first_observed;
    const int horizon = n_bins - first_observed;

    SpikeMatrix data = SpikeMatrix::Zero(n, memory_cap + horizon);
    const int natural = std::min(first_observed, memory_cap);
    data.middleCols(memory_cap - natural, natural + horizon) =
        rec.bins.middleCols(first_observed - natural, natural + horizon);
    if (natural < memory_cap) report.virtual_past = true;
    for (int i = 0; i < n; ++i) {
        if ((data.row(i).head(memory_cap).array() == 0).all()) {
            data(i, 0) = 1;
            ++report.virtual_spikes;
            report.virtual_past = true;
        }
    }
    return {SpikeSample(std::move(data), memory_cap, report.virtual_past), report};
}

IngestResult bin_spikes(const TimestampSet& ts, double bin_ms, int memory_cap) {
    return split_recording(bin_recording(ts, bin_ms), memory_cap);
}

}  // namespace neurograph
