#include "neurograph/io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "neurograph/error.hpp"

namespace neurograph {

namespace fs = std::filesystem;

namespace {

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
    for (std::size_t b = 0; b < sizeof(UInt); ++b)
        out.put(static_cast<char>((v >> (8 * b)) & 0xFF));
}

template <typename UInt>
UInt get_le(const std::vector<unsigned char>& buf, std::size_t offset) {
    UInt v = 0;
    for (std::size_t b = 0; b < sizeof(UInt); ++b) v |= static_cast<UInt>(buf[offset + b]) << (8 * b);
    return v;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    return out;
}

std::vector<unsigned char> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& cell, const fs::path& path, int line) {
    const std::string t = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw InputError(path.string() + ":" + std::to_string(line) + ": cannot parse '" + t + "'");
    return v;
}

}  // namespace

void write_sample_bin(const SpikeSample& sample, const fs::path& path) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out.write(kSampleMagic, 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample.n_neurons()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample.memory_cap()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(sample.horizon()));
    const auto& data = sample.data();
    const auto cols = data.cols();
    std::vector<char> row((cols + 7) / 8);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (Eigen::Index c = 0; c < cols; ++c)
            if (data(i, c)) row[c / 8] = static_cast<char>(row[c / 8] | (1u << (c % 8)));
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw InputError("failed writing " + path.string());
}

SpikeSample read_sample_bin(const fs::path& path) {
    const auto buf = slurp(path);
    if (buf.size() < 20 || !std::equal(kSampleMagic, kSampleMagic + 4, buf.begin()))
        throw InputError(path.string() + " is not an NGSP binary spike sample (bad magic bytes)");
    const auto n = get_le<std::uint32_t>(buf, 4);
    const auto k = get_le<std::uint32_t>(buf, 8);
    const auto t = get_le<std::uint64_t>(buf, 12);
    if (n == 0 || k == 0 || t == 0 || k > (1u << 30) || t > (1ull << 34))
        throw InputError(path.string() + ": invalid NGSP header");
    const std::uint64_t cols = k + t;
    const std::uint64_t row_bytes = (cols + 7) / 8;
    if (buf.size() != 20 + row_bytes * n)
        throw InputError(path.string() + ": NGSP payload size does not match header");
    SpikeMatrix data(n, static_cast<Eigen::Index>(cols));
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t base = 20 + row_bytes * i;
        for (std::uint64_t c = 0; c < cols; ++c)
            data(i, static_cast<Eigen::Index>(c)) = (buf[base + c / 8] >> (c % 8)) & 1;
    }
    return SpikeSample(std::move(data), static_cast<int>(k));
}

fs::path sidecar_path(const fs::path& csv_path) {
    fs::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_sample_csv(const SpikeSample& sample, const fs::path& path) {
    {
        auto out = open_out(path);
        const auto& data = sample.data();
        std::string line;
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            line.clear();
            for (Eigen::Index c = 0; c < data.cols(); ++c) {
                if (c) line.push_back(',');
                line.push_back(data(i, c) ? '1' : '0');
            }
            out << line << '\n';
        }
    }
    nlohmann::json meta = {{"n_neurons", sample.n_neurons()},
                           {"memory_cap", sample.memory_cap()},
                           {"horizon", sample.horizon()},
                           {"virtual_past", sample.virtual_past()}};
    auto side = open_out(sidecar_path(path));
    side << meta.dump(2) << '\n';
}

SpikeSample read_sample_csv(const fs::path& path) {
    const fs::path side = sidecar_path(path);
    std::ifstream meta_in(side);
    if (!meta_in) throw InputError("missing sidecar " + side.string() + " for " + path.string());
    nlohmann::json meta;
    try {
        meta_in >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(side.string() + ": " + e.what());
    }
    const int n = meta.value("n_neurons", 0);
    const int k = meta.value("memory_cap", 0);
    const int t = meta.value("horizon", 0);
    const bool virtual_past = meta.value("virtual_past", false);
    if (n < 1 || k < 1 || t < 1) throw InputError(side.string() + ": invalid n_neurons/memory_cap/horizon");

    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    SpikeMatrix data(n, k + t);
    std::string line;
    int row = 0, line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (row >= n) throw InputError(path.string() + ": more rows than n_neurons");
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != k + t)
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(k + t) + " columns");
        for (int c = 0; c < k + t; ++c) {
            const std::string v = trim(cells[c]);
            if (v != "0" && v != "1")
                throw InputError(path.string() + ":" + std::to_string(line_no) +
                                 ": entries must be 0 or 1");
            data(row, c) = v == "1" ? 1 : 0;
        }
        ++row;
    }
    if (row != n) throw InputError(path.string() + ": expected " + std::to_string(n) + " rows");
    return SpikeSample(std::move(data), k, virtual_past);
}

SampleFormat format_from_extension(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") return SampleFormat::Csv;
    if (ext == ".bin") return SampleFormat::Binary;
    throw InputError("cannot infer sample format from '" + path.string() +
                     "' (use .bin for NGSP binary or .csv)");
}

void write_sample(const SpikeSample& sample, const fs::path& path, SampleFormat format) {
    if (format == SampleFormat::Csv)
        write_sample_csv(sample, path);
    else
        write_sample_bin(sample, path);
}

SpikeSample read_sample(const fs::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw InputError("cannot open " + path.string());
    std::array<char, 4> head{};
    probe.read(head.data(), 4);
    const bool magic = probe.gcount() == 4 && std::equal(head.begin(), head.end(), kSampleMagic);
    if (magic || path.extension() == ".bin") return read_sample_bin(path);
    if (path.extension() == ".csv") return read_sample_csv(path);
    throw InputError(path.string() +
                     " is neither an NGSP binary spike sample (bad magic bytes) nor a .csv sample");
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const fs::path& path) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split_csv(line)) row.push_back(parse_double(cell, path, line_no));
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(path.string() + ": empty matrix");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

}  // namespace neurograph
