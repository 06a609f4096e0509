// neurograph: simulate | estimate | select | experiment | ingest | lif

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "neurograph/error.hpp"
#include "neurograph/estimator.hpp"
#include "neurograph/experiments.hpp"
#include "neurograph/ingestion.hpp"
#include "neurograph/io.hpp"
#include "neurograph/lif.hpp"
#include "neurograph/parallel.hpp"
#include "neurograph/selection.hpp"
#include "neurograph/simulator.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace neurograph;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class LogLevel { Quiet, Info, Debug };

struct Globals {
    std::uint64_t seed = kDefaultBaseSeed;
    unsigned threads = default_workers();
    LogLevel log_level = LogLevel::Info;
    std::string manifest;  // explicit manifest path, else <output dir>/manifest.json
};

Globals g;

void info(const std::string& msg) {
    if (g.log_level != LogLevel::Quiet) std::cerr << msg << '\n';
}

void debug(const std::string& msg) {
    if (g.log_level == LogLevel::Debug) std::cerr << msg << '\n';
}

// Config files: a JSON object when the first non-blank character is '{',
// TOML/INI otherwise. Nested objects map to subcommand sections.
class JsonOrTomlConfig : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream toml(text);
            return CLI::ConfigTOML::from_config(toml);
        }
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> out;
        flatten(out, j, "", {});
        return out;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(std::vector<CLI::ConfigItem>& out, const json& j, const std::string& name,
                        std::vector<std::string> parents) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) flatten(out, *it, it.key(), parents);
            return;
        }
        CLI::ConfigItem item;
        item.parents = std::move(parents);
        item.name = name;
        if (j.is_array())
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        else if (!j.is_null())
            item.inputs.push_back(scalar(j));
        out.push_back(std::move(item));
    }
};

fs::path output_dir_of(const fs::path& out) {
    return out.has_parent_path() ? out.parent_path() : fs::path(".");
}

void write_manifest(const fs::path& dir, const std::string& command, json params,
                    std::chrono::steady_clock::time_point started) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json m = {{"command", command},
              {"parameters", std::move(params)},
              {"seed", g.seed},
              {"threads", g.threads},
              {"versions",
               {{"neurograph", kVersion},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"compiler", __VERSION__}}},
              {"wall_time_s", wall}};
    const fs::path path = g.manifest.empty() ? dir / "manifest.json" : fs::path(g.manifest);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InputError("cannot write manifest " + path.string());
    out << m.dump(2) << '\n';
}

SpikeSample load_sample(const std::string& path, std::optional<int> memory_cap) {
    SpikeSample sample = read_sample(path);
    if (memory_cap && *memory_cap != sample.memory_cap())
        throw InputError("--K " + std::to_string(*memory_cap) + " does not match the sample's memory cap " +
                         std::to_string(sample.memory_cap()));
    if (sample.horizon() < sample.n_neurons())
        info("warning: T = " + std::to_string(sample.horizon()) + " is smaller than N = " +
             std::to_string(sample.n_neurons()) + "; estimates may be unstable");
    return sample;
}

json fit_json(const FitResult& f) {
    return {{"neuron", f.neuron},
            {"weights", std::vector<double>(f.weights.data(), f.weights.data() + f.weights.size())},
            {"converged", f.converged},
            {"iterations", f.iterations},
            {"final_grad_norm", f.final_grad_norm},
            {"hit_bound", f.hit_bound},
            {"log_lik", f.log_lik}};
}

fs::path sibling_json(const fs::path& p) {
    fs::path out = p;
    out.replace_extension(".json");
    return out;
}

void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void add_fit_options(CLI::App* cmd, FitOptions& fit) {
    cmd->add_option("--tol", fit.tol, "Gradient sup-norm tolerance")->capture_default_str();
    cmd->add_option("--box", fit.box, "Bound on |weight| (separation guard)")->capture_default_str();
    cmd->add_option("--max-iter", fit.max_iter, "Newton iteration limit")->capture_default_str();
}

json fit_options_json(const FitOptions& fit) {
    return {{"tol", fit.tol}, {"box", fit.box}, {"max_iter", fit.max_iter}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spike-train simulation, synaptic weight estimation and interaction graph selection"};
    app.set_version_flag("--version", kVersion);
    app.config_formatter(std::make_shared<JsonOrTomlConfig>());
    app.set_config("--config", "", "TOML or JSON config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker count (env NEUROGRAPH_THREADS)")
        ->capture_default_str();
    app.add_option("--log-level", g.log_level, "quiet, info or debug")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, LogLevel>{{"quiet", LogLevel::Quiet},
                                            {"info", LogLevel::Info},
                                            {"debug", LogLevel::Debug}},
            CLI::ignore_case));
    app.add_option("--manifest", g.manifest, "Manifest path (default: <output dir>/manifest.json)");

    const auto started = std::chrono::steady_clock::now();

    // simulate ---------------------------------------------------------------
    struct {
        int scenario = 0;
        std::string weights;
        int horizon = 1000;
        int memory_cap = 50;
        std::string init = "zero";
        double init_p = 0.5;
        std::string format;
        std::string out;
        std::uint64_t layout_seed = kDefaultBaseSeed;
    } sim;
    auto* c_sim = app.add_subcommand("simulate", "Simulate a spike sample from a weight matrix");
    auto* o_scen = c_sim->add_option("--scenario", sim.scenario, "Built-in scenario 1..4")
                       ->check(CLI::Range(1, 4));
    auto* o_w = c_sim->add_option("--weights", sim.weights, "Weight matrix CSV (row j, column i = w_{j->i})")
                    ->check(CLI::ExistingFile);
    o_scen->excludes(o_w);
    c_sim->add_option("--T", sim.horizon, "Observed bins")->capture_default_str()->check(CLI::PositiveNumber);
    c_sim->add_option("--K", sim.memory_cap, "Memory cap / initial past length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_sim->add_option("--init", sim.init, "Initial past: zero (all spike at t=0) or bernoulli")
        ->capture_default_str()
        ->check(CLI::IsMember({"zero", "bernoulli"}));
    c_sim->add_option("--init-p", sim.init_p, "Spike probability for the bernoulli past")->capture_default_str();
    c_sim->add_option("--format", sim.format, "csv or bin (default: from extension)")
        ->check(CLI::IsMember({"csv", "bin"}));
    c_sim->add_option("--layout-seed", sim.layout_seed, "Seed for the scenario 4 connection layout")
        ->capture_default_str();
    c_sim->add_option("--out", sim.out, "Output sample path")->required();

    // estimate ---------------------------------------------------------------
    struct {
        std::string input;
        std::optional<int> memory_cap;
        FitOptions fit;
        std::string out;
    } est;
    auto* c_est = app.add_subcommand("estimate", "Maximum likelihood estimate of the weight matrix");
    c_est->add_option("--input", est.input, "Spike sample (.bin or .csv)")->required()->check(CLI::ExistingFile);
    c_est->add_option("--K", est.memory_cap, "Expected memory cap (checked against the sample)");
    add_fit_options(c_est, est.fit);
    c_est->add_option("--out", est.out, "Estimated matrix CSV; diagnostics go to the .json sibling")->required();

    // select -----------------------------------------------------------------
    struct {
        std::string input;
        std::optional<int> memory_cap;
        double epsilon = 1e-4;
        std::optional<double> alpha;
        FitOptions fit;
        std::string out;
        std::string sensitivities;
    } sel;
    auto* c_sel = app.add_subcommand("select", "Estimate interaction neighborhoods");
    c_sel->add_option("--input", sel.input, "Spike sample (.bin or .csv)")->required()->check(CLI::ExistingFile);
    c_sel->add_option("--K", sel.memory_cap, "Expected memory cap (checked against the sample)");
    c_sel->add_option("--epsilon", sel.epsilon, "Sensitivity threshold")->capture_default_str();
    c_sel->add_option("--alpha", sel.alpha,
                      "Derive epsilon = chi2_1 quantile(1-alpha) / (2T) instead of --epsilon");
    add_fit_options(c_sel, sel.fit);
    c_sel->add_option("--out", sel.out, "0/1 adjacency CSV, entry (j,i) = 1 iff j -> i")->required();
    c_sel->add_option("--sensitivities", sel.sensitivities, "Sensitivity matrix CSV");

    // experiment -------------------------------------------------------------
    struct {
        int scenario = 1;
        int replicas = 100;
        std::vector<int> horizons{500, 1000, 5000, 10000};
        std::vector<double> epsilons{1e-5, 1e-4, 1e-3, 1e-2};
        int memory_cap = 50;
        bool no_select = false;
        FitOptions fit;
        std::string out;
    } exp;
    auto* c_exp = app.add_subcommand("experiment", "Monte Carlo consistency experiment");
    c_exp->add_option("--scenario", exp.scenario, "Scenario 1..4")->required()->check(CLI::Range(1, 4));
    c_exp->add_option("--replicas", exp.replicas, "Replicas per sample size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_exp->add_option("--T", exp.horizons, "Sample sizes")->delimiter(',')->capture_default_str()->check(CLI::PositiveNumber);
    c_exp->add_option("--epsilon", exp.epsilons, "Selection thresholds")->delimiter(',')->capture_default_str();
    c_exp->add_option("--K", exp.memory_cap, "Memory cap")->capture_default_str()->check(CLI::PositiveNumber);
    c_exp->add_flag("--no-select", exp.no_select, "Only estimate weights");
    add_fit_options(c_exp, exp.fit);
    c_exp->add_option("--out", exp.out, "Output directory")->required();

    // ingest -----------------------------------------------------------------
    struct {
        std::string input;
        double bin_ms = 1.0;
        int memory_cap = 50;
        std::optional<double> t_start, t_end;
        std::string format;
        std::string out;
    } ing;
    auto* c_ing = app.add_subcommand("ingest", "Bin spike timestamps into a spike sample");
    c_ing->add_option("--input", ing.input, "CSV of neuron_id,time_s or a directory of per-neuron time lists")
        ->required()
        ->check(CLI::ExistingPath);
    c_ing->add_option("--bin-ms", ing.bin_ms, "Bin width in ms")->capture_default_str();
    c_ing->add_option("--K", ing.memory_cap, "Memory cap / initial past length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_ing->add_option("--t-start", ing.t_start, "Recording start in s (default min(0, first spike))");
    c_ing->add_option("--t-end", ing.t_end, "Recording end in s (default last spike)");
    c_ing->add_option("--format", ing.format, "csv or bin (default: from extension)")
        ->check(CLI::IsMember({"csv", "bin"}));
    c_ing->add_option("--out", ing.out, "Output sample path")->required();

    // lif --------------------------------------------------------------------
    struct {
        std::string weights;
        LifParams params;
        std::optional<double> target_hz;
        std::string out;
        std::string spikes;
    } lif;
    auto* c_lif = app.add_subcommand("lif", "Replay a weight matrix through a LIF microcircuit");
    c_lif->add_option("--weights", lif.weights, "Weight matrix CSV")->required()->check(CLI::ExistingFile);
    c_lif->add_option("--duration-ms", lif.params.duration, "Simulated time")->capture_default_str();
    c_lif->add_option("--dt-ms", lif.params.dt, "Integration step")->capture_default_str();
    c_lif->add_option("--drive-hz", lif.params.drive_rate_hz, "Poisson background rate per neuron")
        ->capture_default_str();
    c_lif->add_option("--drive-weight", lif.params.drive_weight, "Conductance per background event")
        ->capture_default_str();
    c_lif->add_option("--conductance-scale", lif.params.conductance_scale, "Peak conductance per unit weight")
        ->capture_default_str();
    c_lif->add_option("--clip", lif.params.weight_clip, "Clip weights to [-clip, clip]")->capture_default_str();
    c_lif->add_option("--target-hz", lif.target_hz, "Calibrate the drive rate to this mean firing rate");
    c_lif->add_option("--out", lif.out, "Voltage trace CSV (time_ms, v_1..v_N)")->required();
    c_lif->add_option("--spikes", lif.spikes, "Spike list CSV (default: spikes.csv next to --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*c_sim) {
            if (!o_scen->count() && !o_w->count()) throw InputError("simulate needs --scenario or --weights");
            const WeightMatrix w = sim.scenario ? scenario_matrix(sim.scenario, sim.layout_seed)
                                                : read_matrix_csv(sim.weights);
            SimConfig cfg;
            cfg.horizon = sim.horizon;
            cfg.memory_cap = sim.memory_cap;
            cfg.seed = g.seed;
            cfg.init_mode = sim.init == "zero" ? InitMode::AllSpikeAtZero : InitMode::BernoulliConditioned;
            cfg.init_p = sim.init_p;
            const SpikeSample sample = simulate(w, cfg);
            const fs::path out = sim.out;
            const SampleFormat fmt = sim.format.empty() ? format_from_extension(out)
                                     : sim.format == "csv" ? SampleFormat::Csv
                                                           : SampleFormat::Binary;
            write_sample(sample, out, fmt);
            if (sim.scenario) write_matrix_csv(w, output_dir_of(out) / (out.stem().string() + "_weights.csv"));
            info("wrote " + out.string());
            write_manifest(output_dir_of(out), "simulate",
                           {{"scenario", sim.scenario},
                            {"weights", sim.weights},
                            {"T", sim.horizon},
                            {"K", sim.memory_cap},
                            {"init", sim.init},
                            {"init_p", sim.init_p},
                            {"layout_seed", sim.layout_seed},
                            {"out", sim.out}},
                           started);
        } else if (*c_est) {
            const SpikeSample sample = load_sample(est.input, est.memory_cap);
            const int n = sample.n_neurons();
            std::vector<FitResult> fits(n);
            parallel_for(static_cast<std::size_t>(n), g.threads, [&](std::size_t i) {
                fits[i] = fit_neuron(sample, static_cast<int>(i), est.fit);
            });
            WeightMatrix w = WeightMatrix::Zero(n, n);
            json diag = json::array();
            for (const auto& f : fits) {
                w.col(f.neuron) = f.weights;
                diag.push_back(fit_json(f));
                if (!f.converged) info("warning: neuron " + std::to_string(f.neuron) + " did not converge");
                if (f.hit_bound) info("warning: neuron " + std::to_string(f.neuron) + " hit the weight box");
            }
            const fs::path out = est.out;
            write_matrix_csv(w, out);
            write_json(sibling_json(out), {{"n_neurons", n},
                                           {"memory_cap", sample.memory_cap()},
                                           {"horizon", sample.horizon()},
                                           {"options", fit_options_json(est.fit)},
                                           {"fits", diag}});
            info("wrote " + out.string());
            write_manifest(output_dir_of(out), "estimate",
                           {{"input", est.input}, {"options", fit_options_json(est.fit)}, {"out", est.out}},
                           started);
        } else if (*c_sel) {
            const SpikeSample sample = load_sample(sel.input, sel.memory_cap);
            const double epsilon = sel.alpha ? epsilon_from_alpha(*sel.alpha, sample.horizon()) : sel.epsilon;
            if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
            const GraphSelection graph = select_graph(sample, sel.fit, g.threads);
            const Adjacency adj = threshold_graph(graph.sensitivities, epsilon);
            const fs::path out = sel.out;
            write_matrix_csv(adj.cast<double>(), out);
            const fs::path sens = sel.sensitivities.empty()
                                      ? output_dir_of(out) / (out.stem().string() + "_sensitivities.csv")
                                      : fs::path(sel.sensitivities);
            write_matrix_csv(graph.sensitivities, sens);
            json hoods = json::array();
            for (int i = 0; i < sample.n_neurons(); ++i) {
                std::vector<int> pre;
                for (int j = 0; j < sample.n_neurons(); ++j)
                    if (adj(j, i)) pre.push_back(j);
                hoods.push_back({{"neuron", i}, {"presynaptic", pre}});
            }
            write_json(sibling_json(out), {{"epsilon", epsilon},
                                           {"alpha", sel.alpha ? json(*sel.alpha) : json(nullptr)},
                                           {"horizon", sample.horizon()},
                                           {"optimizer_warnings", graph.optimizer_warnings()},
                                           {"neighborhoods", hoods}});
            info("wrote " + out.string() + " and " + sens.string());
            write_manifest(output_dir_of(out), "select",
                           {{"input", sel.input},
                            {"epsilon", epsilon},
                            {"alpha", sel.alpha ? json(*sel.alpha) : json(nullptr)},
                            {"options", fit_options_json(sel.fit)},
                            {"out", sel.out},
                            {"sensitivities", sens.string()}},
                           started);
        } else if (*c_exp) {
            ScenarioSpec spec = make_scenario(exp.scenario, g.seed);
            spec.replicas = exp.replicas;
            spec.horizons = exp.horizons;
            spec.epsilons = exp.epsilons;
            spec.memory_cap = exp.memory_cap;
            spec.select = !exp.no_select;
            spec.fit = exp.fit;
            for (double e : spec.epsilons)
                if (!(e > 0.0)) throw InputError("epsilon values must be positive");
            const MetricsReport report = monte_carlo(spec, g.threads, [](int horizon, int done, int total) {
                if (done == total || done % 10 == 0)
                    debug("T=" + std::to_string(horizon) + ": " + std::to_string(done) + "/" +
                          std::to_string(total));
            });
            const auto written = write_report(report, exp.out);
            for (const auto& h : report.by_horizon)
                info("T=" + std::to_string(h.horizon) + " mean distance " + format_double(h.mean_frobenius) +
                     (h.failed_replicas ? " (" + std::to_string(h.failed_replicas) + " failed replicas)" : ""));
            write_manifest(exp.out, "experiment",
                           {{"scenario", exp.scenario},
                            {"replicas", exp.replicas},
                            {"T", exp.horizons},
                            {"epsilon", exp.epsilons},
                            {"K", exp.memory_cap},
                            {"select", spec.select},
                            {"options", fit_options_json(exp.fit)},
                            {"base_seed", spec.base_seed},
                            {"outputs", [&] {
                                 json files = json::array();
                                 for (const auto& p : written) files.push_back(p.filename().string());
                                 return files;
                             }()}},
                           started);
        } else if (*c_ing) {
            ParseNotes notes;
            TimestampSet ts = parse_timestamps(ing.input, &notes);
            for (const auto& m : notes.messages) info("notice: " + m);
            if (ing.t_start) ts.t_start = *ing.t_start;
            if (ing.t_end) ts.t_end = *ing.t_end;
            const Eigen::VectorXd rates = firing_rates(ts);
            const IngestResult result = bin_spikes(ts, ing.bin_ms, ing.memory_cap);
            if (result.report.collapsed_spikes > 0)
                info("notice: " + std::to_string(result.report.collapsed_spikes) +
                     " spikes collapsed into already occupied bins");
            if (result.report.virtual_past) info("notice: initial past completed with virtual spikes");
            const fs::path out = ing.out;
            const SampleFormat fmt = ing.format.empty() ? format_from_extension(out)
                                     : ing.format == "csv" ? SampleFormat::Csv
                                                           : SampleFormat::Binary;
            write_sample(result.sample, out, fmt);
            info("wrote " + out.string() + " (N=" + std::to_string(result.sample.n_neurons()) +
                 ", T=" + std::to_string(result.sample.horizon()) + ")");
            write_manifest(output_dir_of(out), "ingest",
                           {{"input", ing.input},
                            {"bin_ms", ing.bin_ms},
                            {"K", ing.memory_cap},
                            {"t_start", ts.t_start},
                            {"t_end", ts.t_end},
                            {"out", ing.out},
                            {"firing_rates_hz", std::vector<double>(rates.data(), rates.data() + rates.size())},
                            {"n_bins", result.report.n_bins},
                            {"first_observed_bin", result.report.first_observed_bin},
                            {"collapsed_spikes", result.report.collapsed_spikes},
                            {"duplicates_removed", notes.duplicates_removed},
                            {"virtual_spikes", result.report.virtual_spikes},
                            {"virtual_past", result.report.virtual_past}},
                           started);
        } else if (*c_lif) {
            const WeightMatrix w = read_matrix_csv(lif.weights);
            const Circuit circuit = build_microcircuit(w, lif.params);
            if (lif.target_hz) {
                lif.params.drive_rate_hz = calibrate_drive(circuit, lif.params, *lif.target_hz, g.seed);
                info("calibrated drive rate " + format_double(lif.params.drive_rate_hz) + " Hz");
            }
            const LifTrace trace = simulate_lif(circuit, lif.params, g.seed);
            const fs::path out = lif.out;
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            {
                std::ofstream f(out);
                if (!f) throw InputError("cannot write " + out.string());
                f << "time_ms";
                for (int i = 0; i < circuit.n_neurons(); ++i) f << ",v" << i + 1;
                f << '\n';
                for (Eigen::Index k = 0; k < trace.voltage.rows(); ++k) {
                    f << format_double(static_cast<double>(k) * trace.dt);
                    for (Eigen::Index i = 0; i < trace.voltage.cols(); ++i)
                        f << ',' << format_double(trace.voltage(k, i));
                    f << '\n';
                }
            }
            const fs::path spikes = lif.spikes.empty() ? output_dir_of(out) / "spikes.csv" : fs::path(lif.spikes);
            {
                std::ofstream f(spikes);
                if (!f) throw InputError("cannot write " + spikes.string());
                f << "neuron,time_ms\n";
                for (std::size_t i = 0; i < trace.spike_times.size(); ++i)
                    for (double t : trace.spike_times[i]) f << i + 1 << ',' << format_double(t) << '\n';
            }
            const Eigen::VectorXd rates = firing_rates(trace);
            info("wrote " + out.string() + " and " + spikes.string());
            write_manifest(output_dir_of(out), "lif",
                           {{"weights", lif.weights},
                            {"duration_ms", lif.params.duration},
                            {"dt_ms", lif.params.dt},
                            {"drive_hz", lif.params.drive_rate_hz},
                            {"drive_weight", lif.params.drive_weight},
                            {"conductance_scale", lif.params.conductance_scale},
                            {"clip", lif.params.weight_clip},
                            {"target_hz", lif.target_hz ? json(*lif.target_hz) : json(nullptr)},
                            {"synapses", circuit.synapse_count()},
                            {"firing_rates_hz", std::vector<double>(rates.data(), rates.data() + rates.size())},
                            {"out", lif.out},
                            {"spikes", spikes.string()}},
                           started);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const CapabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
