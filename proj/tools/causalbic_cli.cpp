// Command-line front end: simulate data, fit a dataset, run the consistency
// experiment, or print the essential graph of a model.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 capacity guard.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalbic/csv.hpp"
#include "causalbic/equivalence.hpp"
#include "causalbic/errors.hpp"
#include "causalbic/pipeline.hpp"

namespace {

using namespace causalbic;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCapacity = 4;

const std::vector<std::string> kExperimentKeys{
    "p", "expected_degree", "n_grid", "k", "replicates_per_target", "mu_grid",
    "tau2", "seed", "method", "replicates", "threads", "record_runtime"};

InterventionTarget parse_target_option(const std::string& text, int p) {
    if (text == "obs") return InterventionTarget{};
    VertexSet members = 0;
    std::string label;
    std::istringstream labels(text);
    while (std::getline(labels, label, ';')) {
        if (label.empty()) continue;
        char* end = nullptr;
        const long v = std::strtol(label.c_str(), &end, 10);
        if (end != label.c_str() + label.size()) throw ParameterError("bad target label '" + label + "'");
        if (v < 1 || v > p) throw ParameterError("target label " + label + " outside 1.." + std::to_string(p));
        members |= singleton(static_cast<int>(v - 1));
    }
    return InterventionTarget(members);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized maximum-likelihood causal structure learning from interventional Gaussian data"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Draw a random normalized model and an interventional dataset");
    int sim_p = 5;
    double sim_degree = 1.8;
    std::size_t sim_n = 100;
    int sim_k = 0;
    int sim_reps = 1;
    double sim_mu = 10.0;
    double sim_tau2 = 0.04;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out = "data.csv";
    std::string sim_model_out;
    simulate->add_option("--p", sim_p, "Number of variables");
    simulate->add_option("--expected_degree", sim_degree, "Expected skeleton degree");
    simulate->add_option("--n", sim_n, "Total rows");
    simulate->add_option("--k", sim_k, "Number of single-vertex intervention targets");
    simulate->add_option("--replicates_per_target", sim_reps, "Rows per intervention target");
    simulate->add_option("--mu", sim_mu, "Intervention mean");
    simulate->add_option("--tau2", sim_tau2, "Intervention variance");
    simulate->add_option("--seed", sim_seed, "Random seed")->required();
    simulate->add_option("--out", sim_out, "Dataset CSV path");
    simulate->add_option("--model_out", sim_model_out, "Where to write the generating model");

    // fit
    auto* fit = app.add_subcommand("fit", "Estimate the essential graph and MLE from a dataset CSV");
    std::string fit_data;
    std::string fit_method = "greedy";
    std::string fit_out = "fit";
    std::optional<int> fit_max_parents;
    std::optional<double> fit_penalty;
    fit->add_option("--data", fit_data, "Dataset CSV")->required();
    fit->add_option("--method", fit_method, "greedy or dp");
    fit->add_option("--out", fit_out, "Output directory");
    fit->add_option("--max_parents", fit_max_parents, "Parent-set size bound");
    fit->add_option("--penalty", fit_penalty, "Per-edge penalty (default: 0.5 log n)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run the simulation study over a grid");
    std::string exp_config;
    std::string exp_out = "results.csv";
    std::string exp_summary = "summary.csv";
    std::map<std::string, std::string> exp_flags;
    experiment->add_option("--config", exp_config, "key = value configuration file");
    experiment->add_option("--out", exp_out, "Raw results CSV");
    experiment->add_option("--summary", exp_summary, "Per-grid-point summary CSV");
    for (const std::string& key : kExperimentKeys) {
        experiment->add_option_function<std::string>(
            "--" + key, [&exp_flags, key](const std::string& v) { exp_flags[key] = v; }, "Overrides '" + key + "'");
    }

    // essential
    auto* essential = app.add_subcommand("essential", "Print the interventional essential graph of a model's DAG");
    std::string ess_model;
    std::vector<std::string> ess_targets;
    essential->add_option("--model", ess_model, "Model text file")->required();
    essential->add_option("--target", ess_targets,
                          "Intervention target, semicolon-separated labels; obs or empty for observational")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) {
            const Dag dag = sample_random_dag(sim_p, sim_degree, *sim_seed);
            const GaussianCausalModel model = sample_normalized_model(dag, *sim_seed + 1);
            if (sim_k < 0 || sim_k > sim_p) throw ParameterError("k must lie in [0, p]");
            std::vector<InterventionTarget> sequence;
            for (int v = 0; v < sim_k; ++v) {
                for (int r = 0; r < sim_reps; ++r) sequence.push_back(InterventionTarget(singleton(v)));
            }
            if (sequence.size() > sim_n) throw ParameterError("n smaller than the interventional rows");
            sequence.resize(sim_n, InterventionTarget{});
            const Dataset data = sample_dataset(model, sequence, InterventionSpec(sim_mu, sim_tau2), *sim_seed + 2);
            std::ofstream out(sim_out);
            if (!out) throw InputError("cannot write " + sim_out);
            write_dataset_csv(out, data);
            if (!sim_model_out.empty()) {
                std::ofstream model_out(sim_model_out);
                model_out << format_model(model);
            }
        } else if (*fit) {
            const Dataset data = read_dataset_csv(std::filesystem::path(fit_data));
            SearchConfig config;
            config.max_parents = fit_max_parents;
            config.penalty_weight = fit_penalty;
            const TargetFamily family = family_from_dataset(data);
            if (!conservative(family, data.dimension())) {
                throw InputError("some vertex is intervened on in every row; its mechanism cannot be estimated");
            }
            const FitReport report = run_fit(data, family, parse_search_method(fit_method), config);
            write_fit_report(report, fit_out);
            std::cout << "bic " << format_double(report.fitted.bic) << '\n' << format_essential_graph(report.essential);
        } else if (*experiment) {
            ExperimentConfig config;
            std::map<std::string, std::string> settings;
            if (!exp_config.empty()) {
                std::ifstream in(exp_config);
                if (!in) throw ParameterError("cannot open config " + exp_config);
                settings = parse_key_values(in);
            }
            for (const auto& [key, value] : exp_flags) settings[key] = value;
            if (!exp_flags.contains("seed")) throw ParameterError("--seed is mandatory for experiment");
            for (const auto& [key, value] : settings) config.set(key, value);
            const auto rows = run_consistency_experiment(config);
            std::ofstream out(exp_out);
            write_results_csv(out, rows, config.record_runtime);
            std::ofstream summary(exp_summary);
            write_summary_csv(summary, summarize(rows));
            write_summary_csv(std::cout, summarize(rows));
        } else if (*essential) {
            const GaussianCausalModel model = parse_model(read_file(ess_model));
            std::vector<InterventionTarget> targets;
            for (const std::string& t : ess_targets) targets.push_back(parse_target_option(t, model.size()));
            std::cout << format_essential_graph(essential_graph(model.dag(), TargetFamily(targets)));
        }
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DegenerateFitError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
