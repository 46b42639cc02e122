#include "causalbic/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "causalbic/csv.hpp"
#include "causalbic/errors.hpp"
#include "causalbic/rng.hpp"

namespace causalbic {

FitReport run_fit(const Dataset& data, const TargetFamily& family, SearchMethod method, const SearchConfig& config) {
    Estimate estimate = estimate_essential_graph(data, family, config, method);
    const LocalStats local = local_stats(sufficient_stats(data));
    FittedModel fitted = mle_given_dag(estimate.dag, local, config.resolved_penalty(local.total()));
    return {std::move(fitted), std::move(estimate.essential), std::move(estimate.trace)};
}

void write_fit_report(const FitReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name);
        if (!out) throw InputError("cannot write " + (dir / name).string());
        out << text;
    };
    write("model.txt", format_model(report.fitted.model));
    write("essential.txt", format_essential_graph(report.essential));
    write("bic.txt", "bic " + format_double(report.fitted.bic) + "\nlog_likelihood " +
                         format_double(report.fitted.log_likelihood) + "\n");
    write("trace.txt", format_trace(report.trace));
}

void ExperimentConfig::validate() const {
    if (p < 1 || p > kMaxVertices) throw ParameterError("p must lie in [1, 64]");
    if (!(expected_degree >= 0.0) || expected_degree > p - 1) throw ParameterError("expected_degree must lie in [0, p - 1]");
    if (n_grid.empty() || mu_grid.empty()) throw ParameterError("n_grid and mu_grid must be nonempty");
    if (k < 0 || k > p) throw ParameterError("k must lie in [0, p]");
    if (replicates_per_target < 1) throw ParameterError("replicates_per_target must be positive");
    if (!(tau2 > 0.0)) throw ParameterError("tau2 must be positive");
    if (replicates < 1) throw ParameterError("replicates must be positive");
    if (threads < 0) throw ParameterError("threads must be nonnegative");
    for (std::size_t n : n_grid) {
        if (n < interventional_rows()) {
            throw ParameterError("n = " + std::to_string(n) + " is smaller than the " +
                                 std::to_string(interventional_rows()) + " interventional rows");
        }
        if (n == 0) throw ParameterError("n must be positive");
    }
}

namespace {

template <class T>
T parse_scalar(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    if (!(in >> out) || !(in >> std::ws).eof()) {
        throw ParameterError("bad value '" + value + "' for key '" + key + "'");
    }
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(parse_scalar<T>(key, item));
    if (out.empty()) throw ParameterError("empty list for key '" + key + "'");
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "p") p = parse_scalar<int>(key, value);
    else if (key == "expected_degree") expected_degree = parse_scalar<double>(key, value);
    else if (key == "n_grid") n_grid = parse_list<std::size_t>(key, value);
    else if (key == "k") k = parse_scalar<int>(key, value);
    else if (key == "replicates_per_target") replicates_per_target = parse_scalar<int>(key, value);
    else if (key == "mu_grid") mu_grid = parse_list<double>(key, value);
    else if (key == "tau2") tau2 = parse_scalar<double>(key, value);
    else if (key == "seed") seed = parse_scalar<std::uint64_t>(key, value);
    else if (key == "method") method = parse_search_method(value);
    else if (key == "replicates") replicates = parse_scalar<int>(key, value);
    else if (key == "threads") threads = parse_scalar<int>(key, value);
    else if (key == "record_runtime") record_runtime = parse_scalar<int>(key, value) != 0;
    else throw ParameterError("unknown configuration key '" + key + "'");
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

namespace {

std::vector<ResultRow> run_replicate(const ExperimentConfig& config, int replicate) {
    const CounterRng stream = CounterRng(config.seed).split(static_cast<std::uint64_t>(replicate));
    const Dag truth = sample_random_dag(config.p, config.expected_degree, stream.split(0)());
    const GaussianCausalModel model = sample_normalized_model(truth, stream.split(1)());

    CounterRng pick = stream.split(2);
    std::vector<int> vertices(static_cast<std::size_t>(config.p));
    for (int v = 0; v < config.p; ++v) vertices[static_cast<std::size_t>(v)] = v;
    for (int i = 0; i < config.k; ++i) {
        const auto remaining = static_cast<std::uint64_t>(config.p - i);
        std::swap(vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(i) + pick() % remaining]);
    }
    std::vector<int> intervened(vertices.begin(), vertices.begin() + config.k);
    std::sort(intervened.begin(), intervened.end());

    std::vector<ResultRow> rows;
    for (std::size_t a = 0; a < config.n_grid.size(); ++a) {
        const std::size_t n = config.n_grid[a];
        std::vector<InterventionTarget> sequence;
        std::vector<InterventionTarget> family_targets;
        for (int v : intervened) {
            family_targets.push_back(InterventionTarget(singleton(v)));
            for (int r = 0; r < config.replicates_per_target; ++r) sequence.push_back(InterventionTarget(singleton(v)));
        }
        const std::size_t observational = n - sequence.size();
        if (observational > 0) family_targets.push_back(InterventionTarget{});
        sequence.resize(n, InterventionTarget{});
        const TargetFamily family(family_targets);
        const EssentialGraph true_essential = essential_graph(truth, family);

        for (std::size_t b = 0; b < config.mu_grid.size(); ++b) {
            const double mu = config.mu_grid[b];
            const InterventionSpec spec(mu, config.tau2);
            const std::uint64_t data_seed = stream.split(1000 + a * config.mu_grid.size() + b)();
            const auto start = std::chrono::steady_clock::now();
            const Dataset data = sample_dataset(model, sequence, spec, data_seed);
            const Estimate estimate = estimate_essential_graph(data, family, SearchConfig{}, config.method);
            const double runtime =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            rows.push_back({replicate, n, mu, config.p, config.k, shd(true_essential, estimate.essential), runtime,
                            skeleton_confusion(true_essential, estimate.essential),
                            directed_confusion(true_essential, estimate.essential)});
        }
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> run_consistency_experiment(const ExperimentConfig& config) {
    config.validate();
    const int workers = std::max(1, std::min(config.replicates, config.threads > 0
                                                                     ? config.threads
                                                                     : static_cast<int>(std::thread::hardware_concurrency())));
    std::vector<std::vector<ResultRow>> per_replicate(static_cast<std::size_t>(config.replicates));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        for (int r = next++; r < config.replicates; r = next++) {
            try {
                per_replicate[static_cast<std::size_t>(r)] = run_replicate(config, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<ResultRow> rows;
    for (auto& chunk : per_replicate) rows.insert(rows.end(), chunk.begin(), chunk.end());
    std::sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
        return std::tie(x.replicate, x.n, x.mu) < std::tie(y.replicate, y.n, y.mu);
    });
    return rows;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ParameterError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::size_t, double>, std::vector<double>> groups;
    for (const ResultRow& row : rows) groups[{row.n, row.mu}].push_back(static_cast<double>(row.shd));
    std::vector<SummaryRow> out;
    for (const auto& [key, shds] : groups) {
        const auto exact = static_cast<double>(std::count(shds.begin(), shds.end(), 0.0));
        out.push_back({key.first, key.second, shds.size(), median(shds), exact / static_cast<double>(shds.size())});
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_runtime) {
    out << "replicate,n,mu,p,k,shd,skel_tp,skel_fp,skel_fn,skel_tn,dir_tp,dir_fp,dir_fn,dir_tn";
    if (include_runtime) out << ",runtime_ms";
    out << '\n';
    for (const ResultRow& r : rows) {
        out << r.replicate << ',' << r.n << ',' << format_double(r.mu) << ',' << r.p << ',' << r.k << ',' << r.shd
            << ',' << r.skeleton.true_positives << ',' << r.skeleton.false_positives << ','
            << r.skeleton.false_negatives << ',' << r.skeleton.true_negatives << ',' << r.directed.true_positives
            << ',' << r.directed.false_positives << ',' << r.directed.false_negatives << ','
            << r.directed.true_negatives;
        if (include_runtime) out << ',' << format_double(r.runtime_ms);
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "n,mu,count,median_shd,exact_recovery_fraction\n";
    for (const SummaryRow& r : rows) {
        out << r.n << ',' << format_double(r.mu) << ',' << r.count << ',' << format_double(r.median_shd) << ','
            << format_double(r.exact_recovery_fraction) << '\n';
    }
}

}  // namespace causalbic
