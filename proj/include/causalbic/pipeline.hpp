#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "causalbic/likelihood.hpp"
#include "causalbic/metrics.hpp"
#include "causalbic/search.hpp"

namespace causalbic {

struct FitReport {
    FittedModel fitted;
    EssentialGraph essential;
    SearchTrace trace;
};

/// stats → search → MLE on the chosen DAG → essential graph.
FitReport run_fit(const Dataset& data, const TargetFamily& family, SearchMethod method,
                  const SearchConfig& config);

/// Writes model.txt, essential.txt, bic.txt and trace.txt into `dir`.
void write_fit_report(const FitReport& report, const std::filesystem::path& dir);

struct ExperimentConfig {
    int p = 10;
    double expected_degree = 1.8;
    std::vector<std::size_t> n_grid{100, 1000, 10000};
    int k = 5;  ///< number of single-vertex targets
    int replicates_per_target = 2;
    std::vector<double> mu_grid{10.0};
    double tau2 = 0.04;
    std::uint64_t seed = 0;
    SearchMethod method = SearchMethod::Greedy;
    int replicates = 10;
    int threads = 0;  ///< 0: hardware concurrency
    bool record_runtime = false;

    std::size_t interventional_rows() const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(replicates_per_target);
    }

    /// Throws ParameterError (empty grids, n < n_int, k > p, ...).
    void validate() const;

    /// Assigns one `key = value` setting; unknown keys or bad values throw ParameterError.
    void set(const std::string& key, const std::string& value);
};

/// Flat `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);

struct ResultRow {
    int replicate;
    std::size_t n;
    double mu;
    int p;
    int k;
    std::size_t shd;
    double runtime_ms;
    ConfusionCounts skeleton;
    ConfusionCounts directed;
};

struct SummaryRow {
    std::size_t n;
    double mu;
    std::size_t count;
    double median_shd;
    double exact_recovery_fraction;
};

/// For each replicate: draw DAG, normalized model and k targets; for each grid
/// point simulate, estimate, and compare with the true essential graph. Rows
/// sorted by (replicate, n, mu).
std::vector<ResultRow> run_consistency_experiment(const ExperimentConfig& config);

/// Median SHD and exact-recovery fraction per (n, mu), sorted.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

double median(std::vector<double> values);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_runtime);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace causalbic
