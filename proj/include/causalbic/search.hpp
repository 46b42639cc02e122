#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalbic/equivalence.hpp"
#include "causalbic/likelihood.hpp"

namespace causalbic {

enum class MoveKind { Insert = 0, Delete = 1, Reverse = 2 };

enum class SearchMethod { Greedy, DynamicProgramming };

struct SearchConfig {
    /// Parent-set size bound; unset means min(p − 1, 8).
    std::optional<int> max_parents;
    std::size_t max_steps = 100'000;
    /// Per-edge penalty; unset means ½ log n.
    std::optional<double> penalty_weight;
    /// Smallest score gain for a greedy move to count as an improvement.
    double min_improvement = 1e-9;
    std::uint64_t seed = 0;

    int resolved_max_parents(int p) const;
    double resolved_penalty(std::size_t n) const;
    void validate() const;
};

struct SearchStep {
    std::size_t step;
    MoveKind kind;
    int from;
    int to;
    double score_before;
    double score_after;
};

struct SearchTrace {
    std::vector<SearchStep> steps;
};

struct SearchResult {
    Dag dag;
    SearchTrace trace;
    double score;
};

/// Greedy hill climbing in DAG space from the empty graph: forward phase
/// (insertions), backward phase (deletions), turning phase (reversals),
/// repeated until no phase moves. Each step applies the best move of the phase;
/// ties go to the smallest (source, target).
SearchResult greedy_search(const LocalStats& local, const TargetFamily& family,
                           const SearchConfig& config);

/// Variant sharing a caller-owned score cache.
SearchResult greedy_search(const ScoreCache& cache, const TargetFamily& family,
                           const SearchConfig& config);

inline constexpr int kMaxDpVertices = 20;

/// Exact score maximizer by best-parent-set tables and best-sink recursion.
Dag exhaustive_dp(const LocalStats& local, const SearchConfig& config);

struct Estimate {
    Dag dag;
    EssentialGraph essential;
    SearchTrace trace;
    double score;
};

Estimate estimate_essential_graph(const Dataset& data, const TargetFamily& family,
                                  const SearchConfig& config, SearchMethod method);

std::string to_string(MoveKind kind);
std::string to_string(SearchMethod method);
SearchMethod parse_search_method(const std::string& text);

/// One line per step: `step kind from->to delta`, 1-based labels.
std::string format_trace(const SearchTrace& trace);

}  // namespace causalbic
