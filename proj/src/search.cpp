#include "causalbic/search.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>

#include "causalbic/csv.hpp"
#include "causalbic/errors.hpp"

namespace causalbic {

int SearchConfig::resolved_max_parents(int p) const {
    return max_parents.value_or(std::min(std::max(p - 1, 0), 8));
}

double SearchConfig::resolved_penalty(std::size_t n) const {
    return penalty_weight.value_or(default_penalty(n));
}

void SearchConfig::validate() const {
    if (max_parents && *max_parents < 0) throw ParameterError("max_parents must be nonnegative");
    if (penalty_weight && !(*penalty_weight >= 0.0)) throw ParameterError("penalty weight must be nonnegative");
    if (!(min_improvement >= 0.0)) throw ParameterError("min_improvement must be nonnegative");
}

namespace {

struct Move {
    MoveKind kind;
    int from;
    int to;
    double gain;
};

class GreedyClimber {
public:
    GreedyClimber(const ScoreCache& cache, const SearchConfig& config)
        : cache_(cache), config_(config), p_(cache.local().dimension()),
          max_parents_(config.resolved_max_parents(p_)), dag_(p_) {}

    SearchResult run() {
        double score = 0.0;
        for (int k = 0; k < p_; ++k) score += cache_.score(k, 0);
        if (score == kInfeasibleScore) throw DegenerateFitError(0, "empty graph has infeasible score");
        SearchTrace trace;
        bool moved = true;
        while (moved && trace.steps.size() < config_.max_steps) {
            moved = false;
            for (MoveKind phase : {MoveKind::Insert, MoveKind::Delete, MoveKind::Reverse}) {
                while (trace.steps.size() < config_.max_steps) {
                    const Move best = best_move(phase);
                    if (!(best.gain > config_.min_improvement)) break;
                    apply(best);
                    trace.steps.push_back({trace.steps.size() + 1, best.kind, best.from, best.to, score, score + best.gain});
                    score += best.gain;
                    moved = true;
                }
            }
        }
        double total = 0.0;
        for (int k = 0; k < p_; ++k) total += cache_.score(k, dag_.parents(k));
        return {dag_, std::move(trace), total};
    }

private:
    double gain_of(MoveKind kind, int from, int to) const {
        const VertexSet pa_to = dag_.parents(to);
        switch (kind) {
            case MoveKind::Insert:
                if (dag_.adjacent(from, to) || cardinality(pa_to) >= max_parents_ || !dag_.can_add_edge(from, to)) {
                    return kInfeasibleScore;
                }
                return cache_.score(to, pa_to | singleton(from)) - cache_.score(to, pa_to);
            case MoveKind::Delete:
                if (!dag_.has_edge(from, to)) return kInfeasibleScore;
                return cache_.score(to, pa_to & ~singleton(from)) - cache_.score(to, pa_to);
            case MoveKind::Reverse: {
                if (!dag_.has_edge(from, to)) return kInfeasibleScore;
                const VertexSet pa_from = dag_.parents(from);
                if (cardinality(pa_from) >= max_parents_) return kInfeasibleScore;
                Dag without = dag_;
                without.remove_edge(from, to);
                if (!without.can_add_edge(to, from)) return kInfeasibleScore;
                const double gain_to = cache_.score(to, pa_to & ~singleton(from)) - cache_.score(to, pa_to);
                const double gain_from = cache_.score(from, pa_from | singleton(to)) - cache_.score(from, pa_from);
                return gain_to + gain_from;
            }
        }
        return kInfeasibleScore;
    }

    Move best_move(MoveKind kind) const {
        Move best{kind, -1, -1, kInfeasibleScore};
        for (int from = 0; from < p_; ++from) {
            for (int to = 0; to < p_; ++to) {
                if (from == to) continue;
                const double gain = gain_of(kind, from, to);
                if (gain > best.gain) best = {kind, from, to, gain};
            }
        }
        return best;
    }

    void apply(const Move& move) {
        switch (move.kind) {
            case MoveKind::Insert: dag_.add_edge(move.from, move.to); break;
            case MoveKind::Delete: dag_.remove_edge(move.from, move.to); break;
            case MoveKind::Reverse:
                dag_.remove_edge(move.from, move.to);
                dag_.add_edge(move.to, move.from);
                break;
        }
    }

    const ScoreCache& cache_;
    const SearchConfig& config_;
    int p_;
    int max_parents_;
    Dag dag_;
};

void check_search_inputs(const LocalStats& local, const TargetFamily& family, const SearchConfig& config) {
    config.validate();
    family.validate(local.dimension());
    if (!conservative(family, local.dimension())) throw ParameterError("target family is not conservative");
    local.require_identified();
}

// Removes bit `v` from `mask` and closes the gap: indexes subsets of V \ {v}.
constexpr std::uint32_t compress(std::uint32_t mask, int v) {
    const std::uint32_t low = mask & ((std::uint32_t{1} << v) - 1);
    return ((mask >> (v + 1)) << v) | low;
}

// Tie order for DP parent sets: higher score, then fewer parents, then the
// lexicographically smaller sorted label list.
bool better_parent_set(double score, std::uint32_t set, double best_score, std::uint32_t best_set) {
    if (score != best_score) return score > best_score;
    const int size = std::popcount(set);
    const int best_size = std::popcount(best_set);
    if (size != best_size) return size < best_size;
    const std::uint32_t diff = set ^ best_set;
    return diff != 0 && (set & (diff & (~diff + 1))) != 0;
}

}  // namespace

SearchResult greedy_search(const ScoreCache& cache, const TargetFamily& family, const SearchConfig& config) {
    check_search_inputs(cache.local(), family, config);
    return GreedyClimber(cache, config).run();
}

SearchResult greedy_search(const LocalStats& local, const TargetFamily& family, const SearchConfig& config) {
    const ScoreCache cache(local, config.resolved_penalty(local.total()));
    return greedy_search(cache, family, config);
}

Dag exhaustive_dp(const LocalStats& local, const SearchConfig& config) {
    config.validate();
    const int p = local.dimension();
    if (p > kMaxDpVertices) {
        throw CapacityError("exhaustive search limited to " + std::to_string(kMaxDpVertices) + " vertices, got " +
                            std::to_string(p));
    }
    local.require_identified();
    if (p == 0) return Dag(0);
    const ScoreCache cache(local, config.resolved_penalty(local.total()));
    const int max_parents = config.resolved_max_parents(p);

    // best(k, C) over subsets C of V \ {k}, indexed by compressed masks.
    const std::size_t sub_count = std::size_t{1} << (p - 1);
    std::vector<std::vector<double>> best_score(static_cast<std::size_t>(p));
    std::vector<std::vector<std::uint32_t>> best_set(static_cast<std::size_t>(p));
    std::vector<std::uint32_t> expanded(sub_count);
    for (int k = 0; k < p; ++k) {
        auto& scores = best_score[static_cast<std::size_t>(k)];
        auto& sets = best_set[static_cast<std::size_t>(k)];
        scores.assign(sub_count, kInfeasibleScore);
        sets.assign(sub_count, 0);
        expanded[0] = 0;
        for (std::size_t c = 1; c < sub_count; ++c) {
            const int low = std::countr_zero(c);
            const int vertex = low < k ? low : low + 1;
            expanded[c] = expanded[c & (c - 1)] | (std::uint32_t{1} << vertex);
        }
        for (std::size_t c = 0; c < sub_count; ++c) {
            const std::uint32_t set = expanded[c];
            double score = std::popcount(set) <= max_parents ? cache.score(k, set) : kInfeasibleScore;
            std::uint32_t chosen = set;
            for (std::size_t rest = c; rest != 0; rest &= rest - 1) {
                const std::size_t sub = c & ~(rest & (~rest + 1));
                if (better_parent_set(scores[sub], sets[sub], score, chosen)) {
                    score = scores[sub];
                    chosen = sets[sub];
                }
            }
            scores[c] = score;
            sets[c] = chosen;
        }
    }

    // Best sink ordering over subsets W of V.
    const std::size_t all_count = std::size_t{1} << p;
    std::vector<double> total(all_count, kInfeasibleScore);
    std::vector<std::uint8_t> sink(all_count, 0);
    total[0] = 0.0;
    for (std::size_t w = 1; w < all_count; ++w) {
        for (std::size_t rest = w; rest != 0; rest &= rest - 1) {
            const int s = std::countr_zero(rest);
            const std::size_t without = w & ~(std::size_t{1} << s);
            const double candidate =
                total[without] + best_score[static_cast<std::size_t>(s)][compress(static_cast<std::uint32_t>(without), s)];
            if (candidate >= total[w]) {
                total[w] = candidate;
                sink[w] = static_cast<std::uint8_t>(s);
            }
        }
    }

    std::vector<VertexSet> parents(static_cast<std::size_t>(p), 0);
    for (std::size_t w = all_count - 1; w != 0;) {
        const int s = sink[w];
        const std::size_t without = w & ~(std::size_t{1} << s);
        parents[static_cast<std::size_t>(s)] =
            best_set[static_cast<std::size_t>(s)][compress(static_cast<std::uint32_t>(without), s)];
        w = without;
    }
    return Dag::from_parent_sets(std::move(parents));
}

Estimate estimate_essential_graph(const Dataset& data, const TargetFamily& family, const SearchConfig& config,
                                  SearchMethod method) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!family.contains(data.target(i))) {
            throw ParameterError("dataset target {" + data.target(i).to_string() + "} missing from the family");
        }
    }
    const LocalStats local = local_stats(sufficient_stats(data));
    const ScoreCache cache(local, config.resolved_penalty(local.total()));
    SearchResult result;
    if (method == SearchMethod::Greedy) {
        result = greedy_search(cache, family, config);
    } else {
        check_search_inputs(local, family, config);
        Dag dag = exhaustive_dp(local, config);
        result = {dag, {}, bic_score(dag, local, cache.penalty())};
    }
    EssentialGraph essential = essential_graph(result.dag, family);
    return {std::move(result.dag), std::move(essential), std::move(result.trace), result.score};
}

std::string to_string(MoveKind kind) {
    switch (kind) {
        case MoveKind::Insert: return "insert";
        case MoveKind::Delete: return "delete";
        case MoveKind::Reverse: return "reverse";
    }
    return "unknown";
}

std::string to_string(SearchMethod method) {
    return method == SearchMethod::Greedy ? "greedy" : "dp";
}

SearchMethod parse_search_method(const std::string& text) {
    if (text == "greedy") return SearchMethod::Greedy;
    if (text == "dp") return SearchMethod::DynamicProgramming;
    throw ParameterError("unknown search method '" + text + "' (expected greedy or dp)");
}

std::string format_trace(const SearchTrace& trace) {
    std::ostringstream out;
    for (const SearchStep& step : trace.steps) {
        out << step.step << ' ' << to_string(step.kind) << ' ' << step.from + 1 << "->" << step.to + 1 << ' '
            << format_double(step.score_after - step.score_before) << '\n';
    }
    return out.str();
}

}  // namespace causalbic
