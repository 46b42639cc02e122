#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "causalbic/model.hpp"

namespace causalbic {

/// Count, raw first moment and raw (uncentered) second moment of the rows
/// sharing one intervention target.
struct TargetStats {
    std::size_t count = 0;
    Vector first_moment;
    Matrix second_moment;
};

/// Per-target sufficient statistics of an interventional dataset.
class SufficientStats {
public:
    SufficientStats(int p, std::map<InterventionTarget, TargetStats> per_target);

    int dimension() const noexcept { return p_; }
    std::size_t total() const noexcept { return total_; }
    const std::map<InterventionTarget, TargetStats>& per_target() const noexcept { return per_target_; }
    /// Targets present in the data; the family the statistics were drawn under.
    TargetFamily family() const;

private:
    int p_;
    std::map<InterventionTarget, TargetStats> per_target_;
    std::size_t total_ = 0;
};

/// Throws InputError on an empty dataset.
SufficientStats sufficient_stats(const Dataset& data);

/// For each vertex k, the rows whose target leaves k free: their count n^(−k)
/// and pooled second moment S^(−k).
class LocalStats {
public:
    LocalStats(std::vector<std::size_t> counts, std::vector<Matrix> pooled, std::size_t total);

    int dimension() const noexcept { return static_cast<int>(counts_.size()); }
    std::size_t total() const noexcept { return total_; }
    std::size_t count(int k) const { return counts_.at(static_cast<std::size_t>(k)); }
    const Matrix& pooled(int k) const { return pooled_.at(static_cast<std::size_t>(k)); }

    /// False when every row intervenes on k (n^(−k) = 0).
    bool identified(int k) const { return count(k) > 0; }
    std::vector<int> unidentified() const;
    /// Throws DegenerateFitError naming the first unidentified vertex.
    void require_identified() const;

private:
    std::vector<std::size_t> counts_;
    std::vector<Matrix> pooled_;
    std::size_t total_;
};

LocalStats local_stats(const SufficientStats& stats);

/// Natural parameters of the interventional normal N(μ^(I), Σ^(I)) together
/// with the two scalars the likelihood needs.
struct NaturalParams {
    Matrix precision;      ///< K^(I) = Σ^(I)^{-1}
    Vector shift;          ///< ν^(I) = K^(I) μ^(I)
    double quadratic = 0;  ///< ν'K^{-1}ν = μ_U' K̃ μ_U
    double log_det = 0;    ///< log det K^(I)
};

NaturalParams natural_params(const GaussianCausalModel& model, InterventionTarget target,
                             const InterventionSpec& spec);

/// Exact log-likelihood of the data behind `stats`, including every constant:
/// equals the sum of the rows' normal log-densities.
double log_likelihood(const GaussianCausalModel& model, const SufficientStats& stats,
                      const InterventionSpec& spec);

/// Σ_k ℓ_k with ℓ_k = −½ n^(−k) [γ_k (I−B)_k S^(−k) (I−B)_k' − log γ_k].
double partial_log_likelihood(const GaussianCausalModel& model, const LocalStats& local);

/// Log-density of the intervened coordinates under their U distributions;
/// independent of (B, σ²).
double nuisance_log_likelihood(const SufficientStats& stats, const InterventionSpec& spec);

/// −½ log(2π) Σ_k n^(−k): the Gaussian constant of the non-intervened block.
double gaussian_constant(const LocalStats& local);

/// ½ log n.
double default_penalty(std::size_t n);

inline constexpr double kInfeasibleScore = -std::numeric_limits<double>::infinity();

/// Parent sets whose pooled Gram block has a larger condition number score −∞.
inline constexpr double kMaxConditionNumber = 1e12;

/// −½ n^(−k)(1 + log σ̂²_k) − penalty·|parents|, or −∞ when the parent set is
/// infeasible (too few rows, ill-conditioned Gram block, σ̂² ≤ 0).
double local_score(int k, VertexSet parents, const LocalStats& local, double penalty);

/// Σ_k local_score(k, pa(k)), summed in vertex order.
double bic_score(const Dag& dag, const LocalStats& local, double penalty);

/// MLE for a fixed DAG with its penalized score.
struct FittedModel {
    GaussianCausalModel model;
    double log_likelihood;  ///< Σ_k sup ℓ_k + gaussian_constant; excludes nuisance terms
    double bic;             ///< bic_score(dag) with the penalty used for the fit
};

/// Throws DegenerateFitError if any vertex is unidentified or its fit is degenerate.
FittedModel mle_given_dag(const Dag& dag, const LocalStats& local, double penalty);

/// Memoized local_score keyed by (vertex, parent set). Safe for concurrent use.
class ScoreCache {
public:
    ScoreCache(const LocalStats& local, double penalty) : local_(&local), penalty_(penalty) {}

    double score(int k, VertexSet parents) const;
    double penalty() const noexcept { return penalty_; }
    const LocalStats& local() const noexcept { return *local_; }
    std::size_t size() const;

private:
    struct Key {
        int vertex;
        VertexSet parents;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept {
            return std::hash<VertexSet>{}(key.parents * 0x9e3779b97f4a7c15ULL + static_cast<VertexSet>(key.vertex));
        }
    };

    const LocalStats* local_;
    double penalty_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, double, KeyHash> values_;
};

}  // namespace causalbic
