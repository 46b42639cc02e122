#include "causalbic/likelihood.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include "causalbic/errors.hpp"
#include "causalbic/kernels.hpp"

namespace causalbic {

namespace {

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

std::span<const double> flat(const Matrix& m) {
    return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<double> flat(Matrix& m) {
    return {m.data(), static_cast<std::size_t>(m.size())};
}

struct Regression {
    Vector coefficients;  // over the parents in increasing order
    double residual_variance;
};

// Least-squares regression of k on `parents` in the pooled moments of k;
// nullopt when the parent set is infeasible.
std::optional<Regression> regress(int k, VertexSet parents, const LocalStats& local) {
    const std::size_t n = local.count(k);
    const int size = cardinality(parents);
    if (n <= static_cast<std::size_t>(size)) return std::nullopt;
    const Matrix& s = local.pooled(k);
    if (size == 0) {
        const double variance = s(k, k);
        if (!(variance > 0.0)) return std::nullopt;
        return Regression{Vector(0), variance};
    }
    const std::vector<int> pa = members(parents);
    Matrix gram(size, size);
    Vector cross(size);
    for (int a = 0; a < size; ++a) {
        cross(a) = s(pa[static_cast<std::size_t>(a)], k);
        for (int b = 0; b < size; ++b) gram(a, b) = s(pa[static_cast<std::size_t>(a)], pa[static_cast<std::size_t>(b)]);
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues()(0);
    const double largest = eig.eigenvalues()(size - 1);
    if (!(smallest > 0.0) || largest / smallest > kMaxConditionNumber) return std::nullopt;
    Vector coefficients = gram.ldlt().solve(cross);
    const double variance = s(k, k) - cross.dot(coefficients);
    if (!(variance > 0.0)) return std::nullopt;
    return Regression{std::move(coefficients), variance};
}

}  // namespace

SufficientStats::SufficientStats(int p, std::map<InterventionTarget, TargetStats> per_target)
    : p_(p), per_target_(std::move(per_target)) {
    for (const auto& [target, entry] : per_target_) {
        if (!target.valid_for(p_)) throw InputError("target {" + target.to_string() + "} invalid");
        if (entry.count == 0) throw InputError("target {" + target.to_string() + "} has no rows");
        total_ += entry.count;
    }
}

TargetFamily SufficientStats::family() const {
    std::vector<InterventionTarget> targets;
    for (const auto& entry : per_target_) targets.push_back(entry.first);
    return TargetFamily(std::move(targets));
}

SufficientStats sufficient_stats(const Dataset& data) {
    if (data.empty()) throw InputError("cannot compute statistics of an empty dataset");
    const int p = data.dimension();
    std::map<InterventionTarget, TargetStats> acc;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto [it, inserted] = acc.try_emplace(data.target(i));
        TargetStats& entry = it->second;
        if (inserted) {
            entry.first_moment = Vector::Zero(p);
            entry.second_moment = Matrix::Zero(p, p);
        }
        const auto x = data.row(i);
        kernels::accumulate_outer(flat(entry.second_moment), x);
        kernels::axpy(1.0, x, {entry.first_moment.data(), static_cast<std::size_t>(p)});
        ++entry.count;
    }
    for (auto& [target, entry] : acc) {
        const double inv = 1.0 / static_cast<double>(entry.count);
        entry.first_moment *= inv;
        entry.second_moment *= inv;
    }
    return SufficientStats(p, std::move(acc));
}

LocalStats::LocalStats(std::vector<std::size_t> counts, std::vector<Matrix> pooled, std::size_t total)
    : counts_(std::move(counts)), pooled_(std::move(pooled)), total_(total) {
    if (counts_.size() != pooled_.size()) throw ParameterError("local statistics size mismatch");
}

std::vector<int> LocalStats::unidentified() const {
    std::vector<int> out;
    for (int k = 0; k < dimension(); ++k) {
        if (!identified(k)) out.push_back(k);
    }
    return out;
}

void LocalStats::require_identified() const {
    for (int k = 0; k < dimension(); ++k) {
        if (!identified(k)) {
            throw DegenerateFitError(k, "vertex " + std::to_string(k + 1) +
                                            " is intervened in every row; its parameters are unidentified");
        }
    }
}

LocalStats local_stats(const SufficientStats& stats) {
    const int p = stats.dimension();
    std::vector<std::size_t> counts(static_cast<std::size_t>(p), 0);
    std::vector<Matrix> pooled(static_cast<std::size_t>(p), Matrix::Zero(p, p));
    for (int k = 0; k < p; ++k) {
        std::size_t& n = counts[static_cast<std::size_t>(k)];
        for (const auto& [target, entry] : stats.per_target()) {
            if (!target.contains(k)) n += entry.count;
        }
        if (n == 0) continue;
        Matrix& s = pooled[static_cast<std::size_t>(k)];
        for (const auto& [target, entry] : stats.per_target()) {
            if (target.contains(k)) continue;
            kernels::axpy(static_cast<double>(entry.count) / static_cast<double>(n), flat(entry.second_moment), flat(s));
        }
    }
    return LocalStats(std::move(counts), std::move(pooled), stats.total());
}

NaturalParams natural_params(const GaussianCausalModel& model, InterventionTarget target,
                             const InterventionSpec& spec) {
    const int p = model.size();
    if (!target.valid_for(p)) throw ParameterError("target invalid for model");
    const Matrix free_part = Matrix::Identity(p, p) - model.weights();
    Vector gamma = model.error_vars().cwiseInverse();
    NaturalParams out;
    out.shift = Vector::Zero(p);
    for (int k = 0; k < p; ++k) {
        if (target.contains(k)) {
            gamma(k) = 0.0;
        } else {
            out.log_det += std::log(gamma(k));
        }
    }
    out.precision = free_part.transpose() * gamma.asDiagonal() * free_part;
    if (!target.empty()) {
        const InterventionLevels levels = spec.levels(target);
        Eigen::Index i = 0;
        for_each_member(target.members(), [&](int v) {
            const double precision = 1.0 / levels.variance(i);
            out.precision(v, v) += precision;
            out.shift(v) = precision * levels.mean(i);
            out.quadratic += precision * levels.mean(i) * levels.mean(i);
            out.log_det += std::log(precision);
            ++i;
        });
    }
    return out;
}

double log_likelihood(const GaussianCausalModel& model, const SufficientStats& stats,
                      const InterventionSpec& spec) {
    if (model.size() != stats.dimension()) throw ParameterError("model and statistics dimensions differ");
    const double p = static_cast<double>(model.size());
    double total = 0.0;
    for (const auto& [target, entry] : stats.per_target()) {
        const NaturalParams natural = natural_params(model, target, spec);
        const double per_row = -0.5 * kernels::dot(flat(entry.second_moment), flat(natural.precision)) +
                               natural.shift.dot(entry.first_moment) - 0.5 * natural.quadratic +
                               0.5 * natural.log_det - 0.5 * p * kLogTwoPi;
        total += static_cast<double>(entry.count) * per_row;
    }
    return total;
}

double partial_log_likelihood(const GaussianCausalModel& model, const LocalStats& local) {
    if (model.size() != local.dimension()) throw ParameterError("model and statistics dimensions differ");
    const int p = model.size();
    double total = 0.0;
    for (int k = 0; k < p; ++k) {
        const std::size_t n = local.count(k);
        if (n == 0) continue;
        Vector row = -model.weights().row(k).transpose();
        row(k) += 1.0;
        const double gamma = 1.0 / model.error_vars()(k);
        const double residual = row.dot(local.pooled(k) * row);
        total += -0.5 * static_cast<double>(n) * (gamma * residual - std::log(gamma));
    }
    return total;
}

double nuisance_log_likelihood(const SufficientStats& stats, const InterventionSpec& spec) {
    double total = 0.0;
    for (const auto& [target, entry] : stats.per_target()) {
        if (target.empty()) continue;
        const InterventionLevels levels = spec.levels(target);
        const double n = static_cast<double>(entry.count);
        Eigen::Index i = 0;
        for_each_member(target.members(), [&](int v) {
            const double mu = levels.mean(i);
            const double tau2 = levels.variance(i);
            const double sq = entry.second_moment(v, v) - 2.0 * mu * entry.first_moment(v) + mu * mu;
            total += n * (-0.5 * (kLogTwoPi + std::log(tau2)) - 0.5 * sq / tau2);
            ++i;
        });
    }
    return total;
}

double gaussian_constant(const LocalStats& local) {
    double rows = 0.0;
    for (int k = 0; k < local.dimension(); ++k) rows += static_cast<double>(local.count(k));
    return -0.5 * kLogTwoPi * rows;
}

double default_penalty(std::size_t n) { return 0.5 * std::log(static_cast<double>(n)); }

double local_score(int k, VertexSet parents, const LocalStats& local, double penalty) {
    if (contains(parents, k)) return kInfeasibleScore;
    const auto fit = regress(k, parents, local);
    if (!fit) return kInfeasibleScore;
    return -0.5 * static_cast<double>(local.count(k)) * (1.0 + std::log(fit->residual_variance)) -
           penalty * cardinality(parents);
}

double bic_score(const Dag& dag, const LocalStats& local, double penalty) {
    if (dag.size() != local.dimension()) throw ParameterError("dag and statistics dimensions differ");
    double total = 0.0;
    for (int k = 0; k < dag.size(); ++k) total += local_score(k, dag.parents(k), local, penalty);
    return total;
}

FittedModel mle_given_dag(const Dag& dag, const LocalStats& local, double penalty) {
    const int p = dag.size();
    if (p != local.dimension()) throw ParameterError("dag and statistics dimensions differ");
    local.require_identified();
    Matrix weights = Matrix::Zero(p, p);
    Vector error_vars(p);
    double loglik = 0.0;
    for (int k = 0; k < p; ++k) {
        const auto fit = regress(k, dag.parents(k), local);
        if (!fit) {
            throw DegenerateFitError(k, "degenerate fit at vertex " + std::to_string(k + 1) + " (" +
                                            std::to_string(local.count(k)) + " usable rows, " +
                                            std::to_string(cardinality(dag.parents(k))) + " parents)");
        }
        Eigen::Index i = 0;
        for_each_member(dag.parents(k), [&](int j) { weights(k, j) = fit->coefficients(i++); });
        error_vars(k) = fit->residual_variance;
        loglik += -0.5 * static_cast<double>(local.count(k)) * (1.0 + std::log(fit->residual_variance));
    }
    loglik += gaussian_constant(local);
    const double bic = bic_score(dag, local, penalty);
    return FittedModel{GaussianCausalModel(dag, std::move(weights), std::move(error_vars)), loglik, bic};
}

double ScoreCache::score(int k, VertexSet parents) const {
    const Key key{k, parents};
    {
        std::shared_lock lock(mutex_);
        if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = local_score(k, parents, *local_, penalty_);
    std::unique_lock lock(mutex_);
    values_[key] = value;
    return value;
}

std::size_t ScoreCache::size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

}  // namespace causalbic
