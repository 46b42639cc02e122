#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "causalbic/dag.hpp"

namespace causalbic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Linear Gaussian SEM X = B X + ε, ε ~ N(0, diag(σ²)), zero observational mean.
/// weights()(k, j) is the coefficient of edge j -> k.
class GaussianCausalModel {
public:
    GaussianCausalModel(Dag dag, Matrix weights, Vector error_vars);

    const Dag& dag() const noexcept { return dag_; }
    const Matrix& weights() const noexcept { return weights_; }
    const Vector& error_vars() const noexcept { return error_vars_; }
    int size() const noexcept { return dag_.size(); }

private:
    Dag dag_;
    Matrix weights_;
    Vector error_vars_;
};

/// Mean and variance of the intervention variables U_I, indexed by the
/// members of I in increasing order.
struct InterventionLevels {
    Vector mean;
    Vector variance;
};

/// Intervention levels per target. Targets without an explicit entry fall back
/// to the same (mean, variance) for every intervened vertex.
class InterventionSpec {
public:
    InterventionSpec() = default;
    InterventionSpec(double default_mean, double default_variance);

    void set(InterventionTarget target, InterventionLevels levels);
    InterventionLevels levels(InterventionTarget target) const;

private:
    std::map<InterventionTarget, InterventionLevels> explicit_;
    double default_mean_ = 0.0;
    double default_variance_ = 1.0;
};

/// Rows of (target, x). Values are stored row-major.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(int p) : p_(p) {}

    void add_row(InterventionTarget target, std::span<const double> x);

    int dimension() const noexcept { return p_; }
    std::size_t size() const noexcept { return targets_.size(); }
    bool empty() const noexcept { return targets_.empty(); }
    InterventionTarget target(std::size_t i) const { return targets_[i]; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * static_cast<std::size_t>(p_), static_cast<std::size_t>(p_)};
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    int p_ = 0;
    std::vector<InterventionTarget> targets_;
    std::vector<double> values_;
};

/// Distribution of X under do(X_I = U_I).
struct Moments {
    Vector mean;
    Matrix cov;
};

/// Erdős–Rényi DAG over a uniformly random topological order with edge
/// probability expected_degree / (p - 1).
Dag sample_random_dag(int p, double expected_degree, std::uint64_t seed);

/// Random weights on `dag` with every observational marginal variance equal to 1.
GaussianCausalModel sample_normalized_model(const Dag& dag, std::uint64_t seed);

/// (I − R B)^{-1} where R zeroes the rows of the intervened vertices; computed
/// by forward substitution along a topological order.
Matrix intervention_resolvent(const GaussianCausalModel& model, InterventionTarget target);

Matrix observational_covariance(const GaussianCausalModel& model);

Moments interventional_moments(const GaussianCausalModel& model, InterventionTarget target,
                               const InterventionSpec& spec);

/// One row per entry of `targets`, each drawn by ancestral sampling of the
/// intervened SEM.
Dataset sample_dataset(const GaussianCausalModel& model,
                       std::span<const InterventionTarget> targets,
                       const InterventionSpec& spec, std::uint64_t seed);

/// Text form: `p N`, then `j -> k : beta` and `var k : sigma2` lines
/// (1-based labels, 17 significant digits).
std::string format_model(const GaussianCausalModel& model);
GaussianCausalModel parse_model(std::string_view text);

}  // namespace causalbic
