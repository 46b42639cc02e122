#include "causalbic/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "causalbic/csv.hpp"
#include "causalbic/errors.hpp"
#include "causalbic/rng.hpp"

namespace causalbic {

GaussianCausalModel::GaussianCausalModel(Dag dag, Matrix weights, Vector error_vars)
    : dag_(std::move(dag)), weights_(std::move(weights)), error_vars_(std::move(error_vars)) {
    const int p = dag_.size();
    if (weights_.rows() != p || weights_.cols() != p || error_vars_.size() != p) {
        throw ParameterError("model dimensions do not match the dag");
    }
    for (int k = 0; k < p; ++k) {
        if (!(error_vars_(k) > 0.0) || !std::isfinite(error_vars_(k))) {
            throw ParameterError("error variance of vertex " + std::to_string(k + 1) + " must be positive");
        }
        for (int j = 0; j < p; ++j) {
            if (weights_(k, j) != 0.0 && !dag_.has_edge(j, k)) {
                throw ParameterError("nonzero weight on missing edge " + std::to_string(j + 1) + " -> " +
                                     std::to_string(k + 1));
            }
        }
    }
}

InterventionSpec::InterventionSpec(double default_mean, double default_variance)
    : default_mean_(default_mean), default_variance_(default_variance) {
    if (!(default_variance > 0.0)) throw ParameterError("intervention variance must be positive");
}

void InterventionSpec::set(InterventionTarget target, InterventionLevels levels) {
    const auto size = static_cast<Eigen::Index>(target.size());
    if (levels.mean.size() != size || levels.variance.size() != size) {
        throw ParameterError("intervention levels do not match target {" + target.to_string() + "}");
    }
    if ((levels.variance.array() <= 0.0).any()) throw ParameterError("intervention variance must be positive");
    explicit_[target] = std::move(levels);
}

InterventionLevels InterventionSpec::levels(InterventionTarget target) const {
    if (auto it = explicit_.find(target); it != explicit_.end()) return it->second;
    const auto size = static_cast<Eigen::Index>(target.size());
    return {Vector::Constant(size, default_mean_), Vector::Constant(size, default_variance_)};
}

void Dataset::add_row(InterventionTarget target, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p_) throw InputError("row length does not match dataset dimension");
    if (!target.valid_for(p_)) throw InputError("row target {" + target.to_string() + "} out of range");
    targets_.push_back(target);
    values_.insert(values_.end(), x.begin(), x.end());
}

namespace {

// Nonzero weight magnitudes are drawn from [0.1, 1] with a random sign.
double draw_weight(CounterRng& rng) {
    const double magnitude = 0.1 + 0.9 * rng.uniform();
    return (rng() & 1U) != 0 ? magnitude : -magnitude;
}

// Per-vertex variance of the source term in the intervened SEM, and its mean.
void source_moments(const GaussianCausalModel& model, InterventionTarget target,
                    const InterventionSpec& spec, Vector& mean, Vector& variance) {
    const int p = model.size();
    mean = Vector::Zero(p);
    variance = model.error_vars();
    if (target.empty()) return;
    const InterventionLevels levels = spec.levels(target);
    Eigen::Index i = 0;
    for_each_member(target.members(), [&](int v) {
        mean(v) = levels.mean(i);
        variance(v) = levels.variance(i);
        ++i;
    });
}

}  // namespace

Dag sample_random_dag(int p, double expected_degree, std::uint64_t seed) {
    if (p < 1) throw ParameterError("p must be at least 1");
    if (!(expected_degree >= 0.0) || expected_degree > static_cast<double>(p - 1)) {
        throw ParameterError("expected degree must lie in [0, p - 1]");
    }
    CounterRng rng(seed);
    std::vector<int> order(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
    }
    const double probability = p > 1 ? expected_degree / static_cast<double>(p - 1) : 0.0;
    Dag dag(p);
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            if (rng.uniform() < probability) dag.add_edge(order[a], order[b]);
        }
    }
    return dag;
}

GaussianCausalModel sample_normalized_model(const Dag& dag, std::uint64_t seed) {
    const int p = dag.size();
    CounterRng rng(seed);
    Matrix weights = Matrix::Zero(p, p);
    Vector error_vars = Vector::Ones(p);
    Matrix cov = Matrix::Zero(p, p);
    std::vector<int> done;
    for (int k : dag.topological_order()) {
        const std::vector<int> pa = members(dag.parents(k));
        Vector raw(static_cast<Eigen::Index>(pa.size()));
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = draw_weight(rng);
        double explained = 0.0;
        for (std::size_t a = 0; a < pa.size(); ++a) {
            for (std::size_t b = 0; b < pa.size(); ++b) {
                explained += raw(static_cast<Eigen::Index>(a)) * raw(static_cast<Eigen::Index>(b)) * cov(pa[a], pa[b]);
            }
        }
        // Unit raw noise, then rescale X_k to unit variance.
        const double raw_variance = explained + 1.0;
        const double scale = 1.0 / std::sqrt(raw_variance);
        for (std::size_t a = 0; a < pa.size(); ++a) weights(k, pa[a]) = raw(static_cast<Eigen::Index>(a)) * scale;
        error_vars(k) = 1.0 / raw_variance;
        for (int j : done) {
            double c = 0.0;
            for (int i : pa) c += weights(k, i) * cov(i, j);
            cov(k, j) = c;
            cov(j, k) = c;
        }
        cov(k, k) = 1.0;
        done.push_back(k);
    }
    return GaussianCausalModel(dag, std::move(weights), std::move(error_vars));
}

Matrix intervention_resolvent(const GaussianCausalModel& model, InterventionTarget target) {
    const int p = model.size();
    Matrix resolvent = Matrix::Identity(p, p);
    const Matrix& weights = model.weights();
    for (int k : model.dag().topological_order()) {
        if (target.contains(k)) continue;
        for_each_member(model.dag().parents(k), [&](int j) {
            resolvent.row(k) += weights(k, j) * resolvent.row(j);
        });
    }
    return resolvent;
}

Matrix observational_covariance(const GaussianCausalModel& model) {
    const Matrix a = intervention_resolvent(model, InterventionTarget{});
    Matrix cov = a * model.error_vars().asDiagonal() * a.transpose();
    return 0.5 * (cov + cov.transpose());
}

Moments interventional_moments(const GaussianCausalModel& model, InterventionTarget target,
                               const InterventionSpec& spec) {
    if (!target.valid_for(model.size())) throw ParameterError("target invalid for model");
    Vector source_mean;
    Vector source_variance;
    source_moments(model, target, spec, source_mean, source_variance);
    const Matrix a = intervention_resolvent(model, target);
    Matrix cov = a * source_variance.asDiagonal() * a.transpose();
    return {a * source_mean, 0.5 * (cov + cov.transpose())};
}

Dataset sample_dataset(const GaussianCausalModel& model, std::span<const InterventionTarget> targets,
                       const InterventionSpec& spec, std::uint64_t seed) {
    const int p = model.size();
    const std::vector<int> order = model.dag().topological_order();
    const Matrix& weights = model.weights();
    const CounterRng root(seed);
    Dataset data(p);
    std::vector<double> x(static_cast<std::size_t>(p));
    Vector source_mean;
    Vector source_variance;
    InterventionTarget cached{~VertexSet{0}};
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const InterventionTarget target = targets[i];
        if (!target.valid_for(p)) throw ParameterError("target {" + target.to_string() + "} invalid for model");
        if (target != cached) {
            source_moments(model, target, spec, source_mean, source_variance);
            cached = target;
        }
        CounterRng rng = root.split(i);
        for (int k : order) {
            double value = source_mean(k) + std::sqrt(source_variance(k)) * rng.normal();
            if (!target.contains(k)) {
                for_each_member(model.dag().parents(k), [&](int j) {
                    value += weights(k, j) * x[static_cast<std::size_t>(j)];
                });
            }
            x[static_cast<std::size_t>(k)] = value;
        }
        data.add_row(target, x);
    }
    return data;
}

std::string format_model(const GaussianCausalModel& model) {
    std::ostringstream out;
    out << "p " << model.size() << '\n';
    for (auto [from, to] : model.dag().edges()) {
        out << from + 1 << " -> " << to + 1 << " : " << format_double(model.weights()(to, from)) << '\n';
    }
    for (int k = 0; k < model.size(); ++k) {
        out << "var " << k + 1 << " : " << format_double(model.error_vars()(k)) << '\n';
    }
    return out.str();
}

namespace {

[[noreturn]] void model_syntax_error(int line, const std::string& what) {
    throw InputError("model text line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, int line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        model_syntax_error(line, "not a number: '" + token + "'");
    }
    if (used != token.size()) model_syntax_error(line, "not a number: '" + token + "'");
    return value;
}

}  // namespace

GaussianCausalModel parse_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    int p = -1;
    std::vector<std::tuple<int, int, double>> edges;
    std::vector<std::pair<int, double>> vars;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::vector<std::string> tok;
        for (std::string t; line >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "p") {
            if (tok.size() != 2 || p >= 0) model_syntax_error(line_no, "expected a single 'p N' line");
            p = static_cast<int>(parse_number(tok[1], line_no));
        } else if (tok[0] == "var") {
            if (tok.size() != 4 || tok[2] != ":") model_syntax_error(line_no, "expected 'var k : sigma2'");
            vars.emplace_back(static_cast<int>(parse_number(tok[1], line_no)), parse_number(tok[3], line_no));
        } else {
            if (tok.size() != 5 || tok[1] != "->" || tok[3] != ":") {
                model_syntax_error(line_no, "expected 'j -> k : beta'");
            }
            edges.emplace_back(static_cast<int>(parse_number(tok[0], line_no)),
                               static_cast<int>(parse_number(tok[2], line_no)), parse_number(tok[4], line_no));
        }
    }
    if (p < 0) throw InputError("model text lacks a 'p N' line");
    Dag dag(p);
    Matrix weights = Matrix::Zero(p, p);
    Vector error_vars = Vector::Constant(p, std::nan(""));
    for (auto [from, to, beta] : edges) {
        if (from < 1 || from > p || to < 1 || to > p) throw InputError("edge label out of range");
        if (!dag.can_add_edge(from - 1, to - 1)) throw InputError("model edges contain a cycle or a self-loop");
        dag.add_edge(from - 1, to - 1);
        weights(to - 1, from - 1) = beta;
    }
    for (auto [k, s] : vars) {
        if (k < 1 || k > p) throw InputError("variance label out of range");
        error_vars(k - 1) = s;
    }
    if (error_vars.hasNaN()) throw InputError("model text lacks a variance line for some vertex");
    return GaussianCausalModel(std::move(dag), std::move(weights), std::move(error_vars));
}

}  // namespace causalbic
