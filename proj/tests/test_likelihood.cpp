#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "causalbic/errors.hpp"
#include "causalbic/likelihood.hpp"
#include "test_support.hpp"

using namespace causalbic;
namespace oracle = causalbic::testing;

namespace {

struct Instance {
    GaussianCausalModel model;
    TargetFamily family;
    InterventionSpec spec;
    Dataset data;
};

Instance random_instance(CounterRng& rng, int max_p = 6, std::size_t max_per_target = 60) {
    const int p = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_p - 1));
    const auto model = sample_normalized_model(sample_random_dag(p, std::min(2.0, p - 1.0), rng()), rng());
    const auto family = oracle::random_conservative_family(p, rng);
    const auto spec = oracle::random_spec(family, rng);
    const std::size_t per_target = 8 + rng() % max_per_target;
    return {model, family, spec, oracle::sample_family_dataset(model, family, per_target, spec, rng())};
}

Dataset rows(int p, std::initializer_list<std::pair<InterventionTarget, std::vector<double>>> list) {
    Dataset data(p);
    for (const auto& [t, x] : list) data.add_row(t, x);
    return data;
}

GaussianCausalModel with_parameters(const GaussianCausalModel& model, const Matrix& b, const Vector& vars) {
    return GaussianCausalModel(model.dag(), b, vars);
}

}  // namespace

TEST(SufficientStats, SingleRow) {
    const auto stats = sufficient_stats(rows(2, {{InterventionTarget{}, {2.0, -1.0}}}));
    const auto& s = stats.per_target().at(InterventionTarget{});
    EXPECT_EQ(s.count, 1U);
    EXPECT_EQ(s.second_moment, (Matrix{{4.0, -2.0}, {-2.0, 1.0}}));
    EXPECT_EQ(s.first_moment, (Vector{{2.0, -1.0}}));
}

TEST(SufficientStats, DuplicatedRowsDoubleCountsOnly) {
    CounterRng rng(3);
    const auto inst = random_instance(rng);
    Dataset doubled(inst.data.dimension());
    for (std::size_t i = 0; i < inst.data.size(); ++i) {
        doubled.add_row(inst.data.target(i), inst.data.row(i));
        doubled.add_row(inst.data.target(i), inst.data.row(i));
    }
    const auto a = sufficient_stats(inst.data);
    const auto b = sufficient_stats(doubled);
    ASSERT_EQ(a.per_target().size(), b.per_target().size());
    for (const auto& [t, s] : a.per_target()) {
        const auto& d = b.per_target().at(t);
        EXPECT_EQ(d.count, 2 * s.count);
        EXPECT_LE((d.second_moment - s.second_moment).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(SufficientStats, MixedTargetsCounted) {
    const auto t1 = InterventionTarget::of({0});
    const auto stats = sufficient_stats(rows(2, {{InterventionTarget{}, {1, 2}}, {t1, {3, 4}}, {t1, {5, 6}}}));
    EXPECT_EQ(stats.per_target().at(InterventionTarget{}).count, 1U);
    EXPECT_EQ(stats.per_target().at(t1).count, 2U);
    EXPECT_EQ(stats.total(), 3U);
    EXPECT_EQ(stats.family(), TargetFamily({InterventionTarget{}, t1}));
}

TEST(SufficientStats, RowOrderIrrelevant) {
    CounterRng rng(5);
    const auto inst = random_instance(rng);
    Dataset reversed(inst.data.dimension());
    for (std::size_t i = inst.data.size(); i-- > 0;) reversed.add_row(inst.data.target(i), inst.data.row(i));
    const auto a = sufficient_stats(inst.data);
    const auto b = sufficient_stats(reversed);
    for (const auto& [t, s] : a.per_target()) {
        EXPECT_LE((b.per_target().at(t).second_moment - s.second_moment).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(SufficientStats, EmptyDatasetRejected) {
    EXPECT_THROW(sufficient_stats(Dataset(3)), InputError);
}

TEST(LocalStats, ObservationalDataPoolsNothing) {
    CounterRng rng(7);
    const auto model = sample_normalized_model(sample_random_dag(4, 2.0, 1), 2);
    const auto data = oracle::sample_family_dataset(model, TargetFamily::observational(), 30, InterventionSpec(), 3);
    const auto stats = sufficient_stats(data);
    const auto local = local_stats(stats);
    for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(local.count(k), 30U);
        EXPECT_LE((local.pooled(k) - stats.per_target().at(InterventionTarget{}).second_moment).cwiseAbs().maxCoeff(),
                  1e-15);
    }
}

TEST(LocalStats, MixtureWeights) {
    CounterRng rng(8);
    const auto t1 = InterventionTarget::of({0});
    Dataset data(2);
    for (int i = 0; i < 4; ++i) data.add_row(InterventionTarget{}, std::vector<double>{rng.normal(), rng.normal()});
    for (int i = 0; i < 6; ++i) data.add_row(t1, std::vector<double>{rng.normal(), rng.normal()});
    const auto stats = sufficient_stats(data);
    const auto local = local_stats(stats);
    EXPECT_EQ(local.count(0), 4U);
    EXPECT_EQ(local.count(1), 10U);
    const Matrix expected = 0.4 * stats.per_target().at(InterventionTarget{}).second_moment +
                            0.6 * stats.per_target().at(t1).second_moment;
    EXPECT_LE((local.pooled(1) - expected).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((local.pooled(0) - stats.per_target().at(InterventionTarget{}).second_moment).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LocalStats, AlwaysIntervenedVertexIsUnidentified) {
    const auto t = InterventionTarget::of({1});
    const auto local = local_stats(sufficient_stats(rows(3, {{t, {1, 2, 3}}, {t, {0, 1, 0}}})));
    EXPECT_FALSE(local.identified(1));
    EXPECT_EQ(local.unidentified(), std::vector<int>{1});
    try {
        local.require_identified();
        FAIL() << "expected DegenerateFitError";
    } catch (const DegenerateFitError& e) {
        EXPECT_EQ(e.vertex(), 1);
    }
}

TEST(NaturalParams, EmptyTarget) {
    CounterRng rng(9);
    const auto model = sample_normalized_model(sample_random_dag(5, 2.0, rng()), rng());
    const auto np = natural_params(model, InterventionTarget{}, InterventionSpec(3.0, 0.5));
    const Matrix ib = Matrix::Identity(5, 5) - model.weights();
    const Matrix expected = ib.transpose() * model.error_vars().cwiseInverse().asDiagonal() * ib;
    EXPECT_LE((np.precision - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(np.shift.isZero());
    EXPECT_EQ(np.quadratic, 0.0);
}

TEST(NaturalParams, IdentitiesHoldOnRandomInstances) {
    CounterRng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng);
        for (auto t : inst.family.targets()) {
            const auto np = natural_params(inst.model, t, inst.spec);
            const auto m = interventional_moments(inst.model, t, inst.spec);
            const int p = inst.model.size();
            EXPECT_LE((np.precision * m.cov - Matrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-9);
            EXPECT_LE((np.shift - np.precision * m.mean).cwiseAbs().maxCoeff(), 1e-9);
            const double quad = np.shift.dot(m.cov * np.shift);
            EXPECT_LE(std::abs(np.quadratic - quad), 1e-9 * std::max(1.0, std::abs(quad)));
            const Eigen::PartialPivLU<Matrix> lu(np.precision);
            const double dense_log_det = lu.matrixLU().diagonal().array().abs().log().sum();
            EXPECT_LE(std::abs(np.log_det - dense_log_det), 1e-9);
        }
    }
}

TEST(LogLikelihood, StandardNormalClosedForm) {
    CounterRng rng(11);
    Dataset data(3);
    double trace = 0.0;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
        for (double v : x) trace += v * v;
        data.add_row(InterventionTarget{}, x);
    }
    const GaussianCausalModel model(Dag(3), Matrix::Zero(3, 3), Vector::Ones(3));
    const double expected = -0.5 * trace - 20 * 1.5 * std::log(2.0 * std::numbers::pi);
    EXPECT_NEAR(log_likelihood(model, sufficient_stats(data), InterventionSpec()), expected, 1e-10);
}

TEST(LogLikelihood, EqualsDirectDensitySum) {
    CounterRng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = random_instance(rng);
        const double direct = oracle::direct_log_likelihood(inst.model, inst.data, inst.spec);
        EXPECT_NEAR(log_likelihood(inst.model, sufficient_stats(inst.data), inst.spec), direct, 1e-8);
    }
}

TEST(LogLikelihood, DecomposesIntoLocalTerms) {
    CounterRng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = random_instance(rng);
        const auto stats = sufficient_stats(inst.data);
        const auto local = local_stats(stats);
        const double full = log_likelihood(inst.model, stats, inst.spec);
        const double parts = partial_log_likelihood(inst.model, local) + gaussian_constant(local) +
                             nuisance_log_likelihood(stats, inst.spec);
        const double scale = static_cast<double>(stats.total()) / 1000.0;
        EXPECT_LE(std::abs(full - parts), 1e-8 * std::max(1.0, scale));
    }
}

TEST(LocalScore, EmptyParentSet) {
    CounterRng rng(14);
    const auto inst = random_instance(rng);
    const auto local = local_stats(sufficient_stats(inst.data));
    for (int k = 0; k < local.dimension(); ++k) {
        if (!local.identified(k)) continue;
        const double n = static_cast<double>(local.count(k));
        EXPECT_NEAR(local_score(k, 0, local, 2.0), -0.5 * n * (1.0 + std::log(local.pooled(k)(k, k))), 1e-10);
    }
}

TEST(LocalScore, UnpenalizedScoreMonotoneInParents) {
    CounterRng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(rng);
        const auto local = local_stats(sufficient_stats(inst.data));
        const int p = local.dimension();
        const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
        VertexSet parents = 0;
        double previous = local_score(k, 0, local, 0.0);
        for (int v = 0; v < p; ++v) {
            if (v == k) continue;
            parents |= singleton(v);
            const double next = local_score(k, parents, local, 0.0);
            if (next == kInfeasibleScore) break;
            EXPECT_GE(next, previous - 1e-9 * std::abs(previous));
            previous = next;
        }
    }
}

TEST(LocalScore, InfeasibleParentSets) {
    const auto local = local_stats(sufficient_stats(rows(3, {{InterventionTarget{}, {1, 2, 3}}, {InterventionTarget{}, {2, 4, 1}}})));
    EXPECT_EQ(local_score(0, singleton(1) | singleton(2), local, 1.0), kInfeasibleScore);
    // Collinear parents: x2 = 2 x1 in every row.
    Dataset data(3);
    CounterRng rng(16);
    for (int i = 0; i < 20; ++i) {
        const double a = rng.normal();
        data.add_row(InterventionTarget{}, std::vector<double>{a, 2.0 * a, rng.normal()});
    }
    const auto collinear = local_stats(sufficient_stats(data));
    EXPECT_EQ(local_score(2, singleton(0) | singleton(1), collinear, 1.0), kInfeasibleScore);
    EXPECT_GT(local_score(2, singleton(0), collinear, 1.0), kInfeasibleScore);
}

TEST(LocalScore, MatchesNumericMaximizer) {
    CounterRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = random_instance(rng, 4);
        const auto local = local_stats(sufficient_stats(inst.data));
        const int p = local.dimension();
        const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
        if (!local.identified(k)) continue;
        const VertexSet parents = inst.model.dag().parents(k);
        const auto pa = members(parents);
        const Matrix& s = local.pooled(k);
        const double n = static_cast<double>(local.count(k));
        // ℓ_k(b, log σ²) evaluated directly from the pooled second moment.
        auto neg_ell = [&](const std::vector<double>& theta) {
            Vector row = Vector::Zero(p);
            row(k) = 1.0;
            for (std::size_t i = 0; i < pa.size(); ++i) row(pa[i]) = -theta[i];
            const double gamma = std::exp(-theta.back());
            return 0.5 * n * (gamma * row.dot(s * row) - std::log(gamma));
        };
        std::vector<double> start(pa.size() + 1, 0.0);
        const auto best = oracle::nelder_mead_minimize(neg_ell, start);
        EXPECT_NEAR(local_score(k, parents, local, 0.0), -neg_ell(best), 1e-5);
    }
}

TEST(BicScore, EmptyDagSumsMarginals) {
    CounterRng rng(18);
    const auto inst = random_instance(rng);
    const auto local = local_stats(sufficient_stats(inst.data));
    double expected = 0.0;
    for (int k = 0; k < local.dimension(); ++k) expected += local_score(k, 0, local, 0.0);
    EXPECT_DOUBLE_EQ(bic_score(Dag(local.dimension()), local, 3.0), expected);
}

TEST(BicScore, TrueChainBeatsEmptyDag) {
    Matrix b = Matrix::Zero(3, 3);
    b(1, 0) = 0.9;
    b(2, 1) = -0.8;
    const GaussianCausalModel model(Dag::from_edges(3, {{0, 1}, {1, 2}}), b, Vector{{1.0, 0.3, 0.3}});
    const auto data = oracle::sample_family_dataset(model, TargetFamily::observational(), 10000, InterventionSpec(), 19);
    const auto local = local_stats(sufficient_stats(data));
    const double penalty = default_penalty(local.total());
    EXPECT_NEAR(penalty, 0.5 * std::log(10000.0), 1e-15);
    EXPECT_GT(bic_score(model.dag(), local, penalty), bic_score(Dag(3), local, penalty));
}

TEST(MleGivenDag, EmptyDag) {
    CounterRng rng(20);
    const auto inst = random_instance(rng);
    const auto local = local_stats(sufficient_stats(inst.data));
    if (!local.unidentified().empty()) GTEST_SKIP();
    const auto fit = mle_given_dag(Dag(local.dimension()), local, 1.0);
    EXPECT_TRUE(fit.model.weights().isZero());
    for (int k = 0; k < local.dimension(); ++k) EXPECT_NEAR(fit.model.error_vars()(k), local.pooled(k)(k, k), 1e-14);
}

TEST(MleGivenDag, RecoversTwoNodeWeight) {
    Matrix b = Matrix::Zero(2, 2);
    b(1, 0) = 0.6;
    const GaussianCausalModel model(Dag::from_edges(2, {{0, 1}}), b, Vector{{1.0, 0.64}});
    const auto data = oracle::sample_family_dataset(model, TargetFamily::observational(), 100000, InterventionSpec(), 21);
    const auto fit = mle_given_dag(model.dag(), local_stats(sufficient_stats(data)), 1.0);
    EXPECT_NEAR(fit.model.weights()(1, 0), 0.6, 0.05);
}

TEST(MleGivenDag, FitDominatesTrueParameters) {
    CounterRng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = random_instance(rng);
        const auto stats = sufficient_stats(inst.data);
        const auto local = local_stats(stats);
        const auto fit = mle_given_dag(inst.model.dag(), local, default_penalty(stats.total()));
        EXPECT_GE(log_likelihood(fit.model, stats, inst.spec), log_likelihood(inst.model, stats, inst.spec) - 1e-9);
        EXPECT_NEAR(fit.log_likelihood, partial_log_likelihood(fit.model, local) + gaussian_constant(local), 1e-8);
        EXPECT_DOUBLE_EQ(fit.bic, bic_score(inst.model.dag(), local, default_penalty(stats.total())));
    }
}

TEST(MleGivenDag, GradientVanishesAtOptimum) {
    CounterRng rng(23);
    const double h = 1e-5;
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = random_instance(rng, 5);
        const auto stats = sufficient_stats(inst.data);
        const auto fit = mle_given_dag(inst.model.dag(), local_stats(stats), 1.0);
        const Matrix& b = fit.model.weights();
        const Vector& v = fit.model.error_vars();
        auto ll = [&](const Matrix& bb, const Vector& vv) {
            return log_likelihood(with_parameters(fit.model, bb, vv), stats, inst.spec);
        };
        double worst = 0.0;
        for (auto [from, to] : fit.model.dag().edges()) {
            Matrix plus = b;
            Matrix minus = b;
            plus(to, from) += h;
            minus(to, from) -= h;
            worst = std::max(worst, std::abs(ll(plus, v) - ll(minus, v)) / (2 * h));
        }
        for (int k = 0; k < fit.model.size(); ++k) {
            Vector plus = v;
            Vector minus = v;
            plus(k) += h;
            minus(k) -= h;
            worst = std::max(worst, std::abs(ll(b, plus) - ll(b, minus)) / (2 * h));
        }
        EXPECT_LE(worst, 1e-4);
    }
}

TEST(MleGivenDag, DegenerateFitNamesVertex) {
    Dataset data(2);
    data.add_row(InterventionTarget{}, std::vector<double>{1.0, 2.0});
    const auto local = local_stats(sufficient_stats(data));
    try {
        mle_given_dag(Dag::from_edges(2, {{0, 1}}), local, 1.0);
        FAIL() << "expected DegenerateFitError";
    } catch (const DegenerateFitError& e) {
        EXPECT_EQ(e.vertex(), 1);
    }
}

TEST(ScoreCache, ConcurrentLookupsAgreeWithDirectScores) {
    CounterRng rng(24);
    const auto inst = random_instance(rng, 6, 100);
    const auto local = local_stats(sufficient_stats(inst.data));
    const int p = local.dimension();
    const ScoreCache cache(local, 1.5);
    std::vector<std::jthread> workers;
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&] {
            for (int k = 0; k < p; ++k)
                for (VertexSet s = 0; s <= full_set(p); ++s) {
                    if (contains(s, k)) continue;
                    const double direct = local_score(k, s, local, 1.5);
                    const double cached = cache.score(k, s);
                    if (!(cached == direct)) ADD_FAILURE() << "mismatch at " << k;
                }
        });
    }
    workers.clear();
    EXPECT_GT(cache.size(), 0U);
}
