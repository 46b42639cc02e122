#include "causalbic/metrics.hpp"

#include <vector>

#include "causalbic/errors.hpp"

namespace causalbic {

namespace {

// Dense 0/1 adjacency: A[i][j] = 1 for i -> j and for both directions of i -- j.
std::vector<char> adjacency(const EssentialGraph& g) {
    const auto p = static_cast<std::size_t>(g.p);
    std::vector<char> a(p * p, 0);
    for (auto [i, j] : g.directed) a[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)] = 1;
    for (auto [i, j] : g.undirected) {
        a[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)] = 1;
        a[static_cast<std::size_t>(j) * p + static_cast<std::size_t>(i)] = 1;
    }
    return a;
}

void check_sizes(const EssentialGraph& g1, const EssentialGraph& g2) {
    if (g1.p != g2.p) throw ParameterError("graphs differ in vertex count");
}

}  // namespace

std::size_t shd(const EssentialGraph& g1, const EssentialGraph& g2) {
    check_sizes(g1, g2);
    const auto p = static_cast<std::size_t>(g1.p);
    const auto a = adjacency(g1);
    const auto b = adjacency(g2);
    std::size_t distance = 0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            if (a[i * p + j] != b[i * p + j] || a[j * p + i] != b[j * p + i]) ++distance;
        }
    }
    return distance;
}

std::size_t shd(const Dag& g1, const Dag& g2) {
    return shd(EssentialGraph::from_dag(g1), EssentialGraph::from_dag(g2));
}

ConfusionCounts skeleton_confusion(const EssentialGraph& truth, const EssentialGraph& estimate) {
    check_sizes(truth, estimate);
    const auto p = static_cast<std::size_t>(truth.p);
    const auto a = adjacency(truth);
    const auto b = adjacency(estimate);
    ConfusionCounts counts;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const bool t = a[i * p + j] || a[j * p + i];
            const bool e = b[i * p + j] || b[j * p + i];
            if (t && e) ++counts.true_positives;
            else if (e) ++counts.false_positives;
            else if (t) ++counts.false_negatives;
            else ++counts.true_negatives;
        }
    }
    return counts;
}

ConfusionCounts directed_confusion(const EssentialGraph& truth, const EssentialGraph& estimate) {
    check_sizes(truth, estimate);
    const auto p = static_cast<std::size_t>(truth.p);
    const auto a = adjacency(truth);
    const auto b = adjacency(estimate);
    ConfusionCounts counts;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) continue;
            const bool t = a[i * p + j] != 0;
            const bool e = b[i * p + j] != 0;
            if (t && e) ++counts.true_positives;
            else if (e) ++counts.false_positives;
            else if (t) ++counts.false_negatives;
            else ++counts.true_negatives;
        }
    }
    return counts;
}

}  // namespace causalbic
