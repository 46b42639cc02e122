#pragma once

#include <cstddef>

#include "causalbic/equivalence.hpp"

namespace causalbic {

struct ConfusionCounts {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t true_negatives = 0;

    std::size_t total() const noexcept {
        return true_positives + false_positives + false_negatives + true_negatives;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Number of vertex pairs {i, j} whose adjacency pattern (A_ij, A_ji) differs;
/// an undirected edge sets both entries.
std::size_t shd(const EssentialGraph& g1, const EssentialGraph& g2);
std::size_t shd(const Dag& g1, const Dag& g2);

/// Positions are unordered pairs; positive means adjacent.
ConfusionCounts skeleton_confusion(const EssentialGraph& truth, const EssentialGraph& estimate);

/// Positions are ordered pairs (i, j), i != j; positive means A_ij = 1.
ConfusionCounts directed_confusion(const EssentialGraph& truth, const EssentialGraph& estimate);

}  // namespace causalbic
