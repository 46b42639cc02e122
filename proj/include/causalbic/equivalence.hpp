#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalbic/dag.hpp"

namespace causalbic {

/// Undirected edges as (a, b) with a < b, sorted.
struct Skeleton {
    int p = 0;
    std::vector<std::pair<int, int>> edges;

    friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

/// Collider a -> b <- c with a and c non-adjacent; canonical a < c.
struct VStructure {
    int a;
    int b;
    int c;

    friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

/// Partially directed graph: directed (from, to) edges and undirected (a, b), a < b.
/// A DAG converts to one with no undirected edges.
struct EssentialGraph {
    int p = 0;
    std::vector<std::pair<int, int>> directed;
    std::vector<std::pair<int, int>> undirected;

    static EssentialGraph from_dag(const Dag& dag);

    bool has_directed(int from, int to) const;
    bool has_undirected(int a, int b) const;

    friend bool operator==(const EssentialGraph&, const EssentialGraph&) = default;
};

Skeleton skeleton(const Dag& dag);
std::vector<VStructure> v_structures(const Dag& dag);

bool conservative(const TargetFamily& family, int p);

/// Graphical criterion: equal skeletons, and for every target equal skeletons
/// and v-structures of the intervention DAGs. Throws ParameterError when the
/// family is not conservative.
bool markov_equivalent_interventional(const Dag& d1, const Dag& d2, const TargetFamily& family);

inline constexpr int kMaxEnumerationEdges = 20;
inline constexpr std::size_t kDefaultMemberBudget = 2'000'000;

/// All DAGs interventionally equivalent to `dag`, `dag` first, the rest in
/// search order. Throws CapacityError beyond kMaxEnumerationEdges skeleton edges.
std::vector<Dag> enumerate_class(const Dag& dag, const TargetFamily& family);

/// Edges oriented identically by every class member are directed, the rest
/// undirected. Throws CapacityError once the class exceeds `member_budget`.
EssentialGraph essential_graph(const Dag& dag, const TargetFamily& family,
                               std::size_t member_budget = kDefaultMemberBudget);

bool same_essential_graph(const Dag& d1, const Dag& d2, const TargetFamily& family);

/// Sorted lines `a -> b` and `a -- b`, 1-based.
std::string format_essential_graph(const EssentialGraph& graph);
EssentialGraph parse_essential_graph(int p, std::string_view text);

}  // namespace causalbic
