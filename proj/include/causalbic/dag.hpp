#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "causalbic/vertex_set.hpp"

namespace causalbic {

/// Directed acyclic graph on vertices 0..p-1, stored as one parent mask per vertex.
///
/// Every mutating member keeps the graph acyclic; an edge that would close a
/// cycle is rejected with ParameterError. External formats label vertices 1..p.
class Dag {
public:
    Dag() = default;
    explicit Dag(int p);

    /// Builds from (from, to) pairs, 0-based. Throws on cycles, self-loops or bad labels.
    static Dag from_edges(int p, const std::vector<std::pair<int, int>>& edges);
    static Dag from_parent_sets(std::vector<VertexSet> parents);

    int size() const noexcept { return static_cast<int>(parents_.size()); }
    VertexSet parents(int v) const { return parents_.at(static_cast<std::size_t>(v)); }
    VertexSet children(int v) const;
    const std::vector<VertexSet>& parent_sets() const noexcept { return parents_; }

    bool has_edge(int from, int to) const { return contains(parents(to), from); }
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
    int edge_count() const;

    /// Edges as (from, to), sorted lexicographically.
    std::vector<std::pair<int, int>> edges() const;

    /// True if a directed path from `from` to `to` exists (length >= 0).
    bool reachable(int from, int to) const;
    /// True if adding from->to keeps the graph acyclic.
    bool can_add_edge(int from, int to) const;

    void add_edge(int from, int to);
    void remove_edge(int from, int to);
    void set_parents(int v, VertexSet parents);

    std::vector<int> topological_order() const;

    friend bool operator==(const Dag&, const Dag&) = default;
    friend auto operator<=>(const Dag&, const Dag&) = default;

private:
    std::vector<VertexSet> parents_;
};

/// Set of intervened vertices; the empty target marks an observational sample.
class InterventionTarget {
public:
    constexpr InterventionTarget() = default;
    constexpr explicit InterventionTarget(VertexSet members) : members_(members) {}
    static InterventionTarget of(std::initializer_list<int> vertices);

    constexpr VertexSet members() const noexcept { return members_; }
    constexpr bool empty() const noexcept { return members_ == 0; }
    constexpr bool contains(int v) const noexcept { return causalbic::contains(members_, v); }
    constexpr int size() const noexcept { return cardinality(members_); }
    bool valid_for(int p) const noexcept { return (members_ & ~full_set(p)) == 0; }

    /// Semicolon-separated 1-based labels, empty string for the observational target.
    std::string to_string() const;

    friend constexpr bool operator==(InterventionTarget, InterventionTarget) = default;
    /// Orders by sorted member list (lexicographic), the empty target first.
    friend std::strong_ordering operator<=>(InterventionTarget a, InterventionTarget b);

private:
    VertexSet members_ = 0;
};

/// Nonempty set of distinct intervention targets, kept sorted.
class TargetFamily {
public:
    TargetFamily() = default;
    explicit TargetFamily(std::vector<InterventionTarget> targets);

    static TargetFamily observational() { return TargetFamily({InterventionTarget{}}); }

    const std::vector<InterventionTarget>& targets() const noexcept { return targets_; }
    bool contains(InterventionTarget t) const;
    void validate(int p) const;

    friend bool operator==(const TargetFamily&, const TargetFamily&) = default;

private:
    std::vector<InterventionTarget> targets_;
};

/// Copy of `dag` with every edge pointing into the target removed.
Dag intervention_dag(const Dag& dag, InterventionTarget target);

}  // namespace causalbic
