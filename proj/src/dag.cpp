#include "causalbic/dag.hpp"

#include <algorithm>
#include <bit>

#include "causalbic/errors.hpp"

namespace causalbic {

namespace {

void check_vertex_count(int p) {
    if (p < 0 || p > kMaxVertices) {
        throw CapacityError("vertex count " + std::to_string(p) + " outside [0, 64]");
    }
}

}  // namespace

Dag::Dag(int p) {
    check_vertex_count(p);
    parents_.assign(static_cast<std::size_t>(p), 0);
}

Dag Dag::from_edges(int p, const std::vector<std::pair<int, int>>& edges) {
    Dag dag(p);
    for (auto [from, to] : edges) dag.add_edge(from, to);
    return dag;
}

Dag Dag::from_parent_sets(std::vector<VertexSet> parents) {
    Dag dag(static_cast<int>(parents.size()));
    for (int v = 0; v < dag.size(); ++v) dag.set_parents(v, parents[static_cast<std::size_t>(v)]);
    if (static_cast<int>(dag.topological_order().size()) != dag.size()) {
        throw ParameterError("parent sets contain a directed cycle");
    }
    return dag;
}

VertexSet Dag::children(int v) const {
    VertexSet out = 0;
    for (int w = 0; w < size(); ++w) {
        if (contains(parents_[static_cast<std::size_t>(w)], v)) out |= singleton(w);
    }
    return out;
}

int Dag::edge_count() const {
    int count = 0;
    for (VertexSet pa : parents_) count += cardinality(pa);
    return count;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int to = 0; to < size(); ++to) {
        for_each_member(parents(to), [&](int from) { out.emplace_back(from, to); });
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Dag::reachable(int from, int to) const {
    // Walk backwards from `to` through parent masks.
    VertexSet seen = singleton(to);
    VertexSet frontier = seen;
    while (frontier != 0) {
        if (contains(seen, from)) return true;
        VertexSet next = 0;
        for_each_member(frontier, [&](int v) { next |= parents_[static_cast<std::size_t>(v)]; });
        frontier = next & ~seen;
        seen |= next;
    }
    return contains(seen, from);
}

bool Dag::can_add_edge(int from, int to) const {
    return from != to && !reachable(to, from);
}

void Dag::add_edge(int from, int to) {
    if (from < 0 || to < 0 || from >= size() || to >= size()) {
        throw ParameterError("edge label out of range");
    }
    if (from == to) throw ParameterError("self-loop at vertex " + std::to_string(from + 1));
    if (has_edge(from, to)) return;
    if (!can_add_edge(from, to)) {
        throw ParameterError("edge " + std::to_string(from + 1) + " -> " + std::to_string(to + 1) +
                             " would create a cycle");
    }
    parents_[static_cast<std::size_t>(to)] |= singleton(from);
}

void Dag::remove_edge(int from, int to) {
    parents_.at(static_cast<std::size_t>(to)) &= ~singleton(from);
}

void Dag::set_parents(int v, VertexSet parents) {
    if ((parents & ~full_set(size())) != 0 || contains(parents, v)) {
        throw ParameterError("invalid parent set for vertex " + std::to_string(v + 1));
    }
    parents_.at(static_cast<std::size_t>(v)) = parents;
}

std::vector<int> Dag::topological_order() const {
    // Kahn's algorithm, smallest available label first.
    std::vector<int> order;
    order.reserve(parents_.size());
    VertexSet placed = 0;
    const VertexSet all = full_set(size());
    while (placed != all) {
        int next = -1;
        for (int v = 0; v < size(); ++v) {
            if (!contains(placed, v) && (parents_[static_cast<std::size_t>(v)] & ~placed) == 0) {
                next = v;
                break;
            }
        }
        if (next < 0) break;  // cycle
        placed |= singleton(next);
        order.push_back(next);
    }
    return order;
}

InterventionTarget InterventionTarget::of(std::initializer_list<int> vertices) {
    VertexSet s = 0;
    for (int v : vertices) {
        if (v < 0 || v >= kMaxVertices) throw ParameterError("target label out of range");
        s |= singleton(v);
    }
    return InterventionTarget(s);
}

std::string InterventionTarget::to_string() const {
    std::string out;
    for_each_member(members_, [&](int v) {
        if (!out.empty()) out += ';';
        out += std::to_string(v + 1);
    });
    return out;
}

std::strong_ordering operator<=>(InterventionTarget a, InterventionTarget b) {
    VertexSet x = a.members_;
    VertexSet y = b.members_;
    while (x != 0 && y != 0) {
        const int lx = std::countr_zero(x);
        const int ly = std::countr_zero(y);
        if (lx != ly) return lx <=> ly;
        x &= x - 1;
        y &= y - 1;
    }
    return (x != 0) <=> (y != 0);
}

TargetFamily::TargetFamily(std::vector<InterventionTarget> targets) : targets_(std::move(targets)) {
    std::sort(targets_.begin(), targets_.end());
    targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());
    if (targets_.empty()) throw ParameterError("target family must be nonempty");
}

bool TargetFamily::contains(InterventionTarget t) const {
    return std::binary_search(targets_.begin(), targets_.end(), t);
}

void TargetFamily::validate(int p) const {
    if (targets_.empty()) throw ParameterError("target family must be nonempty");
    for (auto t : targets_) {
        if (!t.valid_for(p)) throw ParameterError("target {" + t.to_string() + "} invalid for p = " + std::to_string(p));
    }
}

Dag intervention_dag(const Dag& dag, InterventionTarget target) {
    if (!target.valid_for(dag.size())) throw ParameterError("target invalid for dag");
    Dag out = dag;
    for_each_member(target.members(), [&](int v) { out.set_parents(v, 0); });
    return out;
}

}  // namespace causalbic
