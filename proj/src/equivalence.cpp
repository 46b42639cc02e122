#include "causalbic/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "causalbic/errors.hpp"

namespace causalbic {

EssentialGraph EssentialGraph::from_dag(const Dag& dag) {
    return EssentialGraph{dag.size(), dag.edges(), {}};
}

bool EssentialGraph::has_directed(int from, int to) const {
    return std::binary_search(directed.begin(), directed.end(), std::pair{from, to});
}

bool EssentialGraph::has_undirected(int a, int b) const {
    return std::binary_search(undirected.begin(), undirected.end(), std::pair{std::min(a, b), std::max(a, b)});
}

Skeleton skeleton(const Dag& dag) {
    Skeleton out{dag.size(), {}};
    for (auto [from, to] : dag.edges()) out.edges.emplace_back(std::min(from, to), std::max(from, to));
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::vector<VStructure> v_structures(const Dag& dag) {
    std::vector<VStructure> out;
    for (int b = 0; b < dag.size(); ++b) {
        const std::vector<int> pa = members(dag.parents(b));
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!dag.adjacent(pa[i], pa[j])) out.push_back({pa[i], b, pa[j]});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool conservative(const TargetFamily& family, int p) {
    family.validate(p);
    VertexSet always = full_set(p);
    for (auto t : family.targets()) always &= t.members();
    return always == 0;
}

namespace {

void require_conservative(const TargetFamily& family, int p) {
    if (!conservative(family, p)) throw ParameterError("target family is not conservative");
}

// Depth-first search over orientations of the skeleton of `dag`, visiting
// exactly the DAGs interventionally equivalent to it. Orientations are pruned
// as soon as a partial assignment violates a constraint:
//   * an edge with exactly one endpoint in some target keeps its orientation
//     (otherwise that intervention DAG's skeleton changes);
//   * for a triple a - b - c whose endpoints are non-adjacent in some
//     intervention DAG with b unintervened, collider status at b must match;
//   * no directed cycles.
class ClassSearch {
public:
    using Visitor = std::function<void(const std::vector<VertexSet>&)>;

    ClassSearch(const Dag& dag, const TargetFamily& family, std::size_t budget)
        : dag_(dag), p_(dag.size()), budget_(budget) {
        family.validate(p_);
        require_conservative(family, p_);

        std::vector<int> position(static_cast<std::size_t>(p_));
        const std::vector<int> order = dag.topological_order();
        for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

        for (auto [from, to] : dag.edges()) edges_.push_back({from, to});
        std::sort(edges_.begin(), edges_.end(), [&](const Edge& x, const Edge& y) {
            const auto key = [&](const Edge& e) {
                return std::pair{position[static_cast<std::size_t>(e.to)], position[static_cast<std::size_t>(e.from)]};
            };
            return key(x) < key(y);
        });

        const auto& targets = family.targets();
        for (Edge& e : edges_) {
            for (auto t : targets) {
                if (t.contains(e.from) != t.contains(e.to)) e.forced = true;
            }
        }

        // Adjacency of (a, c) in the intervention DAG of target t.
        const auto adjacent_in = [&](InterventionTarget t, int a, int c) {
            return (dag.has_edge(a, c) && !t.contains(c)) || (dag.has_edge(c, a) && !t.contains(a));
        };
        checks_.resize(edges_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            for (std::size_t f = 0; f < e; ++f) {
                const int b = shared_vertex(edges_[e], edges_[f]);
                if (b < 0) continue;
                const int a = other(edges_[e], b);
                const int c = other(edges_[f], b);
                bool relevant = false;
                for (auto t : targets) {
                    if (!t.contains(b) && !adjacent_in(t, a, c)) relevant = true;
                }
                if (!relevant) continue;
                const bool collider = dag.has_edge(a, b) && dag.has_edge(c, b);
                checks_[e].push_back({f, b, collider});
            }
        }
        parents_.assign(static_cast<std::size_t>(p_), 0);
        into_.assign(edges_.size(), -1);
    }

    std::size_t edge_count() const noexcept { return edges_.size(); }

    void run(const Visitor& visit) {
        visit_ = &visit;
        descend(0);
    }

private:
    struct Edge {
        int from;  // orientation in the reference DAG
        int to;
        bool forced = false;
    };
    struct Check {
        std::size_t other;  // earlier edge sharing vertex `center`
        int center;
        bool collider;  // collider status in the reference DAG
    };

    static int shared_vertex(const Edge& x, const Edge& y) {
        if (x.from == y.from || x.from == y.to) return x.from;
        if (x.to == y.from || x.to == y.to) return x.to;
        return -1;
    }
    static int other(const Edge& e, int v) { return e.from == v ? e.to : e.from; }

    bool reaches(int from, int to) const {
        VertexSet seen = singleton(to);
        VertexSet frontier = seen;
        while (frontier != 0) {
            if (contains(seen, from)) return true;
            VertexSet next = 0;
            for_each_member(frontier, [&](int v) { next |= parents_[static_cast<std::size_t>(v)]; });
            frontier = next & ~seen;
            seen |= next;
        }
        return false;
    }

    bool consistent(std::size_t e) const {
        for (const Check& check : checks_[e]) {
            const bool collider = into_[e] == check.center && into_[check.other] == check.center;
            if (collider != check.collider) return false;
        }
        return true;
    }

    void descend(std::size_t e) {
        if (e == edges_.size()) {
            if (++found_ > budget_) {
                throw CapacityError("interventional equivalence class exceeds " + std::to_string(budget_) + " members");
            }
            (*visit_)(parents_);
            return;
        }
        const Edge& edge = edges_[e];
        for (int flip = 0; flip < (edge.forced ? 1 : 2); ++flip) {
            const int from = flip == 0 ? edge.from : edge.to;
            const int to = flip == 0 ? edge.to : edge.from;
            if (reaches(to, from)) continue;
            into_[e] = to;
            if (consistent(e)) {
                parents_[static_cast<std::size_t>(to)] |= singleton(from);
                descend(e + 1);
                parents_[static_cast<std::size_t>(to)] &= ~singleton(from);
            }
            into_[e] = -1;
        }
    }

    const Dag& dag_;
    int p_;
    std::size_t budget_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Check>> checks_;
    std::vector<VertexSet> parents_;
    std::vector<int> into_;  // head vertex of each assigned edge
    std::size_t found_ = 0;
    const Visitor* visit_ = nullptr;
};

}  // namespace

bool markov_equivalent_interventional(const Dag& d1, const Dag& d2, const TargetFamily& family) {
    if (d1.size() != d2.size()) throw ParameterError("dags differ in vertex count");
    family.validate(d1.size());
    require_conservative(family, d1.size());
    if (skeleton(d1) != skeleton(d2)) return false;
    for (auto t : family.targets()) {
        const Dag i1 = intervention_dag(d1, t);
        const Dag i2 = intervention_dag(d2, t);
        if (skeleton(i1) != skeleton(i2) || v_structures(i1) != v_structures(i2)) return false;
    }
    return true;
}

std::vector<Dag> enumerate_class(const Dag& dag, const TargetFamily& family) {
    if (dag.edge_count() > kMaxEnumerationEdges) {
        throw CapacityError("class enumeration limited to " + std::to_string(kMaxEnumerationEdges) +
                            " skeleton edges, got " + std::to_string(dag.edge_count()));
    }
    ClassSearch search(dag, family, ~std::size_t{0});
    std::vector<Dag> out;
    search.run([&](const std::vector<VertexSet>& parents) { out.push_back(Dag::from_parent_sets(parents)); });
    return out;
}

EssentialGraph essential_graph(const Dag& dag, const TargetFamily& family, std::size_t member_budget) {
    ClassSearch search(dag, family, member_budget);
    const std::vector<std::pair<int, int>> edges = dag.edges();
    std::vector<bool> reversed(edges.size(), false);
    search.run([&](const std::vector<VertexSet>& parents) {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (contains(parents[static_cast<std::size_t>(edges[i].first)], edges[i].second)) reversed[i] = true;
        }
    });
    EssentialGraph out{dag.size(), {}, {}};
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [from, to] = edges[i];
        if (reversed[i]) {
            out.undirected.emplace_back(std::min(from, to), std::max(from, to));
        } else {
            out.directed.emplace_back(from, to);
        }
    }
    std::sort(out.undirected.begin(), out.undirected.end());
    return out;
}

bool same_essential_graph(const Dag& d1, const Dag& d2, const TargetFamily& family) {
    if (d1.size() != d2.size()) throw ParameterError("dags differ in vertex count");
    return essential_graph(d1, family) == essential_graph(d2, family);
}

std::string format_essential_graph(const EssentialGraph& graph) {
    std::vector<std::tuple<int, int, bool>> lines;
    for (auto [a, b] : graph.directed) lines.emplace_back(a, b, true);
    for (auto [a, b] : graph.undirected) lines.emplace_back(a, b, false);
    std::sort(lines.begin(), lines.end());
    std::ostringstream out;
    for (auto [a, b, directed] : lines) out << a + 1 << (directed ? " -> " : " -- ") << b + 1 << '\n';
    return out.str();
}

EssentialGraph parse_essential_graph(int p, std::string_view text) {
    EssentialGraph out{p, {}, {}};
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        int a = 0;
        int b = 0;
        std::string arrow;
        if (!(fields >> a)) continue;
        if (!(fields >> arrow >> b) || (arrow != "->" && arrow != "--") || a < 1 || b < 1 || a > p || b > p || a == b) {
            throw InputError("essential graph line " + std::to_string(line_no) + " malformed");
        }
        if (arrow == "->") {
            out.directed.emplace_back(a - 1, b - 1);
        } else {
            out.undirected.emplace_back(std::min(a, b) - 1, std::max(a, b) - 1);
        }
    }
    std::sort(out.directed.begin(), out.directed.end());
    std::sort(out.undirected.begin(), out.undirected.end());
    return out;
}

}  // namespace causalbic
