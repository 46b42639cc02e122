#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace causalbic {

/// Subset of {0, ..., 63} stored as a bit mask.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

constexpr VertexSet singleton(int v) { return VertexSet{1} << v; }

constexpr bool contains(VertexSet s, int v) { return (s >> v) & 1U; }

constexpr int cardinality(VertexSet s) { return std::popcount(s); }

constexpr VertexSet full_set(int p) {
    return p >= kMaxVertices ? ~VertexSet{0} : (singleton(p) - 1);
}

inline std::vector<int> members(VertexSet s) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(cardinality(s)));
    while (s != 0) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

/// Calls f(v) for every member in increasing order.
template <class F>
void for_each_member(VertexSet s, F&& f) {
    while (s != 0) {
        f(std::countr_zero(s));
        s &= s - 1;
    }
}

}  // namespace causalbic
