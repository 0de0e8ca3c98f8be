#pragma once

// Zigzags in the localization of the face poset about a relation set W, and
// transport of bisheaf data along them.
//
// A witness is kept in alternating form
//     s_0 <= s_1 >= s_2 <= ... >= s_{k-1} <= s_k
// with equalities inserted wherever two consecutive steps point the same way.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "field_matrix.hpp"
#include "stratify.hpp"

namespace bistrat {

enum class Direction { forward, backward };  // forward: s_i <= s_{i+1}

struct ZigzagWitness {
    std::vector<SimplexId> simplices;
    std::vector<Direction> directions;  // directions[i] relates simplices[i] and simplices[i + 1]
    std::string relation_tag;           // the W it was found in, if any

    SimplexId source() const { return simplices.front(); }
    SimplexId target() const { return simplices.back(); }
    std::size_t steps() const { return directions.size(); }

    friend bool operator==(const ZigzagWitness&, const ZigzagWitness&) = default;
};

namespace detail {

inline Direction orient(const Complex& c, SimplexId a, SimplexId b) {
    if (a == b) return Direction::forward;
    if (c.is_face(a, b)) return Direction::forward;
    if (c.is_face(b, a)) return Direction::backward;
    throw TransportError("{" + c.simplex(a).to_string() + "} and {" + c.simplex(b).to_string() +
                         "} are not related by a face relation");
}

} // namespace detail

// Puts a path of pairwise comparable simplices into alternating form.
inline ZigzagWitness witness_from_path(const Complex& c, const std::vector<SimplexId>& path, std::string tag = {}) {
    if (path.empty()) throw TransportError("empty zigzag path");
    ZigzagWitness w{{path.front()}, {}, std::move(tag)};
    Direction expected = Direction::forward;
    auto flip = [](Direction d) { return d == Direction::forward ? Direction::backward : Direction::forward; };
    for (std::size_t i = 1; i < path.size(); ++i) {
        Direction dir = path[i - 1] == path[i] ? expected : detail::orient(c, path[i - 1], path[i]);
        if (dir != expected) {
            w.simplices.push_back(path[i - 1]);
            w.directions.push_back(expected);
            expected = flip(expected);
        }
        w.simplices.push_back(path[i]);
        w.directions.push_back(dir);
        expected = flip(expected);
    }
    if (w.directions.empty() || w.directions.back() != Direction::forward) {
        w.simplices.push_back(w.simplices.back());
        w.directions.push_back(Direction::forward);
    }
    return w;
}

// Structural check: alternating form, each step a face relation or equality,
// and every backward step in W or an equality.
inline bool is_valid_witness(const Complex& c, const ZigzagWitness& w, const RelationSet& relations) {
    if (w.simplices.size() != w.directions.size() + 1 || w.directions.empty()) return false;
    for (std::size_t i = 0; i < w.directions.size(); ++i) {
        const Direction expected = i % 2 == 0 ? Direction::forward : Direction::backward;
        if (w.directions[i] != expected) return false;
        SimplexId a = w.simplices[i], b = w.simplices[i + 1];
        if (a >= c.size() || b >= c.size()) return false;
        if (a == b) continue;
        if (w.directions[i] == Direction::forward) {
            if (!c.is_face(a, b)) return false;
        } else if (!c.is_face(b, a) || !relations.contains(b, a)) {
            return false;
        }
    }
    return w.directions.back() == Direction::forward;
}

// Shortest path in the undirected W-graph, neighbours visited in
// lexicographic order, returned in alternating form.
inline std::optional<ZigzagWitness> find_zigzag(const Complex& c, const RelationSet& w, SimplexId from, SimplexId to) {
    if (from >= c.size() || to >= c.size()) throw ComplexError("simplex id out of range");
    if (from == to) return witness_from_path(c, {from, from}, w.tag());

    std::vector<std::vector<SimplexId>> adjacent(c.size());
    for (auto [a, b] : w) {
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }
    for (auto& list : adjacent) std::sort(list.begin(), list.end());

    constexpr SimplexId unseen = static_cast<SimplexId>(-1);
    std::vector<SimplexId> parent(c.size(), unseen);
    parent[from] = from;
    std::queue<SimplexId> frontier;
    frontier.push(from);
    while (!frontier.empty() && parent[to] == unseen) {
        SimplexId x = frontier.front();
        frontier.pop();
        for (auto y : adjacent[x])
            if (parent[y] == unseen) {
                parent[y] = x;
                frontier.push(y);
            }
    }
    if (parent[to] == unseen) return std::nullopt;
    std::vector<SimplexId> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return witness_from_path(c, path, w.tag());
}

// The reverse zigzag, from target back to source.
inline ZigzagWitness reversed(const Complex& c, const ZigzagWitness& w) {
    std::vector<SimplexId> path(w.simplices.rbegin(), w.simplices.rend());
    return witness_from_path(c, path, w.relation_tag);
}

// first followed by second; first must end where second starts.
inline ZigzagWitness concatenate(const Complex& c, const ZigzagWitness& first, const ZigzagWitness& second) {
    if (first.target() != second.source()) throw TransportError("zigzags do not meet");
    std::vector<SimplexId> path = first.simplices;
    path.insert(path.end(), second.simplices.begin() + 1, second.simplices.end());
    return witness_from_path(c, path, first.relation_tag);
}

struct Transport {
    FieldMatrix phi;  // stalk(source) -> stalk(target)
    FieldMatrix psi;  // costalk(target) -> costalk(source)

    friend bool operator==(const Transport&, const Transport&) = default;
};

// Forward steps contribute restriction / extension maps, backward steps their
// inverses. Every step must be an isomorphism on both sides.
inline Transport transport(const Bisheaf& b, const ZigzagWitness& w) {
    const Complex& c = b.complex();
    if (w.simplices.size() != w.directions.size() + 1) throw TransportError("malformed zigzag");
    const SimplexId start = w.source();
    Transport t{FieldMatrix::identity(b.prime(), b.stalk_dim(start)),
                FieldMatrix::identity(b.prime(), b.costalk_dim(start))};
    for (std::size_t i = 0; i < w.directions.size(); ++i) {
        SimplexId x = w.simplices[i], y = w.simplices[i + 1];
        const bool forward = w.directions[i] == Direction::forward;
        SimplexId lo = forward ? x : y, hi = forward ? y : x;
        if (lo != hi && !c.is_face(lo, hi))
            throw TransportError("step {" + c.simplex(x).to_string() + "} -> {" + c.simplex(y).to_string() +
                                 "} does not match its direction");
        auto res = derived_restriction(b, lo, hi);
        auto ext = derived_extension(b, lo, hi);
        if (!is_isomorphism(res) || !is_isomorphism(ext))
            throw TransportError("zigzag crosses {" + c.simplex(lo).to_string() + "} < {" +
                                 c.simplex(hi).to_string() + "}, which is not in E");
        if (forward) {
            t.phi = multiply(res, t.phi);
            t.psi = multiply(t.psi, ext);
        } else {
            t.phi = multiply(inverse(res), t.phi);
            t.psi = multiply(t.psi, inverse(ext));
        }
    }
    return t;
}

// Transport around a closed zigzag; phi is an automorphism of the base stalk.
inline Transport monodromy(const Bisheaf& b, const ZigzagWitness& loop) {
    if (loop.source() != loop.target()) throw TransportError("monodromy needs a closed zigzag");
    return transport(b, loop);
}

} // namespace bistrat
