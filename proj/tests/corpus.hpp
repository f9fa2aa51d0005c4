#pragma once

// Shared complexes for the test suites: a handful of named shapes with
// known censuses plus seeded random generators (valid by construction).

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubeblow/core.hpp"
#include "cubeblow/dipath.hpp"

namespace cubeblow::corpus {

/// Four edges crossing at a central vertex: two in (from west and
/// south), two out (to east and north).
inline PrecubicalSet crossing_graph() {
    PcsBuilder b;
    for (const char* v : {"c", "e", "n", "s", "w"}) b.add_cube(0, v);
    auto edge = [&](const std::string& key, const std::string& from, const std::string& to) {
        b.add_cube(1, key);
        b.set_face(key, 0, Sign::minus, from);
        b.set_face(key, 0, Sign::plus, to);
    };
    edge("w>c", "w", "c");
    edge("s>c", "s", "c");
    edge("c>e", "c", "e");
    edge("c>n", "c", "n");
    return b.build();
}

/// Union of the three coordinate planes inside the directed cube
/// (-1 -> 0 -> 1)^3: the span of all product cells with at least one
/// factor equal to the middle vertex. 19 vertices, 30 edges, 12 squares.
inline PrecubicalSet coordinate_planes() {
    PrecubicalSet t = triple_interval();
    PrecubicalSet t3 = tensor(tensor(t, t), t);
    std::vector<CubeId> seeds;
    for (const CubeId& a : t.all_cubes())
        for (const CubeId& b : t.all_cubes())
            for (const CubeId& c : t.all_cubes()) {
                if (a.key != "0" && b.key != "0" && c.key != "0") continue;
                seeds.push_back(t3.cube(tensor_key(tensor_key(a.key, b.key), c.key)));
            }
    return span(t3, seeds);
}

/// Two squares sharing one vertical edge, cut out of a 2x2 grid. The
/// shared edge is "(0,-1)", the squares "(-1,-1)" and "(1,-1)".
inline PrecubicalSet square_pair() {
    PrecubicalSet gw = grid_window(2, 1);
    return span(gw, {gw.cube("(-1,-1)"), gw.cube("(1,-1)")});
}

/// A vertex with a directed loop plus a tail edge feeding it.
inline PrecubicalSet loop_with_tail() {
    PcsBuilder b;
    b.add_cube(0, "u").add_cube(0, "v");
    b.add_cube(1, "u>v").add_cube(1, "v>v");
    b.set_face("u>v", 0, Sign::minus, "u").set_face("u>v", 0, Sign::plus, "v");
    b.set_face("v>v", 0, Sign::minus, "v").set_face("v>v", 0, Sign::plus, "v");
    return b.build();
}

/// Two 4x4 sheets of squares glued like an open book along a shared row
/// of 5 vertices and 4 spine edges. Sheet A sits above the spine with
/// its transverse edges directed away from it; sheet B hangs below with
/// its transverse edges directed toward it. Every directed 2-traversal
/// through an interior spine vertex therefore enters from B and leaves
/// into A.
inline PrecubicalSet two_sheets() {
    PcsBuilder b;
    auto key = [](const std::string& stem, int i, int j) {
        return stem + std::to_string(i) + "," + std::to_string(j);
    };
    auto p = [](int i) { return "p" + std::to_string(i); };
    auto px = [](int i) { return "px" + std::to_string(i); };

    for (int i = 0; i <= 4; ++i) b.add_cube(0, p(i));
    for (int i = 0; i < 4; ++i) {
        b.add_cube(1, px(i));
        b.set_face(px(i), 0, Sign::minus, p(i));
        b.set_face(px(i), 0, Sign::plus, p(i + 1));
    }

    // sheet A, rows j = 1..4 above the spine
    for (int i = 0; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) b.add_cube(0, key("a", i, j));
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::string e = key("ay", i, j);
            b.add_cube(1, e);
            b.set_face(e, 0, Sign::minus, j == 0 ? p(i) : key("a", i, j));
            b.set_face(e, 0, Sign::plus, key("a", i, j + 1));
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            std::string e = key("ax", i, j);
            b.add_cube(1, e);
            b.set_face(e, 0, Sign::minus, key("a", i, j));
            b.set_face(e, 0, Sign::plus, key("a", i + 1, j));
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::string sq = key("as", i, j);
            b.add_cube(2, sq);
            b.set_face(sq, 0, Sign::minus, key("ay", i, j));
            b.set_face(sq, 0, Sign::plus, key("ay", i + 1, j));
            b.set_face(sq, 1, Sign::minus, j == 0 ? px(i) : key("ax", i, j));
            b.set_face(sq, 1, Sign::plus, key("ax", i, j + 1));
        }

    // sheet B, rows j = 1..4 below the spine, edges pointing up at it
    for (int i = 0; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) b.add_cube(0, key("b", i, j));
    for (int i = 0; i <= 4; ++i)
        for (int k = 1; k <= 4; ++k) {
            std::string e = key("bz", i, k);
            b.add_cube(1, e);
            b.set_face(e, 0, Sign::minus, key("b", i, k));
            b.set_face(e, 0, Sign::plus, k == 1 ? p(i) : key("b", i, k - 1));
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            std::string e = key("bx", i, j);
            b.add_cube(1, e);
            b.set_face(e, 0, Sign::minus, key("b", i, j));
            b.set_face(e, 0, Sign::plus, key("b", i + 1, j));
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::string sq = key("bs", i, j);
            b.add_cube(2, sq);
            b.set_face(sq, 0, Sign::minus, key("bz", i, j + 1));
            b.set_face(sq, 0, Sign::plus, key("bz", i + 1, j + 1));
            b.set_face(sq, 1, Sign::minus, key("bx", i, j + 1));
            b.set_face(sq, 1, Sign::plus, j == 0 ? px(i) : key("bx", i, j));
        }
    return b.build();
}

/// The spine of two_sheets as a cube path, edge to edge free.
inline std::vector<std::string> spine_steps(int from = 0, int to = 4) {
    std::vector<std::string> steps{"p" + std::to_string(from)};
    for (int i = from; i < to; ++i) {
        steps.push_back("px" + std::to_string(i));
        steps.push_back("p" + std::to_string(i + 1));
    }
    return steps;
}

inline PrecubicalSet random_graph(std::mt19937& rng, int max_extra_v = 5, int max_e = 10,
                                  bool allow_loops = true) {
    std::uniform_int_distribution<int> nv_d(2, 2 + max_extra_v), ne_d(1, max_e);
    int nv = nv_d(rng), ne = ne_d(rng);
    PcsBuilder b;
    for (int i = 0; i < nv; ++i) b.add_cube(0, "v" + std::to_string(i));
    std::uniform_int_distribution<int> v_d(0, nv - 1);
    for (int k = 0; k < ne; ++k) {
        int from = v_d(rng), to = v_d(rng);
        if (!allow_loops && from == to) to = (to + 1) % nv;
        std::string e = "e" + std::to_string(k);
        b.add_cube(1, e);
        b.set_face(e, 0, Sign::minus, "v" + std::to_string(from));
        b.set_face(e, 0, Sign::plus, "v" + std::to_string(to));
    }
    return b.build();
}

/// Span of a few random squares of a grid window.
inline PrecubicalSet random_patch(std::mt19937& rng) {
    std::uniform_int_distribution<int> r_d(1, 2);
    int r = r_d(rng);
    PrecubicalSet gw = grid_window(2, r);
    std::vector<std::string> squares = gw.cubes(2);
    std::uniform_int_distribution<int> k_d(1, 3), pick(0, static_cast<int>(squares.size()) - 1);
    std::vector<CubeId> seeds;
    int k = k_d(rng);
    for (int t = 0; t < k; ++t) seeds.push_back(gw.cube(squares[static_cast<std::size_t>(pick(rng))]));
    return span(gw, seeds);
}

inline PrecubicalSet random_tensor(std::mt19937& rng) {
    PrecubicalSet a = random_graph(rng, 1, 3);
    PrecubicalSet g = random_graph(rng, 1, 3);
    return tensor(a, g);
}

/// A random valid complex of dimension at most 2 and modest size.
inline PrecubicalSet random_complex(std::mt19937& rng) {
    std::uniform_int_distribution<int> recipe(0, 3);
    switch (recipe(rng)) {
        case 0: return random_graph(rng);
        case 1: return random_patch(rng);
        case 2: return random_tensor(rng);
        default: return random_graph(rng, 3, 6, false);
    }
}

/// Edge-to-edge walk: starts on an edge, alternates target vertex /
/// outgoing edge, and always ends on an edge. Returns nothing when the
/// complex has no edges.
inline std::optional<CubePath> random_edge_walk(const PrecubicalSet& p, std::mt19937& rng,
                                                int max_hops = 5) {
    const std::vector<std::string>& edges = p.cubes(1);
    if (edges.empty()) return std::nullopt;
    CofaceIndex cofaces(p);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(edges.size()) - 1);
    CubePath path;
    std::string cur = edges[static_cast<std::size_t>(pick(rng))];
    path.steps.push_back(cur);
    for (int hop = 0; hop < max_hops; ++hop) {
        std::string v = p.face_key(p.cube(cur), 0, Sign::plus);
        std::vector<std::string> outs;
        for (const auto& entry : cofaces.of(v))
            if (entry.coface.dim == 1 && entry.s == Sign::minus) outs.push_back(entry.coface.key);
        if (outs.empty()) break;
        std::sort(outs.begin(), outs.end());
        std::uniform_int_distribution<int> pe(0, static_cast<int>(outs.size()) - 1);
        std::string next = outs[static_cast<std::size_t>(pe(rng))];
        path.steps.push_back(v);
        path.moves.push_back(Move{false, {{0, Sign::plus}}});
        path.steps.push_back(next);
        path.moves.push_back(Move{true, {{0, Sign::minus}}});
        cur = next;
    }
    return path;
}

}  // namespace cubeblow::corpus
