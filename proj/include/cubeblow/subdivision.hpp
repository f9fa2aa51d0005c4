#pragma once

// s-fold subdivision of precubical sets. A cell of (1/s)P is a pair
// (base cube x, tuple t) where t gives one doubled coordinate per axis of
// x, each in [1, 2s-1]: even entry 2a is the interior wall vertex at a/s,
// odd entry 2a+1 the open segment (a/s, (a+1)/s). The cell's dimension is
// the number of odd entries. Cells with a coordinate at 0 or 2s are not
// stored on x; they live on the corresponding face of x, which is what the
// boundary case of sub_face computes.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"

namespace cubeblow {

struct SubCube {
    CubeId base;
    std::vector<int> t;  // doubled numerators, one per axis of base

    int dim() const {
        int d = 0;
        for (int v : t) d += (v % 2 != 0);
        return d;
    }
    bool is_vertex() const { return dim() == 0; }

    friend bool operator==(const SubCube&, const SubCube&) = default;
    friend auto operator<=>(const SubCube&, const SubCube&) = default;
};

inline std::string sub_key(const SubCube& c, int s) {
    return c.base.key + "@" + detail::grid_key(c.t) + "/" + std::to_string(2 * s);
}

/// Inverse of sub_key against a known base complex. Scans candidate "@("
/// separators from the right so base keys containing '@' still parse.
inline std::optional<SubCube> try_parse_sub_key(const PrecubicalSet& base, const std::string& key,
                                                int s) {
    std::string tail = "/" + std::to_string(2 * s);
    if (key.size() < tail.size() || key.compare(key.size() - tail.size(), tail.size(), tail) != 0)
        return std::nullopt;
    std::string head = key.substr(0, key.size() - tail.size());
    for (std::size_t pos = head.rfind("@(");; pos = head.rfind("@(", pos - 1)) {
        if (pos == std::string::npos) return std::nullopt;
        std::string basekey = head.substr(0, pos);
        auto tuple = detail::parse_grid_key(head.substr(pos + 1));
        if (tuple && base.has(basekey)) {
            CubeId b = base.cube(basekey);
            bool entries_ok = static_cast<int>(tuple->size()) == b.dim;
            for (int v : *tuple)
                if (v < 1 || v > 2 * s - 1) entries_ok = false;
            if (entries_ok) return SubCube{b, *tuple};
        }
        if (pos == 0) return std::nullopt;
    }
}

inline SubCube parse_sub_key(const PrecubicalSet& base, const std::string& key, int s) {
    auto c = try_parse_sub_key(base, key, s);
    if (!c) throw std::invalid_argument("not a subdivision cell key: " + key);
    return *c;
}

/// Base cube underlying a subdivision cell key.
inline CubeId underlying(const PrecubicalSet& base, const std::string& key, int s) {
    return parse_sub_key(base, key, s).base;
}

/// Face of a subdivision cell. Direction i refers to the i-th odd slot of
/// t. Away from the base boundary the coordinate just steps to the
/// adjacent wall vertex; at 1 (going minus) or 2s-1 (going plus) the slot
/// is dropped and the matching face of the base cube is taken.
inline SubCube sub_face(const PrecubicalSet& p, int s, const SubCube& c, int i, Sign sg) {
    int slot = -1, seen = 0;
    for (std::size_t j = 0; j < c.t.size(); ++j)
        if (c.t[j] % 2 != 0 && seen++ == i) {
            slot = static_cast<int>(j);
            break;
        }
    if (slot < 0) throw std::out_of_range("sub_face direction out of range");
    int v = c.t[static_cast<std::size_t>(slot)];
    if (sg == Sign::minus && v == 1) {
        SubCube f{p.face(c.base, slot, Sign::minus), c.t};
        f.t.erase(f.t.begin() + slot);
        return f;
    }
    if (sg == Sign::plus && v == 2 * s - 1) {
        SubCube f{p.face(c.base, slot, Sign::plus), c.t};
        f.t.erase(f.t.begin() + slot);
        return f;
    }
    SubCube f = c;
    f.t[static_cast<std::size_t>(slot)] = v + (sg == Sign::plus ? 1 : -1);
    return f;
}

/// Midpoint vertex of a cube in the s-subdivision; s must be even.
inline SubCube midpoint(const PrecubicalSet& p, const CubeId& c, int s) {
    if (s % 2 != 0) throw std::invalid_argument("midpoint needs an even subdivision arity");
    if (!p.has(c)) throw UnknownCube(c.key);
    return SubCube{c, std::vector<int>(static_cast<std::size_t>(c.dim), s)};
}

/// The full s-subdivision (1/s)P. Top-type cells (all slots odd) inherit
/// the base cube's label.
inline PrecubicalSet subdivide(const PrecubicalSet& p, int s) {
    if (s < 1) throw std::invalid_argument("subdivision arity must be positive");
    PcsBuilder b;
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& x : p.all_cubes()) {
        std::vector<int> t(static_cast<std::size_t>(x.dim), 1);
        while (true) {
            SubCube c{x, t};
            b.add_cube(c.dim(), sub_key(c, s));
            if (c.dim() == x.dim && p.has_label(x.key))
                b.set_label(sub_key(c, s), p.label(x.key));
            int i = 0;
            for (; i < x.dim; ++i) {
                if (++t[static_cast<std::size_t>(i)] <= 2 * s - 1) break;
                t[static_cast<std::size_t>(i)] = 1;
            }
            if (i == x.dim) break;
        }
    }
    for (const CubeId& x : p.all_cubes()) {
        if (x.dim == 0) continue;
        std::vector<int> t(static_cast<std::size_t>(x.dim), 1);
        while (true) {
            SubCube c{x, t};
            int d = c.dim();
            if (d > 0) {
                std::string key = sub_key(c, s);
                for (int i = 0; i < d; ++i)
                    for (Sign sg : signs)
                        b.set_face(key, i, sg, sub_key(sub_face(p, s, c, i, sg), s));
            }
            int i = 0;
            for (; i < x.dim; ++i) {
                if (++t[static_cast<std::size_t>(i)] <= 2 * s - 1) break;
                t[static_cast<std::size_t>(i)] = 1;
            }
            if (i == x.dim) break;
        }
    }
    return b.build();
}

/// Subcomplex of (1/s)P spanned by the cells within Chebyshev distance
/// `radius` grid steps of an interior vertex of the subdivision, without
/// materializing the whole subdivision. Cells over a coface y of the
/// base are found through the face embeddings of y: surviving slots stay
/// near the centre coordinate, dropped slots hug the matching wall.
inline PrecubicalSet local_star(const PrecubicalSet& p, int s, const SubCube& center,
                                int radius = 1) {
    if (!center.is_vertex())
        throw std::invalid_argument("local_star centre must be a subdivision vertex");
    if (radius < 0) throw std::invalid_argument("local_star radius must be nonnegative");

    std::set<SubCube> cells;
    for (const CubeId& y : p.all_cubes()) {
        auto embs = face_embeddings(p, y);
        auto it = embs.find(center.base);
        if (it == embs.end()) continue;
        for (const FaceEmbedding& e : it->second) {
            std::vector<std::pair<int, int>> range(static_cast<std::size_t>(y.dim));
            int kept = 0;
            bool empty = false;
            for (int slot = 0; slot < y.dim; ++slot) {
                int lo, hi;
                if (!e[static_cast<std::size_t>(slot)]) {
                    int u = center.t[static_cast<std::size_t>(kept++)];
                    lo = std::max(1, u - radius);
                    hi = std::min(2 * s - 1, u + radius);
                } else if (*e[static_cast<std::size_t>(slot)] == Sign::minus) {
                    lo = 1;
                    hi = std::min(2 * s - 1, radius);
                } else {
                    lo = std::max(1, 2 * s - radius);
                    hi = 2 * s - 1;
                }
                if (lo > hi) empty = true;
                range[static_cast<std::size_t>(slot)] = {lo, hi};
            }
            if (empty) continue;
            std::vector<int> t(static_cast<std::size_t>(y.dim));
            for (int slot = 0; slot < y.dim; ++slot)
                t[static_cast<std::size_t>(slot)] = range[static_cast<std::size_t>(slot)].first;
            while (true) {
                cells.insert(SubCube{y, t});
                int i = 0;
                for (; i < y.dim; ++i) {
                    if (++t[static_cast<std::size_t>(i)] <= range[static_cast<std::size_t>(i)].second)
                        break;
                    t[static_cast<std::size_t>(i)] = range[static_cast<std::size_t>(i)].first;
                }
                if (i == y.dim) break;
            }
        }
    }

    // close under faces
    std::vector<SubCube> stack(cells.begin(), cells.end());
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    while (!stack.empty()) {
        SubCube c = stack.back();
        stack.pop_back();
        for (int i = 0; i < c.dim(); ++i)
            for (Sign sg : signs) {
                SubCube f = sub_face(p, s, c, i, sg);
                if (cells.insert(f).second) stack.push_back(f);
            }
    }

    PcsBuilder b;
    for (const SubCube& c : cells) {
        std::string key = sub_key(c, s);
        b.add_cube(c.dim(), key);
        if (c.dim() == c.base.dim && p.has_label(c.base.key)) b.set_label(key, p.label(c.base.key));
    }
    for (const SubCube& c : cells) {
        std::string key = sub_key(c, s);
        for (int i = 0; i < c.dim(); ++i)
            for (Sign sg : signs) b.set_face(key, i, sg, sub_key(sub_face(p, s, c, i, sg), s));
    }
    return b.build();
}

}  // namespace cubeblow
