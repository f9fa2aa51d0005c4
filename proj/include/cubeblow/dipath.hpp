#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup.hpp"

namespace cubeblow {

/// One transition of a cube path. `faces` is applied to the higher
/// dimensional endpoint letter by letter; on an up move every sign is
/// minus (the lower step is an iterated lower face of the next step),
/// on a down move every sign is plus.
struct Move {
    bool up = true;
    std::vector<std::pair<int, Sign>> faces;
};

struct CubePath {
    std::vector<std::string> steps;
    std::vector<Move> moves;
};

struct PathReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
    std::string to_string() const {
        std::string out;
        for (const std::string& p : problems) out += p + "\n";
        return out;
    }
};

inline PathReport validate_path(const PrecubicalSet& p, const CubePath& path) {
    PathReport rep;
    if (path.steps.empty()) {
        rep.problems.push_back("path has no steps");
        return rep;
    }
    if (path.moves.size() + 1 != path.steps.size()) {
        rep.problems.push_back("expected " + std::to_string(path.steps.size() - 1) +
                               " moves, found " + std::to_string(path.moves.size()));
        return rep;
    }
    for (const std::string& s : path.steps)
        if (!p.has(s)) {
            rep.problems.push_back("unknown cube " + s);
            return rep;
        }
    for (std::size_t j = 0; j < path.moves.size(); ++j) {
        const Move& mv = path.moves[j];
        const std::string label = "move " + std::to_string(j);
        CubeId higher = p.cube(mv.up ? path.steps[j + 1] : path.steps[j]);
        CubeId lower = p.cube(mv.up ? path.steps[j] : path.steps[j + 1]);
        if (mv.faces.empty() || static_cast<int>(mv.faces.size()) != higher.dim - lower.dim) {
            rep.problems.push_back(label + ": face word of length " +
                                   std::to_string(mv.faces.size()) + " cannot take dimension " +
                                   std::to_string(higher.dim) + " to " +
                                   std::to_string(lower.dim));
            continue;
        }
        const Sign need = mv.up ? Sign::minus : Sign::plus;
        CubeId cur = higher;
        bool good = true;
        for (const auto& [i, s] : mv.faces) {
            if (s != need) {
                rep.problems.push_back(label + (mv.up ? ": up move uses an upper face"
                                                      : ": down move uses a lower face"));
                good = false;
                break;
            }
            if (i < 0 || i >= cur.dim) {
                rep.problems.push_back(label + ": face index " + std::to_string(i) +
                                       " out of range for " + cur.key);
                good = false;
                break;
            }
            cur = p.face(cur, i, need);
        }
        if (good && cur.key != lower.key)
            rep.problems.push_back(label + ": face word lands on " + cur.key + ", expected " +
                                   lower.key);
    }
    return rep;
}

/// Builds the path through the given steps with canonical face words:
/// consecutive cubes must be related by iterated lower (up move) or
/// upper (down move) faces, and each word drops directions in ascending
/// slot order.
inline CubePath make_path(const PrecubicalSet& p, const std::vector<std::string>& steps) {
    CubePath path;
    path.steps = steps;
    for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
        CubeId a = p.cube(steps[j]);
        CubeId b = p.cube(steps[j + 1]);
        if (a.dim == b.dim)
            throw BuildError("consecutive path steps " + a.key + " and " + b.key +
                             " have equal dimension");
        const bool up = a.dim < b.dim;
        const CubeId& higher = up ? b : a;
        const CubeId& lower = up ? a : b;
        const Sign need = up ? Sign::minus : Sign::plus;
        auto embs = face_embeddings(p, higher);
        const FaceEmbedding* chosen = nullptr;
        if (auto it = embs.find(lower); it != embs.end())
            for (const FaceEmbedding& emb : it->second) {
                bool uniform = true;
                for (const auto& slot : emb)
                    if (slot && *slot != need) uniform = false;
                if (uniform) {
                    chosen = &emb;
                    break;
                }
            }
        if (!chosen)
            throw BuildError(lower.key + " is not an iterated " +
                             std::string(up ? "lower" : "upper") + " face of " + higher.key);
        Move mv;
        mv.up = up;
        int dropped = 0;
        for (std::size_t slot = 0; slot < chosen->size(); ++slot)
            if ((*chosen)[slot]) {
                mv.faces.emplace_back(static_cast<int>(slot) - dropped, need);
                ++dropped;
            }
        path.moves.push_back(std::move(mv));
    }
    return path;
}

/// Germ choice along a path, one fiber index per step.
struct GermPath {
    std::vector<int> germs;
};

namespace detail {

// For each germ over the lower endpoint of a move, the germ over the
// higher endpoint reached by composing codim-1 restrictions along the
// stored face word, when every link is defined.
inline std::vector<std::optional<int>> chain_map(const BlowupComplex& b, const CubeId& higher,
                                                 const Move& mv) {
    std::vector<CubeId> chain{higher};
    for (const auto& [i, s] : mv.faces) chain.push_back(b.base.face(chain.back(), i, s));
    std::size_t lower_size = b.fibers.at(chain.back().key).size();
    std::vector<std::optional<int>> out(lower_size);
    for (std::size_t g = 0; g < lower_size; ++g) {
        std::optional<int> idx = static_cast<int>(g);
        for (std::size_t t = mv.faces.size(); t > 0 && idx; --t) {
            const auto& [i, s] = mv.faces[t - 1];
            idx = b.table(chain[t - 1].key, i, s)[static_cast<std::size_t>(*idx)];
        }
        out[g] = idx;
    }
    return out;
}

}  // namespace detail

/// All germ assignments compatible with the restriction tables along the
/// path, in lexicographic order of fiber indices. Empty result means the
/// path has no lift.
inline std::vector<GermPath> lift_path(const BlowupComplex& b, const CubePath& path) {
    PathReport rep = validate_path(b.base, path);
    if (!rep.ok()) throw BuildError("invalid path: " + rep.problems.front());

    const std::size_t m = path.steps.size();
    std::vector<std::size_t> sizes(m);
    for (std::size_t j = 0; j < m; ++j) {
        sizes[j] = b.fibers.at(path.steps[j]).size();
        if (sizes[j] == 0) return {};
    }

    // allowed[j][a] = germ indices at step j+1 compatible with germ a at step j
    std::vector<std::vector<std::vector<int>>> allowed(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const Move& mv = path.moves[j];
        CubeId higher = b.base.cube(mv.up ? path.steps[j + 1] : path.steps[j]);
        std::vector<std::optional<int>> lifted = detail::chain_map(b, higher, mv);
        allowed[j].assign(sizes[j], {});
        if (mv.up) {
            for (std::size_t a = 0; a < sizes[j]; ++a)
                if (lifted[a]) allowed[j][a].push_back(*lifted[a]);
        } else {
            for (std::size_t g = 0; g < sizes[j + 1]; ++g)
                if (lifted[g])
                    allowed[j][static_cast<std::size_t>(*lifted[g])].push_back(
                        static_cast<int>(g));
        }
    }

    // keep only choices that extend to a complete assignment
    std::vector<std::vector<char>> alive(m);
    alive[m - 1].assign(sizes[m - 1], 1);
    for (std::size_t j = m - 1; j > 0; --j) {
        alive[j - 1].assign(sizes[j - 1], 0);
        for (std::size_t a = 0; a < sizes[j - 1]; ++a)
            for (int g : allowed[j - 1][a])
                if (alive[j][static_cast<std::size_t>(g)]) alive[j - 1][a] = 1;
    }

    std::vector<GermPath> lifts;
    GermPath cur;
    cur.germs.assign(m, 0);
    auto dfs = [&](auto&& self, std::size_t j) -> void {
        if (j == m) {
            lifts.push_back(cur);
            return;
        }
        if (j == 0) {
            for (std::size_t a = 0; a < sizes[0]; ++a)
                if (alive[0][a]) {
                    cur.germs[0] = static_cast<int>(a);
                    self(self, 1);
                }
            return;
        }
        for (int g : allowed[j - 1][static_cast<std::size_t>(cur.germs[j - 1])])
            if (alive[j][static_cast<std::size_t>(g)]) {
                cur.germs[j] = g;
                self(self, j + 1);
            }
    };
    dfs(dfs, 0);
    return lifts;
}

/// Re-checks one germ assignment against the restriction tables, move by
/// move, without the pruning used by lift_path.
inline bool check_lift(const BlowupComplex& b, const CubePath& path, const GermPath& gp) {
    if (gp.germs.size() != path.steps.size()) return false;
    for (std::size_t j = 0; j < path.steps.size(); ++j) {
        std::size_t size = b.fibers.at(path.steps[j]).size();
        if (gp.germs[j] < 0 || static_cast<std::size_t>(gp.germs[j]) >= size) return false;
    }
    for (std::size_t j = 0; j < path.moves.size(); ++j) {
        const Move& mv = path.moves[j];
        CubeId higher = b.base.cube(mv.up ? path.steps[j + 1] : path.steps[j]);
        int low = gp.germs[mv.up ? j : j + 1];
        int high = gp.germs[mv.up ? j + 1 : j];
        std::vector<std::optional<int>> lifted = detail::chain_map(b, higher, mv);
        const std::optional<int>& got = lifted[static_cast<std::size_t>(low)];
        if (!got || *got != high) return false;
    }
    return true;
}

struct LiftEntry {
    std::string cube;
    std::size_t fiber_one = 0;
    std::size_t fiber_n = 0;
    std::vector<int> uncovered;
    bool outside = false;
    bool flagged = false;
};

struct LocalLiftReport {
    std::vector<LiftEntry> entries;
    bool all_pass = true;
};

/// Edge-following approximation of the local lifting test: a cube passes
/// when every 1-germ over it sits inside some n-germ over it. Cubes with
/// an empty n-fiber but 1-germs present are reported as outside the
/// blowup image rather than flagged, so the truncation rim of a finite
/// patch does not drown the report. Only edge-following 1-germs exist
/// combinatorially; continuous diagonal germs have no counterpart here.
inline LocalLiftReport local_lift_report(const BlowupComplex& bn, const BlowupComplex& b1) {
    if (bn.n < 1) throw BuildError("local lift report needs n >= 1");
    if (b1.n != 1) throw BuildError("sibling complex must be a 1-blowup");
    if (b1.base.cube_count() != bn.base.cube_count())
        throw BuildError("sibling complex built over a different base");
    LocalLiftReport rep;
    for (const CubeId& c : bn.base.all_cubes()) {
        const std::vector<Lps>& f1 = b1.fibers.at(c.key);
        const std::vector<Lps>& fn = bn.fibers.at(c.key);
        LiftEntry e;
        e.cube = c.key;
        e.fiber_one = f1.size();
        e.fiber_n = fn.size();
        for (std::size_t q = 0; q < f1.size(); ++q) {
            bool covered = false;
            for (const Lps& big : fn)
                if (std::includes(big.spanned.begin(), big.spanned.end(), f1[q].spanned.begin(),
                                  f1[q].spanned.end())) {
                    covered = true;
                    break;
                }
            if (!covered) e.uncovered.push_back(static_cast<int>(q));
        }
        e.outside = fn.empty() && !f1.empty();
        e.flagged = !fn.empty() && !e.uncovered.empty();
        if (e.flagged) rep.all_pass = false;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

inline LocalLiftReport local_lift_report(const BlowupComplex& bn, unsigned threads = 1) {
    std::optional<BlowupComplex> sibling;
    if (bn.n != 1) sibling = build_blowup(bn.base, 1, threads);
    return local_lift_report(bn, sibling ? *sibling : bn);
}

}  // namespace cubeblow
