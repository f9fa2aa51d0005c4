#pragma once

// Local structure of a precubical set around a vertex: combinatorial
// neighborhoods, corner positions, simplicity, and local precubical
// structures (lps) of R^n. An lps at a centre vertex consists of n axes
// (one in-edge and one out-edge each) plus one filler cube per nonzero
// sign tuple, coherently glued; its spanned set is certified to be a copy
// of the 5^n-cell grid window by an explicit symmetric isomorphism.
//
// Two entry points share one search core: detect_lps runs on an arbitrary
// simple complex and demands that the neighborhood is exhausted with
// unique fillers; enumerate_lps runs in the 6-subdivision around a cube's
// midpoint and branches over every coherent filler choice.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "iso.hpp"
#include "subdivision.hpp"

namespace cubeblow {

struct SimplicityError : std::runtime_error {
    explicit SimplicityError(const std::string& vertex)
        : std::runtime_error("vertex is not simple enough: " + vertex), vertex(vertex) {}
    std::string vertex;
};

/// All cubes other than v itself having v among their corners.
inline std::vector<CubeId> neighborhood(const PrecubicalSet& p, const CubeId& v) {
    if (v.dim != 0) throw std::invalid_argument("neighborhood centre must be a vertex");
    std::vector<CubeId> out;
    for (int d = 1; d <= p.dimension(); ++d) {
        for (const auto& key : p.cubes(d)) {
            CubeId c{d, key};
            bool adj = false;
            for (const auto& [f, embs] : face_embeddings(p, c))
                if (f == v) {
                    adj = true;
                    break;
                }
            if (adj) out.push_back(c);
        }
    }
    return out;
}

/// Sign tuples b with corner(c, b) == v.
inline std::vector<std::vector<Sign>> positions(const PrecubicalSet& p, const CubeId& v,
                                                const CubeId& c) {
    if (v.dim != 0) throw std::invalid_argument("positions: v must be a vertex");
    std::vector<std::vector<Sign>> out;
    std::vector<int> state(static_cast<std::size_t>(c.dim), 0);
    while (true) {
        std::vector<Sign> bits(static_cast<std::size_t>(c.dim));
        for (int i = 0; i < c.dim; ++i)
            bits[static_cast<std::size_t>(i)] =
                state[static_cast<std::size_t>(i)] ? Sign::plus : Sign::minus;
        if (corner(p, c, bits) == v) out.push_back(bits);
        int i = 0;
        for (; i < c.dim; ++i) {
            if (++state[static_cast<std::size_t>(i)] < 2) break;
            state[static_cast<std::size_t>(i)] = 0;
        }
        if (i == c.dim) break;
    }
    return out;
}

/// v is k-simple when every adjacent cube of dimension <= k holds v at a
/// single corner.
inline bool is_simple(const PrecubicalSet& p, const CubeId& v, int k) {
    for (const CubeId& c : neighborhood(p, v)) {
        if (c.dim > k) continue;
        if (positions(p, v, c).size() > 1) return false;
    }
    return true;
}

inline bool all_simple(const PrecubicalSet& p, int k) {
    for (const auto& key : p.cubes(0))
        if (!is_simple(p, {0, key}, k)) return false;
    return true;
}

/// One entry per axis, -1 / 0 / +1.
using SignTuple = std::vector<int>;

inline std::string sign_tuple_key(const SignTuple& t) {
    std::string out;
    for (int v : t) out += (v < 0 ? '-' : v > 0 ? '+' : '0');
    return out;
}

struct Lps {
    int n = 0;
    std::string center;
    std::vector<std::pair<std::string, std::string>> axes;  // (in, out) per axis
    std::map<SignTuple, std::string> fillers;               // {-1,0,1}^n -> cube key
    std::vector<std::string> spanned;                       // sorted closure of the fillers
    // slot d of fillers[t] handles axis filler_slots[t][d]
    std::map<SignTuple, std::vector<int>> filler_slots;
    // certificate: grid_window(n,1) -> ambient onto spanned, centre
    // pinned. When detection succeeds on a span that folds back on
    // itself (a two-cycle vertex), the certificate instead targets the
    // canonical embedding image in the 3-subdivision of the ambient.
    SymmetricIso grid_cert;
};

namespace detail {

inline std::size_t pow_sz(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

/// The canonical embedding of an lps into the 3-subdivision of its
/// ambient complex: per axis the five grid coordinates -2..2 land at
/// numerators 4, 5, (centre), 1, 2 over 6 inside the matching filler.
/// Throws when the images collide or fail the grid mono checks.
inline SymmetricIso iota_cert(const PrecubicalSet& p, const Lps& l) {
    PrecubicalSet third = subdivide(p, 3);
    SymmetricIso iota;
    std::set<std::string> image;
    int n = l.n;
    std::vector<int> g(static_cast<std::size_t>(n), -2);
    auto axis_coord = [](int gv) {  // numerator over 6 per nonzero doubled coordinate
        switch (gv) {
            case -2: return 4;
            case -1: return 5;
            case 1: return 1;
            case 2: return 2;
        }
        return -1;
    };
    while (true) {
        SignTuple sigma(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < n; ++k)
            sigma[static_cast<std::size_t>(k)] = (g[static_cast<std::size_t>(k)] > 0)   ? 1
                                                 : (g[static_cast<std::size_t>(k)] < 0) ? -1
                                                                                        : 0;
        CubeId f = p.cube(l.fillers.at(sigma));
        const std::vector<int>& mu = l.filler_slots.at(sigma);
        std::vector<int> t(static_cast<std::size_t>(f.dim));
        for (int d = 0; d < f.dim; ++d)
            t[static_cast<std::size_t>(d)] =
                axis_coord(g[static_cast<std::size_t>(mu[static_cast<std::size_t>(d)])]);
        std::string target = sub_key(SubCube{f, t}, 3);
        std::string gk = grid_key(g);
        iota.cube_map[gk] = target;
        image.insert(target);
        std::vector<int> perm;
        for (int k = 0; k < n; ++k) {
            int gv = g[static_cast<std::size_t>(k)];
            if (gv != 1 && gv != -1) continue;
            int d = -1;
            for (int dd = 0; dd < f.dim; ++dd)
                if (mu[static_cast<std::size_t>(dd)] == k) d = dd;
            int rank = 0;
            for (int dd = 0; dd < d; ++dd)
                if (t[static_cast<std::size_t>(dd)] % 2 != 0) ++rank;
            perm.push_back(rank);
        }
        if (!perm.empty()) iota.axis_perm[gk] = perm;
        int i = 0;
        for (; i < n; ++i) {
            if (++g[static_cast<std::size_t>(i)] <= 2) break;
            g[static_cast<std::size_t>(i)] = -2;
        }
        if (i == n) break;
    }
    if (image.size() != pow_sz(5, n))
        throw std::runtime_error("lps embedding: image is not injective");
    if (!check_symmetric_iso(grid_window(n, 1), restrict_to(third, image), iota, false))
        throw std::runtime_error("lps embedding: image is not a grid monomorphism");
    std::string center_copy = sub_key(SubCube{p.cube(l.center), {}}, 3);
    if (iota.cube_map.at(grid_key(std::vector<int>(static_cast<std::size_t>(n), 0))) !=
        center_copy)
        throw std::runtime_error("lps embedding: centre is not preserved");
    return iota;
}

/// Builds the certificate map from the fillers: a grid cell keeps the
/// axes where its doubled coordinate is odd and pins outward (at the
/// non-centre end) the axes sitting at +-2. With fold_to_third, a span
/// that folds back on itself (the far ends of two axes meeting, as at a
/// two-cycle vertex) is accepted when the canonical embedding into the
/// 3-subdivision separates it; the certificate then lands there.
inline std::optional<Lps> assemble_lps(const PrecubicalSet& a, const std::string& center, int n,
                                       const std::vector<std::pair<std::string, std::string>>& axes,
                                       const std::map<SignTuple, std::string>& fillers,
                                       const std::map<SignTuple, std::vector<int>>& slots,
                                       bool fold_to_third) {
    Lps l;
    l.n = n;
    l.center = center;
    l.axes = axes;
    l.fillers = fillers;
    l.filler_slots = slots;

    std::set<std::string> sp;
    for (const auto& [t, key] : fillers)
        for (const CubeId& f : iterated_faces(a, a.cube(key))) sp.insert(f.key);
    l.spanned.assign(sp.begin(), sp.end());
    if (sp.size() != pow_sz(5, n)) {
        if (!fold_to_third) return std::nullopt;
        try {
            l.grid_cert = iota_cert(a, l);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        return l;
    }

    PrecubicalSet grid = grid_window(n, 1);
    SymmetricIso cert;
    std::vector<int> g(static_cast<std::size_t>(n), -2);
    while (true) {
        SignTuple sigma(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < n; ++k)
            sigma[static_cast<std::size_t>(k)] = (g[static_cast<std::size_t>(k)] > 0)   ? 1
                                                 : (g[static_cast<std::size_t>(k)] < 0) ? -1
                                                                                        : 0;
        CubeId f = a.cube(fillers.at(sigma));
        const std::vector<int>& mu = slots.at(sigma);
        FaceEmbedding emb(static_cast<std::size_t>(f.dim));
        for (int d = 0; d < f.dim; ++d) {
            int gv = g[static_cast<std::size_t>(mu[static_cast<std::size_t>(d)])];
            if (gv == 2) emb[static_cast<std::size_t>(d)] = Sign::plus;
            if (gv == -2) emb[static_cast<std::size_t>(d)] = Sign::minus;
        }
        CubeId target = apply_embedding(a, f, emb);
        std::string gk = grid_key(g);
        cert.cube_map[gk] = target.key;
        // direction j of the grid cell is its j-th odd axis; it maps to the
        // rank of the corresponding surviving slot of the filler
        std::vector<int> surviving;
        for (int d = 0; d < f.dim; ++d)
            if (!emb[static_cast<std::size_t>(d)]) surviving.push_back(d);
        std::vector<int> perm;
        for (int k = 0; k < n; ++k) {
            if (g[static_cast<std::size_t>(k)] != 1 && g[static_cast<std::size_t>(k)] != -1)
                continue;
            int d = -1;
            for (int dd = 0; dd < f.dim; ++dd)
                if (mu[static_cast<std::size_t>(dd)] == k) d = dd;
            int rank = 0;
            for (int sd : surviving)
                if (sd < d) ++rank;
            perm.push_back(rank);
        }
        if (!perm.empty()) cert.axis_perm[gk] = perm;
        int i = 0;
        for (; i < n; ++i) {
            if (++g[static_cast<std::size_t>(i)] <= 2) break;
            g[static_cast<std::size_t>(i)] = -2;
        }
        if (i == n) break;
    }

    bool pinned = cert.cube_map[grid_key(std::vector<int>(static_cast<std::size_t>(n), 0))] == center;
    if (pinned && check_symmetric_iso(grid, restrict_to(a, sp), cert, false)) {
        l.grid_cert = std::move(cert);
        return l;
    }
    if (!fold_to_third) return std::nullopt;
    try {
        l.grid_cert = iota_cert(a, l);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return l;
}

struct LpsSearch {
    const PrecubicalSet& a;
    std::string center;
    int n;
    bool unique_fillers;
    bool exhaust;

    std::vector<std::string> nb;  // neighborhood keys, sorted
    std::vector<SignTuple> tuples;  // support size >= 2, by (size, lex)
    std::vector<std::pair<std::string, std::string>> axes;
    std::map<SignTuple, std::string> fillers;
    std::map<SignTuple, std::vector<int>> slots;
    std::set<std::vector<std::string>> seen;
    std::vector<Lps> out;

    void run() {
        CubeId c = a.cube(center);
        if (c.dim != 0) throw std::invalid_argument("lps centre must be a vertex");
        if (!is_simple(a, c, std::max(n, 1))) throw SimplicityError(center);

        std::vector<std::string> ins, outs;
        for (const auto& ekey : a.cubes(1)) {
            CubeId e{1, ekey};
            if (a.face(e, 0, Sign::plus).key == center) ins.push_back(ekey);
            if (a.face(e, 0, Sign::minus).key == center) outs.push_back(ekey);
        }
        if (static_cast<int>(ins.size()) < n || static_cast<int>(outs.size()) < n) return;
        if (exhaust && (static_cast<int>(ins.size()) != n || static_cast<int>(outs.size()) != n))
            return;

        if (exhaust)
            for (const CubeId& x : neighborhood(a, c)) nb.push_back(x.key);
        std::sort(nb.begin(), nb.end());

        for (int m = 2; m <= n; ++m) {
            std::vector<int> t(static_cast<std::size_t>(n), 0);
            collect_tuples(t, 0, m);
        }

        std::vector<int> pick;
        choose_ins(ins, outs, pick, 0);
    }

    void collect_tuples(SignTuple& t, int k, int want) {
        int nz = 0;
        for (int v : t) nz += (v != 0);
        if (k == n) {
            if (nz == want) tuples.push_back(t);
            return;
        }
        for (int v : {-1, 0, 1}) {
            t[static_cast<std::size_t>(k)] = v;
            collect_tuples(t, k + 1, want);
        }
        t[static_cast<std::size_t>(k)] = 0;
    }

    void choose_ins(const std::vector<std::string>& ins, const std::vector<std::string>& outs,
                    std::vector<int>& pick, int from) {
        if (static_cast<int>(pick.size()) == n) {
            std::vector<int> opick;
            choose_outs(ins, outs, pick, opick, 0);
            return;
        }
        for (int i = from; i < static_cast<int>(ins.size()); ++i) {
            pick.push_back(i);
            choose_ins(ins, outs, pick, i + 1);
            pick.pop_back();
        }
    }

    void choose_outs(const std::vector<std::string>& ins, const std::vector<std::string>& outs,
                     const std::vector<int>& ipick, std::vector<int>& opick, int from) {
        if (static_cast<int>(opick.size()) == n) {
            std::vector<int> perm = opick;  // sorted; walk its permutations
            do {
                axes.clear();
                fillers.clear();
                slots.clear();
                for (int k = 0; k < n; ++k)
                    axes.push_back({ins[static_cast<std::size_t>(ipick[static_cast<std::size_t>(k)])],
                                    outs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]});
                SignTuple zero(static_cast<std::size_t>(n), 0);
                fillers[zero] = center;
                slots[zero] = {};
                bool ok = true;
                for (int k = 0; k < n && ok; ++k) {
                    SignTuple t = zero;
                    t[static_cast<std::size_t>(k)] = -1;
                    fillers[t] = axes[static_cast<std::size_t>(k)].first;
                    slots[t] = {k};
                    t[static_cast<std::size_t>(k)] = 1;
                    fillers[t] = axes[static_cast<std::size_t>(k)].second;
                    slots[t] = {k};
                }
                // distinct edge requirement
                std::set<std::string> edges;
                for (const auto& [i2, o2] : axes) {
                    edges.insert(i2);
                    edges.insert(o2);
                }
                if (edges.size() != static_cast<std::size_t>(2 * n)) ok = false;
                if (ok) assign_fillers(0);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (int i = from; i < static_cast<int>(outs.size()); ++i) {
            opick.push_back(i);
            choose_outs(ins, outs, ipick, opick, i + 1);
            opick.pop_back();
        }
    }

    // candidates for the filler at tuple t: an m-cube F and an assignment
    // mu of its slots to the support axes such that pinning slot d toward
    // the centre lands on the filler of t with axis mu[d] zeroed
    void assign_fillers(std::size_t ti) {
        if (ti == tuples.size()) {
            finish();
            return;
        }
        const SignTuple& t = tuples[ti];
        std::vector<int> supp;
        for (int k = 0; k < n; ++k)
            if (t[static_cast<std::size_t>(k)] != 0) supp.push_back(k);
        int m = static_cast<int>(supp.size());

        std::vector<std::pair<std::string, std::vector<int>>> cands;
        std::set<std::string> distinct;
        std::vector<int> mu = supp;  // sorted; permute
        for (const auto& fkey : a.cubes(m)) {
            CubeId f{m, fkey};
            std::vector<int> p2 = mu;
            do {
                bool good = true;
                for (int d = 0; d < m && good; ++d) {
                    int axis = p2[static_cast<std::size_t>(d)];
                    Sign toward = t[static_cast<std::size_t>(axis)] > 0 ? Sign::minus : Sign::plus;
                    SignTuple sub = t;
                    sub[static_cast<std::size_t>(axis)] = 0;
                    if (a.face_key(f, d, toward) != fillers.at(sub)) good = false;
                }
                if (good) {
                    cands.push_back({fkey, p2});
                    distinct.insert(fkey);
                }
            } while (std::next_permutation(p2.begin(), p2.end()));
        }
        if (cands.empty()) return;
        if (unique_fillers && distinct.size() != 1) return;
        for (const auto& [fkey, p2] : cands) {
            fillers[t] = fkey;
            slots[t] = p2;
            assign_fillers(ti + 1);
            fillers.erase(t);
            slots.erase(t);
        }
    }

    void finish() {
        if (exhaust) {
            std::set<std::string> used;
            for (const auto& [t, key] : fillers)
                if (key != center) used.insert(key);
            if (std::vector<std::string>(used.begin(), used.end()) != nb) return;
        }
        auto l = assemble_lps(a, center, n, axes, fillers, slots, exhaust && unique_fillers);
        if (!l) return;
        if (seen.insert(l->spanned).second) out.push_back(std::move(*l));
    }
};

inline std::vector<Lps> lps_search(const PrecubicalSet& a, const std::string& center, int n,
                                   bool unique_fillers, bool exhaust) {
    if (n == 0) {
        Lps l;
        l.n = 0;
        l.center = center;
        l.fillers[{}] = center;
        l.filler_slots[{}] = {};
        l.spanned = {center};
        l.grid_cert.cube_map[grid_key({})] = center;
        return {l};
    }
    LpsSearch s{a, center, n, unique_fillers, exhaust, {}, {}, {}, {}, {}, {}, {}};
    s.run();
    std::sort(s.out.begin(), s.out.end(),
              [](const Lps& x, const Lps& y) { return x.spanned < y.spanned; });
    return s.out;
}

}  // namespace detail

/// Run the full lps type checks against an ambient complex.
inline bool check_lps(const PrecubicalSet& a, const Lps& l) {
    try {
        CubeId c = a.cube(l.center);
        if (c.dim != 0) return false;
        if (static_cast<int>(l.axes.size()) != l.n) return false;
        std::set<std::string> edges;
        for (const auto& [in, outk] : l.axes) {
            if (a.face(a.cube(in), 0, Sign::plus).key != l.center) return false;
            if (a.face(a.cube(outk), 0, Sign::minus).key != l.center) return false;
            edges.insert(in);
            edges.insert(outk);
        }
        if (edges.size() != static_cast<std::size_t>(2 * l.n)) return false;
        if (l.fillers.size() != detail::pow_sz(3, l.n)) return false;
        for (const auto& [t, key] : l.fillers) {
            std::vector<int> supp;
            for (int k = 0; k < l.n; ++k)
                if (t[static_cast<std::size_t>(k)] != 0) supp.push_back(k);
            CubeId f = a.cube(key);
            if (f.dim != static_cast<int>(supp.size())) return false;
            const std::vector<int>& mu = l.filler_slots.at(t);
            for (int d = 0; d < f.dim; ++d) {
                int axis = mu[static_cast<std::size_t>(d)];
                Sign toward = t[static_cast<std::size_t>(axis)] > 0 ? Sign::minus : Sign::plus;
                SignTuple sub = t;
                sub[static_cast<std::size_t>(axis)] = 0;
                if (a.face(f, d, toward).key != l.fillers.at(sub)) return false;
            }
        }
        std::set<std::string> sp;
        for (const auto& [t, key] : l.fillers)
            for (const CubeId& f : iterated_faces(a, a.cube(key))) sp.insert(f.key);
        if (std::vector<std::string>(sp.begin(), sp.end()) != l.spanned) return false;
        if (l.n == 0) return l.spanned == std::vector<std::string>{l.center};
        if (!check_symmetric_iso(grid_window(l.n, 1), restrict_to(a, sp), l.grid_cert, false))
            return false;
        return l.grid_cert.cube_map.at(detail::grid_key(
                   std::vector<int>(static_cast<std::size_t>(l.n), 0))) == l.center;
    } catch (const std::exception&) {
        return false;
    }
}

/// Exhaustive detection at a vertex of an arbitrary complex: present iff
/// the neighborhood of v consists of exactly n in-edges, n out-edges and
/// one unique filler per sign tuple, with nothing left over. Requires
/// every vertex of P to be n-simple.
inline std::optional<Lps> detect_lps(const PrecubicalSet& p, const std::string& v, int n) {
    for (const auto& w : p.cubes(0))
        if (!is_simple(p, {0, w}, std::max(n, 1))) throw SimplicityError(w);
    auto res = detail::lps_search(p, v, n, true, true);
    if (res.empty()) return std::nullopt;
    return res.front();
}

/// All grid-shaped subobjects of the 6-subdivision pinned at the midpoint
/// of c, in canonical (spanned-set lexicographic) order. Empty above
/// dimension n; a singleton for n = 0.
inline std::vector<Lps> enumerate_lps(const PrecubicalSet& p, const CubeId& c, int n) {
    if (n == 0) {
        SubCube m = midpoint(p, c, 6);
        return detail::lps_search(PrecubicalSet(), sub_key(m, 6), 0, false, false);
    }
    if (c.dim > n) return {};
    SubCube m = midpoint(p, c, 6);
    PrecubicalSet star = local_star(p, 6, m, 1);
    return detail::lps_search(star, sub_key(m, 6), n, false, false);
}

/// The explicit embedding of a detected lps into the 3-subdivision: the
/// grid's five per-axis coordinates land at numerators 4, 5, (centre),
/// 1, 2 over 6 inside the matching filler cube. Returns the certified
/// monomorphism grid_window(n,1) -> subdivide(P,3).
inline SymmetricIso embed_lps(const PrecubicalSet& p, const Lps& l) {
    return detail::iota_cert(p, l);
}

}  // namespace cubeblow
