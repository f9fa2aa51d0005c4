#pragma once

// Symmetric isomorphisms of precubical sets: dimension-preserving cube
// bijections together with one axis permutation per cube, such that
// face(phi(c), sigma_c(i), eps) = phi(face(c, i, eps)). Signs are never
// flipped, so directions of time are preserved.
//
// The search runs a joint Weisfeiler-Leman style colour refinement over
// both complexes, then backtracks dimension by dimension; the axis
// permutation for each cube pair is found by bipartite matching on faces.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"

namespace cubeblow {

struct SymmetricIso {
    // cube key in the source -> cube key in the target
    std::map<std::string, std::string> cube_map;
    // per source cube of dimension k, sigma as a vector of length k
    std::map<std::string, std::vector<int>> axis_perm;
};

inline bool check_symmetric_iso(const PrecubicalSet& p, const PrecubicalSet& q,
                                const SymmetricIso& iso, bool respect_labels = true) {
    if (iso.cube_map.size() != p.cube_count() || p.cube_count() != q.cube_count())
        return false;
    std::map<std::string, std::string> inverse;
    for (const auto& [a, b] : iso.cube_map) {
        if (!p.has(a) || !q.has(b)) return false;
        if (p.dim_of(a) != q.dim_of(b)) return false;
        if (respect_labels && p.label(a) != q.label(b)) return false;
        if (!inverse.emplace(b, a).second) return false;
    }
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const auto& [a, bkey] : iso.cube_map) {
        CubeId c = p.cube(a);
        if (c.dim == 0) continue;
        auto it = iso.axis_perm.find(a);
        if (it == iso.axis_perm.end()) return false;
        const std::vector<int>& sigma = it->second;
        if (static_cast<int>(sigma.size()) != c.dim) return false;
        std::vector<bool> seen(static_cast<std::size_t>(c.dim), false);
        for (int v : sigma) {
            if (v < 0 || v >= c.dim || seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = true;
        }
        CubeId d = q.cube(bkey);
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                auto fit = iso.cube_map.find(p.face(c, i, s).key);
                if (fit == iso.cube_map.end()) return false;
                if (q.face(d, sigma[static_cast<std::size_t>(i)], s).key != fit->second)
                    return false;
            }
    }
    return true;
}

namespace detail {

struct IsoSearch {
    const PrecubicalSet& p;
    const PrecubicalSet& q;
    bool respect_labels;
    std::size_t limit;
    std::optional<std::pair<std::string, std::string>> pin;

    std::vector<CubeId> pc, qc;                 // all cubes of each side
    std::map<std::string, int> pidx, qidx;      // key -> index in pc / qc
    std::vector<int> pcol, qcol;                // final colours
    std::vector<SymmetricIso> found;

    IsoSearch(const PrecubicalSet& p_, const PrecubicalSet& q_, bool rl, std::size_t lim,
              std::optional<std::pair<std::string, std::string>> pin_ = std::nullopt)
        : p(p_), q(q_), respect_labels(rl), limit(lim), pin(std::move(pin_)) {}

    void refine() {
        pc = p.all_cubes();
        qc = q.all_cubes();
        for (std::size_t i = 0; i < pc.size(); ++i) pidx[pc[i].key] = static_cast<int>(i);
        for (std::size_t i = 0; i < qc.size(); ++i) qidx[qc[i].key] = static_cast<int>(i);

        // initial colour: dimension (and label if respected)
        std::map<std::pair<int, std::string>, int> init;
        auto initial = [&](const PrecubicalSet& s, const CubeId& c) {
            std::pair<int, std::string> sig{c.dim, respect_labels ? s.label(c.key) : ""};
            auto [it, fresh] = init.emplace(sig, static_cast<int>(init.size()));
            (void)fresh;
            return it->second;
        };
        pcol.resize(pc.size());
        qcol.resize(qc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) pcol[i] = initial(p, pc[i]);
        for (std::size_t i = 0; i < qc.size(); ++i) qcol[i] = initial(q, qc[i]);

        CofaceIndex pcof(p), qcof(q);
        const std::array<Sign, 2> sgns{Sign::minus, Sign::plus};
        using Key = std::tuple<int, std::vector<std::pair<int, int>>, std::vector<std::pair<int, int>>>;
        std::size_t classes = init.size();
        while (true) {
            std::map<Key, int> next;
            auto signature = [&](const PrecubicalSet& s, const CofaceIndex& cof,
                                 const std::vector<CubeId>& cubes,
                                 const std::map<std::string, int>& idx,
                                 const std::vector<int>& col, std::size_t i) {
                const CubeId& c = cubes[i];
                std::vector<std::pair<int, int>> down, up;
                for (int a = 0; a < c.dim; ++a)
                    for (Sign sg : sgns)
                        down.push_back({static_cast<int>(sg), col[static_cast<std::size_t>(
                                                                  idx.at(s.face(c, a, sg).key))]});
                for (const auto& e : cof.of(c.key))
                    up.push_back({static_cast<int>(e.s),
                                  col[static_cast<std::size_t>(idx.at(e.coface.key))]});
                std::sort(down.begin(), down.end());
                std::sort(up.begin(), up.end());
                return Key{col[i], std::move(down), std::move(up)};
            };
            std::vector<int> np(pc.size()), nq(qc.size());
            for (std::size_t i = 0; i < pc.size(); ++i) {
                auto [it, fresh] = next.emplace(signature(p, pcof, pc, pidx, pcol, i),
                                               static_cast<int>(next.size()));
                (void)fresh;
                np[i] = it->second;
            }
            for (std::size_t i = 0; i < qc.size(); ++i) {
                auto [it, fresh] = next.emplace(signature(q, qcof, qc, qidx, qcol, i),
                                               static_cast<int>(next.size()));
                (void)fresh;
                nq[i] = it->second;
            }
            pcol = std::move(np);
            qcol = std::move(nq);
            if (next.size() == classes) break;
            classes = next.size();
        }
    }

    // Kuhn's augmenting-path matching on the axis compatibility matrix.
    static bool perfect_matching(const std::vector<std::vector<bool>>& ok, std::vector<int>& sigma) {
        int n = static_cast<int>(ok.size());
        std::vector<int> to(static_cast<std::size_t>(n), -1);   // target axis -> source axis
        sigma.assign(static_cast<std::size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            std::vector<bool> vis(static_cast<std::size_t>(n), false);
            if (!augment(ok, i, vis, to)) return false;
        }
        for (int j = 0; j < n; ++j)
            if (to[static_cast<std::size_t>(j)] >= 0)
                sigma[static_cast<std::size_t>(to[static_cast<std::size_t>(j)])] = j;
        return true;
    }

    static bool augment(const std::vector<std::vector<bool>>& ok, int i, std::vector<bool>& vis,
                        std::vector<int>& to) {
        int n = static_cast<int>(ok.size());
        for (int j = 0; j < n; ++j) {
            if (!ok[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ||
                vis[static_cast<std::size_t>(j)])
                continue;
            vis[static_cast<std::size_t>(j)] = true;
            if (to[static_cast<std::size_t>(j)] < 0 ||
                augment(ok, to[static_cast<std::size_t>(j)], vis, to)) {
                to[static_cast<std::size_t>(j)] = i;
                return true;
            }
        }
        return false;
    }

    void run() {
        if (p.cube_count() != q.cube_count()) return;
        refine();
        // colour class sizes must agree
        std::map<int, int> pa, qa;
        for (int c : pcol) pa[c]++;
        for (int c : qcol) qa[c]++;
        if (pa != qa) return;

        // assignment order: dimension-major (faces before cofaces), rarest
        // colour class first within a dimension
        order.resize(pc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const CubeId& ca = pc[static_cast<std::size_t>(a)];
            const CubeId& cb = pc[static_cast<std::size_t>(b)];
            if (ca.dim != cb.dim) return ca.dim < cb.dim;
            int sa = pa[pcol[static_cast<std::size_t>(a)]];
            int sb = pa[pcol[static_cast<std::size_t>(b)]];
            if (sa != sb) return sa < sb;
            return ca.key < cb.key;
        });
        assign.assign(pc.size(), -1);
        used.assign(qc.size(), false);
        perms.resize(pc.size());
        extend(0);
    }

    std::vector<int> order;
    std::vector<int> assign;       // pc index -> qc index
    std::vector<bool> used;        // qc index taken
    std::vector<std::vector<int>> perms;

    void extend(std::size_t pos) {
        if (found.size() >= limit) return;
        if (pos == order.size()) {
            SymmetricIso iso;
            for (std::size_t i = 0; i < pc.size(); ++i) {
                iso.cube_map[pc[i].key] = qc[static_cast<std::size_t>(assign[i])].key;
                if (pc[i].dim > 0) iso.axis_perm[pc[i].key] = perms[i];
            }
            found.push_back(std::move(iso));
            return;
        }
        int i = order[pos];
        const CubeId& c = pc[static_cast<std::size_t>(i)];
        const std::array<Sign, 2> sgns{Sign::minus, Sign::plus};
        for (std::size_t j = 0; j < qc.size(); ++j) {
            if (used[j] || qcol[j] != pcol[static_cast<std::size_t>(i)]) continue;
            if (pin && (c.key == pin->first) != (qc[j].key == pin->second)) continue;
            const CubeId& d = qc[j];
            std::vector<int> sigma;
            if (c.dim > 0) {
                std::vector<std::vector<bool>> ok(
                    static_cast<std::size_t>(c.dim),
                    std::vector<bool>(static_cast<std::size_t>(c.dim), false));
                for (int a = 0; a < c.dim; ++a)
                    for (int bax = 0; bax < c.dim; ++bax) {
                        bool good = true;
                        for (Sign sg : sgns) {
                            int fidx = pidx.at(p.face(c, a, sg).key);
                            int target = assign[static_cast<std::size_t>(fidx)];
                            if (target < 0 ||
                                qidx.at(q.face(d, bax, sg).key) != target) {
                                good = false;
                                break;
                            }
                        }
                        ok[static_cast<std::size_t>(a)][static_cast<std::size_t>(bax)] = good;
                    }
                if (!perfect_matching(ok, sigma)) continue;
            }
            assign[static_cast<std::size_t>(i)] = static_cast<int>(j);
            used[j] = true;
            perms[static_cast<std::size_t>(i)] = std::move(sigma);
            extend(pos + 1);
            used[j] = false;
            assign[static_cast<std::size_t>(i)] = -1;
            if (found.size() >= limit) return;
        }
    }
};

}  // namespace detail

/// First symmetric isomorphism found, if any. An optional pinned pair
/// (source key, target key) constrains the bijection.
inline std::optional<SymmetricIso> symmetric_iso(
    const PrecubicalSet& p, const PrecubicalSet& q, bool respect_labels = true,
    std::optional<std::pair<std::string, std::string>> pin = std::nullopt) {
    detail::IsoSearch s(p, q, respect_labels, 1, std::move(pin));
    s.run();
    if (s.found.empty()) return std::nullopt;
    return s.found.front();
}

/// All symmetric isomorphisms, up to a cap (pass the default to count
/// automorphism groups of small complexes).
inline std::vector<SymmetricIso> enumerate_symmetric_isos(
    const PrecubicalSet& p, const PrecubicalSet& q, bool respect_labels = true,
    std::size_t limit = 1u << 20,
    std::optional<std::pair<std::string, std::string>> pin = std::nullopt) {
    detail::IsoSearch s(p, q, respect_labels, limit, std::move(pin));
    s.run();
    return s.found;
}

}  // namespace cubeblow
