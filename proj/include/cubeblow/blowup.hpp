#pragma once

// The blowup of a precubical set: one fiber of germs (lps of R^n at the
// cube's midpoint in the 6-subdivision) per cube, plus restriction tables
// along every codimension-1 face inclusion.
//
// Restriction of a germ Q at m(c') toward a coface c works by the
// star-shift rule. The inside edge e of c at m(c') is the subdivision
// edge with every coordinate 6 except coordinate i, which sits at 1
// (when c' is the lower face) or 11 (upper face). If Q does not contain
// e the restriction is the absorbing bottom element. Otherwise the star
// of e inside Q is translated along direction i by 4 and by 6 twelfths,
// producing a band of cells at coordinates 5 and 7 centred on m(c); its
// face closure must be the spanned set of exactly one germ in the fiber
// over c.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "local_euclid.hpp"
#include "parallel.hpp"

namespace cubeblow {

struct InternalInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonically ordered germ fiber over one cube.
inline std::vector<Lps> fiber(const PrecubicalSet& p, const CubeId& c, int n) {
    return enumerate_lps(p, c, n);
}

namespace detail {

// All ways Q's cells reach the inside edge e by iterated subdivision
// faces, with the surviving slot tracked; each hit contributes two
// translated copies of the cell.
inline std::set<SubCube> star_shift(const PrecubicalSet& p, const Lps& q, const SubCube& e,
                                    int delta_sign) {
    std::set<SubCube> shifted;
    for (const std::string& key : q.spanned) {
        SubCube sc = parse_sub_key(p, key, 6);
        int d = sc.dim();
        if (d == 0) continue;
        std::vector<int> odd_pos;
        for (std::size_t j = 0; j < sc.t.size(); ++j)
            if (sc.t[j] % 2 != 0) odd_pos.push_back(static_cast<int>(j));
        // action per direction: 0 keep, 1 pin minus, 2 pin plus
        std::vector<int> act(static_cast<std::size_t>(d), 0);
        while (true) {
            int kept = 0;
            for (int v : act) kept += (v == 0);
            if (kept == 1) {
                SubCube cur = sc;
                for (int k = d - 1; k >= 0; --k) {
                    if (act[static_cast<std::size_t>(k)] == 0) continue;
                    cur = sub_face(p, 6, cur, k,
                                   act[static_cast<std::size_t>(k)] == 1 ? Sign::minus
                                                                         : Sign::plus);
                }
                if (cur == e) {
                    int slot = -1;
                    for (int k = 0; k < d; ++k)
                        if (act[static_cast<std::size_t>(k)] == 0)
                            slot = odd_pos[static_cast<std::size_t>(k)];
                    for (int step : {4, 6}) {
                        SubCube copy = sc;
                        copy.t[static_cast<std::size_t>(slot)] += delta_sign * step;
                        shifted.insert(copy);
                    }
                }
            }
            std::size_t k = 0;
            for (; k < act.size(); ++k) {
                if (++act[k] < 3) break;
                act[k] = 0;
            }
            if (k == act.size()) break;
        }
    }
    return shifted;
}

inline std::vector<std::string> close_and_serialize(const PrecubicalSet& p,
                                                    std::set<SubCube> cells) {
    std::vector<SubCube> stack(cells.begin(), cells.end());
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    while (!stack.empty()) {
        SubCube c = stack.back();
        stack.pop_back();
        for (int i = 0; i < c.dim(); ++i)
            for (Sign sg : signs) {
                SubCube f = sub_face(p, 6, c, i, sg);
                if (cells.insert(f).second) stack.push_back(f);
            }
    }
    std::vector<std::string> keys;
    keys.reserve(cells.size());
    for (const SubCube& c : cells) keys.push_back(sub_key(c, 6));
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace detail

/// Restriction of Q in the fiber over c' = face(c, i, eps) toward c.
/// Returns the index of the matching germ in fiber_c, or nullopt for the
/// bottom element. A shifted band matching zero or several fiber
/// elements is an internal inconsistency and throws.
inline std::optional<int> restrict_germ(const PrecubicalSet& p, int n, const Lps& q,
                                        const CubeId& c, int i, Sign eps,
                                        const std::vector<Lps>& fiber_c) {
    if (n == 0) return 0;  // the 0-blowup is the base itself
    if (c.dim > n) return std::nullopt;

    SubCube e{c, std::vector<int>(static_cast<std::size_t>(c.dim), 6)};
    e.t[static_cast<std::size_t>(i)] = (eps == Sign::minus) ? 1 : 11;
    std::string ekey = sub_key(e, 6);
    if (!std::binary_search(q.spanned.begin(), q.spanned.end(), ekey)) return std::nullopt;

    std::set<SubCube> shifted = detail::star_shift(p, q, e, eps == Sign::minus ? 1 : -1);
    std::vector<std::string> target = detail::close_and_serialize(p, std::move(shifted));

    std::optional<int> hit;
    for (std::size_t j = 0; j < fiber_c.size(); ++j) {
        if (fiber_c[j].spanned != target) continue;
        if (hit)
            throw InternalInconsistency("restriction of a germ at " + q.center + " toward " +
                                        c.key + " matches several fiber elements");
        hit = static_cast<int>(j);
    }
    if (!hit)
        throw InternalInconsistency("restriction of a germ at " + q.center + " toward " + c.key +
                                    " matches no fiber element");
    return hit;
}

struct BlowupComplex {
    int n = 0;
    PrecubicalSet base;
    std::map<std::string, std::vector<Lps>> fibers;
    // key: restriction_key(c, i, eps); value indexed by fiber position at
    // face(c, i, eps), entries are indices into fibers[c] or bottom
    std::map<std::string, std::vector<std::optional<int>>> restrictions;

    static std::string restriction_key(const std::string& coface, int i, Sign s) {
        return coface + "@" + std::to_string(i) + "," + sign_char(s);
    }

    const std::vector<std::optional<int>>& table(const std::string& coface, int i, Sign s) const {
        return restrictions.at(restriction_key(coface, i, s));
    }

    std::size_t germ_count() const {
        std::size_t total = 0;
        for (const auto& [key, f] : fibers) total += f.size();
        return total;
    }
};

/// All fibers plus all codimension-1 restriction tables; the presheaf law
/// (both composites across each cocubical square agree, bottom
/// absorbing) is verified before returning.
inline BlowupComplex build_blowup(const PrecubicalSet& p, int n, unsigned threads = 1) {
    BlowupComplex b;
    b.n = n;
    b.base = p;

    std::vector<CubeId> cubes = p.all_cubes();
    std::vector<std::vector<Lps>> fib(cubes.size());
    parallel_for(cubes.size(), threads,
                 [&](std::size_t i) { fib[i] = enumerate_lps(p, cubes[i], n); });
    for (std::size_t i = 0; i < cubes.size(); ++i) b.fibers[cubes[i].key] = std::move(fib[i]);

    std::vector<std::map<std::string, std::vector<std::optional<int>>>> parts(cubes.size());
    parallel_for(cubes.size(), threads, [&](std::size_t ci) {
        const CubeId& c = cubes[ci];
        const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                const std::vector<Lps>& from = b.fibers.at(p.face(c, i, s).key);
                std::vector<std::optional<int>> table(from.size());
                for (std::size_t qi = 0; qi < from.size(); ++qi)
                    table[qi] = restrict_germ(p, n, from[qi], c, i, s, b.fibers.at(c.key));
                parts[ci][BlowupComplex::restriction_key(c.key, i, s)] = std::move(table);
            }
    });
    for (auto& part : parts)
        for (auto& [key, table] : part) b.restrictions[key] = std::move(table);

    // presheaf law across every cocubical square
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& c : cubes) {
        if (c.dim < 2) continue;
        for (int i = 0; i + 1 < c.dim; ++i)
            for (int j = i; j + 1 < c.dim; ++j)
                for (Sign eps : signs)
                    for (Sign eta : signs) {
                        CubeId c1 = p.face(c, j + 1, eps);
                        CubeId c2 = p.face(c, i, eta);
                        const auto& low1 = b.table(c1.key, i, eta);
                        const auto& up1 = b.table(c.key, j + 1, eps);
                        const auto& low2 = b.table(c2.key, j, eps);
                        const auto& up2 = b.table(c.key, i, eta);
                        for (std::size_t qi = 0; qi < low1.size(); ++qi) {
                            std::optional<int> via1 =
                                low1[qi] ? up1[static_cast<std::size_t>(*low1[qi])] : std::nullopt;
                            std::optional<int> via2 =
                                low2[qi] ? up2[static_cast<std::size_t>(*low2[qi])] : std::nullopt;
                            if (via1 != via2)
                                throw InternalInconsistency(
                                    "presheaf law violated at " + c.key + " (i=" +
                                    std::to_string(i) + ", j=" + std::to_string(j) + ")");
                        }
                    }
    }
    return b;
}

}  // namespace cubeblow
