#pragma once

// Core value types for finite precubical sets: cube identifiers, the
// immutable complex itself, structural validation, tensor products, spans
// and the stock builders used throughout the library and tests.
//
// Face convention: a k-cube has directions 0..k-1 and faces face(c, i, eps)
// with eps in {-, +}. face(c, i, eps) pins axis i of c at its eps end and
// drops that axis, so the classical cocubical identity reads, in
// application order on a k-cube (k >= 2, 0 <= i <= j < k-1):
//
//     face(face(c, j+1, eps), i, eta) == face(face(c, i, eta), j, eps)

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cubeblow {

enum class Sign : int { minus = 0, plus = 1 };

inline char sign_char(Sign s) { return s == Sign::minus ? '-' : '+'; }
inline Sign sign_from_char(char c) {
    if (c == '-') return Sign::minus;
    if (c == '+') return Sign::plus;
    throw std::invalid_argument(std::string("bad sign character: ") + c);
}

/// Identifier of a cube: its dimension plus a key unique across the whole
/// complex (not just within one dimension).
struct CubeId {
    int dim = 0;
    std::string key;

    friend bool operator==(const CubeId&, const CubeId&) = default;
    friend auto operator<=>(const CubeId&, const CubeId&) = default;
};

struct UnknownCube : std::runtime_error {
    explicit UnknownCube(const std::string& key)
        : std::runtime_error("unknown cube: " + key) {}
};

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class PrecubicalSet;
class PcsBuilder;

/// Immutable finite precubical set. Cubes are addressed by string key;
/// per-dimension listings are kept sorted so every traversal order is
/// deterministic. Face targets are stored as raw keys, which lets
/// validate() report dangling or mis-dimensioned targets instead of the
/// constructor rejecting them.
class PrecubicalSet {
public:
    PrecubicalSet() = default;

    int dimension() const {
        for (int d = static_cast<int>(keys_.size()) - 1; d >= 0; --d)
            if (!keys_[d].empty()) return d;
        return -1;  // empty complex
    }

    std::size_t cube_count() const {
        std::size_t n = 0;
        for (const auto& v : keys_) n += v.size();
        return n;
    }

    std::size_t cube_count(int dim) const {
        if (dim < 0 || dim >= static_cast<int>(keys_.size())) return 0;
        return keys_[static_cast<std::size_t>(dim)].size();
    }

    /// Sorted keys of all cubes of one dimension.
    const std::vector<std::string>& cubes(int dim) const {
        static const std::vector<std::string> empty;
        if (dim < 0 || dim >= static_cast<int>(keys_.size())) return empty;
        return keys_[static_cast<std::size_t>(dim)];
    }

    /// All cubes, dimension-major, key-sorted within each dimension.
    std::vector<CubeId> all_cubes() const {
        std::vector<CubeId> out;
        out.reserve(cube_count());
        for (int d = 0; d < static_cast<int>(keys_.size()); ++d)
            for (const auto& k : keys_[static_cast<std::size_t>(d)])
                out.push_back({d, k});
        return out;
    }

    bool has(const std::string& key) const { return index_.count(key) != 0; }
    bool has(const CubeId& c) const {
        auto it = index_.find(c.key);
        return it != index_.end() && it->second == c.dim;
    }

    /// Resolve a key to a CubeId; throws UnknownCube.
    CubeId cube(const std::string& key) const {
        auto it = index_.find(key);
        if (it == index_.end()) throw UnknownCube(key);
        return {it->second, key};
    }

    int dim_of(const std::string& key) const { return cube(key).dim; }

    /// Raw face target key, without existence resolution. i in [0, dim).
    const std::string& face_key(const CubeId& c, int i, Sign s) const {
        auto it = faces_.find(c.key);
        if (it == faces_.end()) throw UnknownCube(c.key);
        return it->second.at(slot(c.dim, i, s));
    }

    /// Face as a cube of the complex; throws UnknownCube if the target key
    /// is absent (validate() reports such defects non-throwing).
    CubeId face(const CubeId& c, int i, Sign s) const {
        const std::string& k = face_key(c, i, s);
        auto it = index_.find(k);
        if (it == index_.end()) throw UnknownCube(k);
        return {it->second, k};
    }

    bool has_label(const std::string& key) const { return labels_.count(key) != 0; }
    const std::string& label(const std::string& key) const {
        static const std::string empty;
        auto it = labels_.find(key);
        return it == labels_.end() ? empty : it->second;
    }
    const std::map<std::string, std::string>& labels() const { return labels_; }

private:
    friend class PcsBuilder;

    static std::size_t slot(int dim, int i, Sign s) {
        if (i < 0 || i >= dim) throw std::out_of_range("face direction out of range");
        return static_cast<std::size_t>(2 * i + (s == Sign::plus ? 1 : 0));
    }

    std::vector<std::vector<std::string>> keys_;          // per dim, sorted
    std::unordered_map<std::string, int> index_;          // key -> dim
    std::unordered_map<std::string, std::vector<std::string>> faces_;
    std::map<std::string, std::string> labels_;
};

/// Accumulates cubes and face assignments, then freezes them into a
/// PrecubicalSet. Face targets may be assigned freely (validation is a
/// separate concern); keys must be globally unique.
class PcsBuilder {
public:
    PcsBuilder& add_cube(int dim, const std::string& key) {
        if (dim < 0) throw BuildError("negative dimension for cube " + key);
        if (dims_.count(key)) throw BuildError("duplicate cube key: " + key);
        dims_[key] = dim;
        faces_[key].assign(static_cast<std::size_t>(2 * dim), std::string());
        return *this;
    }

    bool has_cube(const std::string& key) const { return dims_.count(key) != 0; }

    PcsBuilder& set_face(const std::string& key, int i, Sign s, const std::string& target) {
        auto it = dims_.find(key);
        if (it == dims_.end()) throw BuildError("set_face on unknown cube " + key);
        if (i < 0 || i >= it->second) throw BuildError("face direction out of range for " + key);
        faces_[key][static_cast<std::size_t>(2 * i + (s == Sign::plus ? 1 : 0))] = target;
        return *this;
    }

    PcsBuilder& set_label(const std::string& key, const std::string& label) {
        labels_[key] = label;
        return *this;
    }

    PrecubicalSet build() const {
        PrecubicalSet p;
        int maxdim = -1;
        for (const auto& [k, d] : dims_) maxdim = std::max(maxdim, d);
        p.keys_.resize(static_cast<std::size_t>(maxdim + 1));
        for (const auto& [k, d] : dims_) {
            p.keys_[static_cast<std::size_t>(d)].push_back(k);
            p.index_[k] = d;
        }
        for (auto& v : p.keys_) std::sort(v.begin(), v.end());
        p.faces_ = {faces_.begin(), faces_.end()};
        for (const auto& [k, l] : labels_) {
            if (!dims_.count(k)) throw BuildError("label on unknown cube " + k);
            if (!l.empty()) p.labels_[k] = l;
        }
        return p;
    }

private:
    std::map<std::string, int> dims_;
    std::map<std::string, std::vector<std::string>> faces_;
    std::map<std::string, std::string> labels_;
};

// ---------------------------------------------------------------------------
// Structural validation

struct Violation {
    std::string kind;    // "missing-face-target" | "face-dim" | "cocubical"
    CubeId cube;         // the cube whose face structure is inconsistent
    int i = -1, j = -1;  // direction pair for cocubical violations
    Sign eps = Sign::minus, eta = Sign::minus;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }

    std::string to_string() const {
        if (ok()) return "valid\n";
        std::string out;
        for (const auto& v : violations) {
            out += v.kind + " at " + v.cube.key;
            if (v.kind == "cocubical")
                out += " (i=" + std::to_string(v.i) + ", j=" + std::to_string(v.j) +
                       ", eps=" + sign_char(v.eps) + ", eta=" + sign_char(v.eta) + ")";
            if (!v.detail.empty()) out += ": " + v.detail;
            out += "\n";
        }
        return out;
    }
};

/// Checks that every face target exists with the right dimension and that
/// all cocubical exchange identities hold. Never throws on defects; the
/// report lists each one.
inline ValidationReport validate(const PrecubicalSet& p) {
    ValidationReport rep;
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};

    for (int d = 1; d <= p.dimension(); ++d) {
        for (const auto& key : p.cubes(d)) {
            CubeId c{d, key};
            for (int i = 0; i < d; ++i) {
                for (Sign s : signs) {
                    const std::string& t = p.face_key(c, i, s);
                    if (!p.has(t)) {
                        rep.violations.push_back({"missing-face-target", c, i, -1, s,
                                                  Sign::minus, "target '" + t + "'"});
                    } else if (p.dim_of(t) != d - 1) {
                        rep.violations.push_back({"face-dim", c, i, -1, s, Sign::minus,
                                                  "target '" + t + "' has dimension " +
                                                      std::to_string(p.dim_of(t))});
                    }
                }
            }
        }
    }
    if (!rep.ok()) return rep;  // exchange checks need resolvable faces

    for (int d = 2; d <= p.dimension(); ++d) {
        for (const auto& key : p.cubes(d)) {
            CubeId c{d, key};
            for (int i = 0; i < d - 1; ++i) {
                for (int j = i; j < d - 1; ++j) {
                    for (Sign eps : signs) {
                        for (Sign eta : signs) {
                            CubeId lhs = p.face(p.face(c, j + 1, eps), i, eta);
                            CubeId rhs = p.face(p.face(c, i, eta), j, eps);
                            if (lhs != rhs)
                                rep.violations.push_back(
                                    {"cocubical", c, i, j, eps, eta,
                                     lhs.key + " != " + rhs.key});
                        }
                    }
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Tensor product

inline std::string tensor_key(const std::string& a, const std::string& b) {
    return "(" + a + ")*(" + b + ")";
}

/// Tensor product. An (a, b) pair contributes a cube of dimension
/// dim a + dim b; its direction i faces into a when i < dim a and into b
/// otherwise. Labels concatenate.
inline PrecubicalSet tensor(const PrecubicalSet& p, const PrecubicalSet& q) {
    PcsBuilder b;
    for (const CubeId& x : p.all_cubes()) {
        for (const CubeId& y : q.all_cubes()) {
            std::string key = tensor_key(x.key, y.key);
            b.add_cube(x.dim + y.dim, key);
            std::string lbl = p.label(x.key) + q.label(y.key);
            if (!lbl.empty()) b.set_label(key, lbl);
        }
    }
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& x : p.all_cubes()) {
        for (const CubeId& y : q.all_cubes()) {
            std::string key = tensor_key(x.key, y.key);
            for (int i = 0; i < x.dim; ++i)
                for (Sign s : signs)
                    b.set_face(key, i, s, tensor_key(p.face_key(x, i, s), y.key));
            for (int i = 0; i < y.dim; ++i)
                for (Sign s : signs)
                    b.set_face(key, x.dim + i, s, tensor_key(x.key, q.face_key(y, i, s)));
        }
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Spans (smallest face-closed subset containing given seeds)

inline PrecubicalSet restrict_to(const PrecubicalSet& p, const std::set<std::string>& keep) {
    PcsBuilder b;
    for (const auto& k : keep) {
        CubeId c = p.cube(k);
        b.add_cube(c.dim, k);
        if (p.has_label(k)) b.set_label(k, p.label(k));
    }
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const auto& k : keep) {
        CubeId c = p.cube(k);
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) b.set_face(k, i, s, p.face_key(c, i, s));
    }
    return b.build();
}

inline PrecubicalSet span(const PrecubicalSet& p, const std::vector<CubeId>& seeds) {
    std::set<std::string> keep;
    std::vector<CubeId> stack;
    for (const CubeId& c : seeds) {
        if (!p.has(c)) throw UnknownCube(c.key);
        if (keep.insert(c.key).second) stack.push_back(c);
    }
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    while (!stack.empty()) {
        CubeId c = stack.back();
        stack.pop_back();
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                CubeId f = p.face(c, i, s);
                if (keep.insert(f.key).second) stack.push_back(f);
            }
    }
    return restrict_to(p, keep);
}

// ---------------------------------------------------------------------------
// Face bookkeeping helpers

/// All iterated faces of c (c itself included).
inline std::set<CubeId> iterated_faces(const PrecubicalSet& p, const CubeId& c) {
    std::set<CubeId> out;
    std::vector<CubeId> stack{c};
    out.insert(c);
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    while (!stack.empty()) {
        CubeId cur = stack.back();
        stack.pop_back();
        for (int i = 0; i < cur.dim; ++i)
            for (Sign s : signs) {
                CubeId f = p.face(cur, i, s);
                if (out.insert(f).second) stack.push_back(f);
            }
    }
    return out;
}

/// Index from each cube to its codimension-1 cofaces, as (coface, i, sign)
/// with face(coface, i, sign) == cube.
class CofaceIndex {
public:
    struct Entry {
        CubeId coface;
        int i;
        Sign s;
    };

    explicit CofaceIndex(const PrecubicalSet& p) {
        const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
        for (int d = 1; d <= p.dimension(); ++d)
            for (const auto& key : p.cubes(d)) {
                CubeId c{d, key};
                for (int i = 0; i < d; ++i)
                    for (Sign s : signs)
                        map_[p.face_key(c, i, s)].push_back({c, i, s});
            }
    }

    const std::vector<Entry>& of(const std::string& key) const {
        static const std::vector<Entry> empty;
        auto it = map_.find(key);
        return it == map_.end() ? empty : it->second;
    }

private:
    std::unordered_map<std::string, std::vector<Entry>> map_;
};

/// One way a cube sits inside a coface: per slot of the coface either the
/// slot survives (nullopt) or is pinned at a sign. Applying the pins in
/// descending slot order yields the face.
using FaceEmbedding = std::vector<std::optional<Sign>>;

inline CubeId apply_embedding(const PrecubicalSet& p, const CubeId& c, const FaceEmbedding& emb) {
    if (static_cast<int>(emb.size()) != c.dim)
        throw std::invalid_argument("embedding arity mismatch");
    CubeId cur = c;
    for (int s = c.dim - 1; s >= 0; --s)
        if (emb[static_cast<std::size_t>(s)])
            cur = p.face(cur, s, *emb[static_cast<std::size_t>(s)]);
    return cur;
}

/// All embeddings of iterated faces into c: face cube -> list of
/// embeddings realizing it (several in self-glued complexes).
inline std::map<CubeId, std::vector<FaceEmbedding>> face_embeddings(const PrecubicalSet& p,
                                                                    const CubeId& c) {
    std::map<CubeId, std::vector<FaceEmbedding>> out;
    int n = c.dim;
    // iterate over {keep, -, +}^n
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    while (true) {
        FaceEmbedding emb(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            if (state[static_cast<std::size_t>(s)] == 1) emb[static_cast<std::size_t>(s)] = Sign::minus;
            if (state[static_cast<std::size_t>(s)] == 2) emb[static_cast<std::size_t>(s)] = Sign::plus;
        }
        out[apply_embedding(p, c, emb)].push_back(std::move(emb));
        int s = 0;
        for (; s < n; ++s) {
            if (++state[static_cast<std::size_t>(s)] < 3) break;
            state[static_cast<std::size_t>(s)] = 0;
        }
        if (s == n) break;
    }
    return out;
}

/// Corner vertex of c selected by one sign per axis.
inline CubeId corner(const PrecubicalSet& p, const CubeId& c, const std::vector<Sign>& bits) {
    if (static_cast<int>(bits.size()) != c.dim)
        throw std::invalid_argument("corner arity mismatch");
    CubeId cur = c;
    for (int s = c.dim - 1; s >= 0; --s) cur = p.face(cur, s, bits[static_cast<std::size_t>(s)]);
    return cur;
}

// ---------------------------------------------------------------------------
// Builders

/// Directed interval: vertices "0", "1", edge "0>1".
inline PrecubicalSet interval() {
    PcsBuilder b;
    b.add_cube(0, "0").add_cube(0, "1").add_cube(1, "0>1");
    b.set_face("0>1", 0, Sign::minus, "0").set_face("0>1", 0, Sign::plus, "1");
    return b.build();
}

/// Chain of k edges on vertices "0".."k" (edge "i>i+1").
inline PrecubicalSet linear_graph(int k) {
    if (k < 0) throw BuildError("linear_graph: negative length");
    PcsBuilder b;
    for (int i = 0; i <= k; ++i) b.add_cube(0, std::to_string(i));
    for (int i = 0; i < k; ++i) {
        std::string e = std::to_string(i) + ">" + std::to_string(i + 1);
        b.add_cube(1, e);
        b.set_face(e, 0, Sign::minus, std::to_string(i));
        b.set_face(e, 0, Sign::plus, std::to_string(i + 1));
    }
    return b.build();
}

/// Two-edge chain on vertices "-1", "0", "1".
inline PrecubicalSet triple_interval() {
    PcsBuilder b;
    for (const char* v : {"-1", "0", "1"}) b.add_cube(0, v);
    b.add_cube(1, "-1>0").add_cube(1, "0>1");
    b.set_face("-1>0", 0, Sign::minus, "-1").set_face("-1>0", 0, Sign::plus, "0");
    b.set_face("0>1", 0, Sign::minus, "0").set_face("0>1", 0, Sign::plus, "1");
    return b.build();
}

/// Single vertex "v" with a loop edge "v>v".
inline PrecubicalSet loop_graph() {
    PcsBuilder b;
    b.add_cube(0, "v").add_cube(1, "v>v");
    b.set_face("v>v", 0, Sign::minus, "v").set_face("v>v", 0, Sign::plus, "v");
    return b.build();
}

namespace detail {

// grid_window cells are tuples of doubled coordinates: even entry 2x is the
// vertex at x, odd entry 2x+1 the edge from x to x+1.
inline std::string grid_key(const std::vector<int>& c) {
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(c[i]);
    }
    return out + ")";
}

inline std::optional<std::vector<int>> parse_grid_key(const std::string& key) {
    if (key.size() < 2 || key.front() != '(' || key.back() != ')') return std::nullopt;
    std::vector<int> out;
    std::string body = key.substr(1, key.size() - 2);
    if (body.empty()) return out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) return std::nullopt;
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) return std::nullopt;
            out.push_back(v);
        } catch (...) {
            return std::nullopt;
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace detail

/// n-fold grid over doubled coordinates [-2r, 2r] per axis, centred at the
/// all-zero vertex "(0,...,0)". Isomorphic to linear_graph(2r)^{tensor n}.
inline PrecubicalSet grid_window(int n, int radius) {
    if (n < 0 || radius < 0) throw BuildError("grid_window: bad parameters");
    PcsBuilder b;
    std::vector<int> c(static_cast<std::size_t>(n), -2 * radius);
    auto add = [&](const std::vector<int>& cc) {
        int dim = 0;
        for (int v : cc) dim += (v % 2 != 0);
        b.add_cube(dim, detail::grid_key(cc));
    };
    // enumerate all tuples
    while (true) {
        add(c);
        int i = 0;
        for (; i < n; ++i) {
            if (++c[static_cast<std::size_t>(i)] <= 2 * radius) break;
            c[static_cast<std::size_t>(i)] = -2 * radius;
        }
        if (i == n) break;
        if (n == 0) break;
    }
    if (n == 0) return b.build();
    // faces: direction j acts on the j-th odd slot
    std::fill(c.begin(), c.end(), -2 * radius);
    while (true) {
        int dim = 0;
        for (int v : c) dim += (v % 2 != 0);
        if (dim > 0) {
            std::string key = detail::grid_key(c);
            int dir = 0;
            for (int s = 0; s < n; ++s) {
                if (c[static_cast<std::size_t>(s)] % 2 == 0) continue;
                std::vector<int> f = c;
                f[static_cast<std::size_t>(s)] -= 1;
                b.set_face(key, dir, Sign::minus, detail::grid_key(f));
                f[static_cast<std::size_t>(s)] += 2;
                b.set_face(key, dir, Sign::plus, detail::grid_key(f));
                ++dir;
            }
        }
        int i = 0;
        for (; i < n; ++i) {
            if (++c[static_cast<std::size_t>(i)] <= 2 * radius) break;
            c[static_cast<std::size_t>(i)] = -2 * radius;
        }
        if (i == n) break;
    }
    return b.build();
}

}  // namespace cubeblow
