#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace cubeblow {

struct ProgramError : BuildError {
    int line;
    int col;
    ProgramError(const std::string& msg, int line_, int col_)
        : BuildError(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

enum class AtomicKind { p, v, w };

struct Instruction {
    bool atomic = false;
    AtomicKind kind = AtomicKind::p;
    std::string name;
    int line = 1;
    int col = 1;
};

struct Process {
    std::vector<Instruction> instructions;
};

struct Program {
    std::vector<Process> processes;
};

inline std::string atomic_text(const Instruction& ins) {
    static const char* kinds[] = {"P", "V", "W"};
    return std::string(kinds[static_cast<int>(ins.kind)]) + "(" + ins.name + ")";
}

/// Grammar: processes separated by '|', instructions by ';'. An
/// instruction is P(id), V(id), W(id) or a bare identifier. Whitespace
/// is free. Besides syntax, each process must use its mutexes
/// conservatively: P(m) and V(m) alternate starting with P and end
/// balanced.
inline Program parse(const std::string& text) {
    Program prog;
    std::size_t pos = 0;
    int line = 1, col = 1;

    auto advance = [&]() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    };
    auto skip_ws = [&]() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    };
    auto ident = [&]() -> std::string {
        std::string out;
        if (pos < text.size()) {
            char c = text[pos];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                advance();
                while (pos < text.size()) {
                    char d = text[pos];
                    if (!std::isalnum(static_cast<unsigned char>(d)) && d != '_') break;
                    out.push_back(d);
                    advance();
                }
            }
        }
        return out;
    };

    Process cur;
    for (;;) {
        skip_ws();
        int iline = line, icol = col;
        std::string name = ident();
        if (name.empty()) throw ProgramError("expected an instruction", line, col);
        Instruction ins;
        ins.name = name;
        ins.line = iline;
        ins.col = icol;
        skip_ws();
        if ((name == "P" || name == "V" || name == "W") && pos < text.size() &&
            text[pos] == '(') {
            advance();
            skip_ws();
            std::string res = ident();
            if (res.empty()) throw ProgramError("expected a resource name", line, col);
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                throw ProgramError("expected ')'", line, col);
            advance();
            ins.atomic = true;
            ins.kind = name == "P" ? AtomicKind::p : name == "V" ? AtomicKind::v : AtomicKind::w;
            ins.name = res;
            skip_ws();
        }
        cur.instructions.push_back(std::move(ins));
        if (pos >= text.size()) {
            prog.processes.push_back(std::move(cur));
            break;
        }
        if (text[pos] == ';') {
            advance();
            continue;
        }
        if (text[pos] == '|') {
            advance();
            prog.processes.push_back(std::move(cur));
            cur = Process{};
            continue;
        }
        throw ProgramError("expected ';', '|' or end of program", line, col);
    }

    for (const Process& proc : prog.processes) {
        std::map<std::string, const Instruction*> held;
        for (const Instruction& ins : proc.instructions) {
            if (!ins.atomic || ins.kind == AtomicKind::w) continue;
            if (ins.kind == AtomicKind::p) {
                if (held.count(ins.name))
                    throw ProgramError("P(" + ins.name + ") while already holding " + ins.name,
                                       ins.line, ins.col);
                held[ins.name] = &ins;
            } else {
                if (!held.count(ins.name))
                    throw ProgramError("V(" + ins.name + ") without a matching P", ins.line,
                                       ins.col);
                held.erase(ins.name);
            }
        }
        if (!held.empty()) {
            const Instruction* first = held.begin()->second;
            throw ProgramError("P(" + held.begin()->first + ") is never released", first->line,
                               first->col);
        }
    }
    return prog;
}

/// One letter of a cube word. Pads are the unlabeled edges inserted
/// around atomic instructions; they count as edge letters for the word
/// length invariant but render as nothing.
enum class LetterKind { plain, atomic, pad };

struct Letter {
    LetterKind kind = LetterKind::plain;
    std::string text;

    bool edge_letter() const { return kind != LetterKind::atomic; }
    friend bool operator==(const Letter&, const Letter&) = default;
};

inline std::string render_word(const std::vector<Letter>& word) {
    std::string out;
    for (const Letter& l : word) {
        if (l.kind == LetterKind::pad) continue;
        if (!out.empty()) out += ";";
        out += l.text;
    }
    return out;
}

/// A single process interpreted as a labelled linear graph. Cells are
/// listed in path order: verts[i] -- edges[i] --> verts[i+1].
struct ProcessGraph {
    PrecubicalSet set;
    std::map<std::string, std::vector<Letter>> words;
    std::vector<std::string> verts;
    std::vector<std::string> edges;
    std::map<std::string, Instruction> vertex_atoms;
};

/// Labelled tensor of the process graphs. factor_cells maps each cube
/// to its per-process component cells.
struct Hda {
    PrecubicalSet set;
    std::map<std::string, std::vector<Letter>> words;
    std::vector<ProcessGraph> factors;
    std::map<std::string, std::vector<std::string>> factor_cells;
};

/// Start vertex, then per instruction: a plain instruction contributes
/// one labelled edge; an atomic contributes one unlabeled padding edge
/// into a vertex labelled by the atomic. A trailing padding edge closes
/// the process when it ends on an atomic, so P(m);V(m) spans 4 vertices
/// and W(b) spans 3, matching the grid axes they generate.
inline ProcessGraph interpret_process(const Process& proc) {
    ProcessGraph g;
    PcsBuilder b;
    auto vkey = [](std::size_t i) { return "v" + std::to_string(i); };
    auto ekey = [](std::size_t i) { return "e" + std::to_string(i); };

    b.add_cube(0, vkey(0));
    g.verts.push_back(vkey(0));
    g.words[vkey(0)] = {};
    std::size_t at = 0;

    auto add_edge = [&](const Letter& letter) {
        std::string e = ekey(at), from = vkey(at), to = vkey(at + 1);
        b.add_cube(0, to);
        b.add_cube(1, e);
        b.set_face(e, 0, Sign::minus, from);
        b.set_face(e, 0, Sign::plus, to);
        if (letter.kind == LetterKind::plain) b.set_label(e, letter.text);
        g.words[e] = {letter};
        g.words[to] = {};
        g.verts.push_back(to);
        g.edges.push_back(e);
        ++at;
    };

    for (const Instruction& ins : proc.instructions) {
        if (ins.atomic) {
            add_edge(Letter{LetterKind::pad, ""});
            Letter l{LetterKind::atomic, atomic_text(ins)};
            b.set_label(vkey(at), l.text);
            g.words[vkey(at)] = {l};
            g.vertex_atoms[vkey(at)] = ins;
        } else {
            add_edge(Letter{LetterKind::plain, ins.name});
        }
    }
    if (!proc.instructions.empty() && proc.instructions.back().atomic)
        add_edge(Letter{LetterKind::pad, ""});

    g.set = b.build();
    return g;
}

inline Hda interpret_program(const Program& prog) {
    if (prog.processes.empty()) throw BuildError("program has no processes");
    std::vector<ProcessGraph> factors;
    factors.reserve(prog.processes.size());
    for (const Process& p : prog.processes) factors.push_back(interpret_process(p));

    Hda h;
    h.set = factors[0].set;
    h.words = factors[0].words;
    for (const CubeId& c : factors[0].set.all_cubes()) h.factor_cells[c.key] = {c.key};

    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (std::size_t j = 1; j < factors.size(); ++j) {
        const ProcessGraph& g = factors[j];
        PcsBuilder b;
        std::map<std::string, std::vector<Letter>> words;
        std::map<std::string, std::vector<std::string>> cells;
        for (const CubeId& x : h.set.all_cubes())
            for (const CubeId& y : g.set.all_cubes()) {
                std::string key = tensor_key(x.key, y.key);
                b.add_cube(x.dim + y.dim, key);
                std::vector<Letter> word = h.words.at(x.key);
                const std::vector<Letter>& tail = g.words.at(y.key);
                word.insert(word.end(), tail.begin(), tail.end());
                std::string label = render_word(word);
                if (!label.empty()) b.set_label(key, label);
                words[key] = std::move(word);
                std::vector<std::string> fc = h.factor_cells.at(x.key);
                fc.push_back(y.key);
                cells[key] = std::move(fc);
            }
        for (const CubeId& x : h.set.all_cubes())
            for (const CubeId& y : g.set.all_cubes()) {
                std::string key = tensor_key(x.key, y.key);
                for (int i = 0; i < x.dim; ++i)
                    for (Sign s : signs)
                        b.set_face(key, i, s, tensor_key(h.set.face_key(x, i, s), y.key));
                for (int i = 0; i < y.dim; ++i)
                    for (Sign s : signs)
                        b.set_face(key, x.dim + i, s, tensor_key(x.key, g.set.face_key(y, i, s)));
            }
        h.set = b.build();
        h.words = std::move(words);
        h.factor_cells = std::move(cells);
    }
    h.factors = std::move(factors);
    return h;
}

/// Word invariants: an n-cube's word has exactly n edge letters, and the
/// word of face(c, i, eps) keeps all edge letters of c except the i-th.
inline std::vector<std::string> check_hda(const Hda& h) {
    std::vector<std::string> problems;
    auto edge_letters = [](const std::vector<Letter>& w) {
        std::vector<Letter> out;
        for (const Letter& l : w)
            if (l.edge_letter()) out.push_back(l);
        return out;
    };
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& c : h.set.all_cubes()) {
        auto it = h.words.find(c.key);
        if (it == h.words.end()) {
            problems.push_back("no word for " + c.key);
            continue;
        }
        std::vector<Letter> mine = edge_letters(it->second);
        if (static_cast<int>(mine.size()) != c.dim) {
            problems.push_back(c.key + ": " + std::to_string(mine.size()) +
                               " edge letters on a dimension " + std::to_string(c.dim) + " cube");
            continue;
        }
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                std::vector<Letter> expect = mine;
                expect.erase(expect.begin() + i);
                auto fit = h.words.find(h.set.face_key(c, i, s));
                if (fit == h.words.end() || edge_letters(fit->second) != expect) {
                    problems.push_back(c.key + ": face " + std::to_string(i) + sign_char(s) +
                                       " word does not drop the matching letter");
                }
            }
    }
    return problems;
}

/// Forbidden-region model: the full interpretation minus removed cubes,
/// re-spanned to a face-closed subset (a removed square may keep its
/// boundary when surviving neighbors still need it).
struct Model {
    Hda hda;
    std::vector<std::string> removed;
    PrecubicalSet complex;
};

/// Removal rules. Mutex m: a process holds m on every cell strictly
/// between a P(m) vertex and its matching V(m) vertex, edges included,
/// those vertices excluded; cubes where two or more coordinates hold m
/// are removed. Barrier b: cubes where some participating coordinate
/// sits at a W(b) vertex while another participant does not are removed,
/// leaving the synchronization diagonal itself.
inline Model geometric_model(const Hda& h) {
    std::size_t k = h.factors.size();
    std::vector<std::map<std::string, std::set<std::string>>> held(k), waits(k);
    std::set<std::string> mutexes, barriers;
    for (std::size_t j = 0; j < k; ++j) {
        const ProcessGraph& g = h.factors[j];
        std::map<std::string, std::size_t> open;
        for (std::size_t vi = 0; vi < g.verts.size(); ++vi) {
            auto it = g.vertex_atoms.find(g.verts[vi]);
            if (it == g.vertex_atoms.end()) continue;
            const Instruction& ins = it->second;
            if (ins.kind == AtomicKind::p) {
                open[ins.name] = vi;
            } else if (ins.kind == AtomicKind::v) {
                std::size_t p = open.at(ins.name);
                std::set<std::string>& cells = held[j][ins.name];
                for (std::size_t e = p; e < vi; ++e) cells.insert(g.edges[e]);
                for (std::size_t v = p + 1; v < vi; ++v) cells.insert(g.verts[v]);
                open.erase(ins.name);
                mutexes.insert(ins.name);
            } else {
                waits[j][ins.name].insert(g.verts[vi]);
                barriers.insert(ins.name);
            }
        }
    }

    Model m;
    m.hda = h;
    std::vector<CubeId> kept;
    for (const CubeId& c : h.set.all_cubes()) {
        const std::vector<std::string>& fc = h.factor_cells.at(c.key);
        bool removed = false;
        for (const std::string& res : mutexes) {
            int holding = 0;
            for (std::size_t j = 0; j < k; ++j) {
                auto it = held[j].find(res);
                if (it != held[j].end() && it->second.count(fc[j])) ++holding;
            }
            if (holding >= 2) {
                removed = true;
                break;
            }
        }
        for (const std::string& res : barriers) {
            if (removed) break;
            int participants = 0, at_wait = 0;
            for (std::size_t j = 0; j < k; ++j) {
                auto it = waits[j].find(res);
                if (it == waits[j].end()) continue;
                ++participants;
                if (it->second.count(fc[j])) ++at_wait;
            }
            if (at_wait > 0 && at_wait < participants) removed = true;
        }
        if (removed)
            m.removed.push_back(c.key);
        else
            kept.push_back(c);
    }
    m.complex = span(h.set, kept);
    return m;
}

inline Model geometric_model(const Program& prog) { return geometric_model(interpret_program(prog)); }

}  // namespace cubeblow
