// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Usage: acceptance --cli PATH --samples DIR

#include <cubeblow/blowup.hpp>
#include <cubeblow/core.hpp>
#include <cubeblow/dipath.hpp>
#include <cubeblow/frontend.hpp>
#include <cubeblow/iso.hpp>
#include <cubeblow/json_io.hpp>
#include <cubeblow/local_euclid.hpp>
#include <cubeblow/subdivision.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "oracle.hpp"

using namespace cubeblow;
namespace fs = std::filesystem;

namespace {

struct Gate {
    int failures = 0;

    void report(int number, const std::string& what, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << what;
        if (!ok && !detail.empty()) std::cout << " [" << detail << "]";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << s << " s";
    return out.str();
}

// ---------------------------------------------------------------- criteria

void crossing_fibers(Gate& gate) {
    auto start = std::chrono::steady_clock::now();
    PrecubicalSet g = corpus::crossing_graph();
    BlowupComplex b = build_blowup(g, 1);
    double elapsed = seconds_since(start);

    bool ok = b.fibers.at("c").size() == 4;
    for (const char* e : {"w>c", "s>c", "c>e", "c>n"}) ok = ok && b.fibers.at(e).size() == 1;
    for (const char* v : {"w", "s", "e", "n"}) ok = ok && b.fibers.at(v).empty();
    bool in_time = elapsed < 1.0;
    gate.report(1, "crossing-graph fibers 4/1/0 in " + fmt_seconds(elapsed), ok && in_time,
                ok ? "over the 1 s budget" : "wrong fiber sizes");
}

void planes_fibers(Gate& gate) {
    auto start = std::chrono::steady_clock::now();
    PrecubicalSet k = corpus::coordinate_planes();
    BlowupComplex b = build_blowup(k, 2);
    double elapsed = seconds_since(start);

    // classify every cube by its factor triple, recomputed from scratch
    PrecubicalSet t = triple_interval();
    bool ok = true;
    std::string detail;
    int seen = 0;
    for (const CubeId& x : t.all_cubes())
        for (const CubeId& y : t.all_cubes())
            for (const CubeId& z : t.all_cubes()) {
                bool zero = x.key == "0" || y.key == "0" || z.key == "0";
                if (!zero) continue;
                std::string key = tensor_key(tensor_key(x.key, y.key), z.key);
                bool rim = x.key == "-1" || x.key == "1" || y.key == "-1" || y.key == "1" ||
                           z.key == "-1" || z.key == "1";
                int edges = x.dim + y.dim + z.dim;
                std::size_t expect = rim ? 0 : (edges == 0 ? 9 : edges == 1 ? 4 : 1);
                ++seen;
                if (b.fibers.at(key).size() != expect) {
                    ok = false;
                    if (detail.empty())
                        detail = key + " has " + std::to_string(b.fibers.at(key).size()) +
                                 " germs, expected " + std::to_string(expect);
                }
            }
    ok = ok && seen == static_cast<int>(k.cube_count());
    bool in_time = elapsed < 60.0;
    gate.report(2, "coordinate-plane fiber census 9/4/1/0 in " + fmt_seconds(elapsed),
                ok && in_time, ok ? "over the 60 s budget" : detail);
}

void shared_edge_restriction(Gate& gate) {
    PrecubicalSet pair = corpus::square_pair();
    BlowupComplex b = build_blowup(pair, 2);
    bool ok = b.fibers.at("(0,-1)").size() == 1 && b.fibers.at("(1,-1)").size() == 1;
    if (ok) {
        const auto& table = b.table("(1,-1)", 0, Sign::minus);
        ok = table.size() == 1 && table[0].has_value() && *table[0] == 0;
    }
    gate.report(3, "shared-edge germ restricts onto the unique right-square germ", ok);
}

void bottom_example(Gate& gate) {
    PrecubicalSet g = corpus::crossing_graph();
    BlowupComplex b = build_blowup(g, 1);
    const std::vector<Lps>& centre = b.fibers.at("c");
    int horizontal = -1;
    for (std::size_t q = 0; q < centre.size(); ++q)
        if (centre[q].axes[0].first.rfind("w>c@", 0) == 0 &&
            centre[q].axes[0].second.rfind("c>e@", 0) == 0)
            horizontal = static_cast<int>(q);
    bool ok = horizontal >= 0;
    if (ok) {
        const auto& table = b.table("c>n", 0, Sign::minus);
        ok = !table[static_cast<std::size_t>(horizontal)].has_value();
    }
    gate.report(4, "horizontal crossing germ bottoms out toward the upward edge", ok);
}

void grid_windows(Gate& gate) {
    bool ok = true;
    std::string detail;
    double n3_time = 0;
    for (int n : {1, 2, 3}) {
        auto start = std::chrono::steady_clock::now();
        PrecubicalSet g = grid_window(n, 2);
        BlowupComplex b = build_blowup(g, n);
        if (n == 3) n3_time = seconds_since(start);
        for (const CubeId& c : g.all_cubes()) {
            auto coords = detail::parse_grid_key(c.key);
            bool interior = true;
            for (int v : *coords)
                if (v % 2 == 0 && std::abs(v) > 2) interior = false;
            std::size_t expect = interior ? 1 : 0;
            if (b.fibers.at(c.key).size() != expect) {
                ok = false;
                if (detail.empty()) detail = "n=" + std::to_string(n) + " cube " + c.key;
            }
        }
    }
    bool in_time = n3_time < 120.0;
    gate.report(5, "grid windows: interior point fibers, boundary empty (n=3 in " +
                       fmt_seconds(n3_time) + ")",
                ok && in_time, ok ? "over the 120 s budget" : detail);
}

bool fibers_equal_oracle(const PrecubicalSet& p, int n, std::string& detail) {
    for (const CubeId& c : p.all_cubes()) {
        if (oracle::fiber_images(fiber(p, c, n)) != oracle::oracle_fiber(p, c, n)) {
            detail = "cube " + c.key + " at n=" + std::to_string(n);
            return false;
        }
    }
    return true;
}

void oracle_equivalence(Gate& gate) {
    bool ok = true;
    std::string detail;

    ok = ok && fibers_equal_oracle(corpus::crossing_graph(), 1, detail);
    ok = ok && fibers_equal_oracle(corpus::coordinate_planes(), 2, detail);
    ok = ok && fibers_equal_oracle(geometric_model(parse("P(m);V(m)|P(m);V(m)")).complex, 2, detail);
    ok = ok && fibers_equal_oracle(geometric_model(parse("W(b)|W(b)")).complex, 2, detail);

    std::mt19937 rng(987654);
    int done = 0;
    while (done < 50 && ok) {
        PrecubicalSet p = corpus::random_complex(rng);
        if (p.cube_count() > 40) continue;
        int n = p.dimension() >= 2 ? 2 : 1;
        ok = fibers_equal_oracle(p, n, detail);
        if (!ok) detail += " (random trial " + std::to_string(done) + ")";
        ++done;
    }
    gate.report(6, "fibers equal the mono-search oracle on figures, models and 50 random complexes",
                ok, detail);
}

void subdivision_properties(Gate& gate) {
    bool ok = true;
    std::string detail;
    auto note = [&](bool cond, const std::string& name) {
        if (!cond && detail.empty()) detail = name;
        ok = ok && cond;
    };

    std::vector<PrecubicalSet> corpus_sets;
    corpus_sets.push_back(corpus::crossing_graph());
    corpus_sets.push_back(loop_graph());
    corpus_sets.push_back(corpus::loop_with_tail());
    corpus_sets.push_back(corpus::square_pair());
    corpus_sets.push_back(tensor(triple_interval(), triple_interval()));

    // cube counts
    for (const PrecubicalSet& p : corpus_sets)
        for (int s : {2, 3}) {
            PrecubicalSet sub = subdivide(p, s);
            std::map<std::string, int> tops;
            for (const CubeId& c : sub.all_cubes()) {
                CubeId base = underlying(p, c.key, s);
                if (c.dim == base.dim) ++tops[base.key];
            }
            for (const CubeId& base : p.all_cubes()) {
                int expect = 1;
                for (int i = 0; i < base.dim; ++i) expect *= s;
                note(tops[base.key] == expect, "s^n count at " + base.key);
            }
        }

    // monoidality and composition isos
    note(symmetric_iso(subdivide(tensor(interval(), triple_interval()), 2),
                       tensor(subdivide(interval(), 2), subdivide(triple_interval(), 2)), false)
             .has_value(),
         "monoidality iso");
    note(symmetric_iso(subdivide(subdivide(corpus::crossing_graph(), 2), 3),
                       subdivide(corpus::crossing_graph(), 6), false)
             .has_value(),
         "composition iso (crossing)");
    note(symmetric_iso(subdivide(subdivide(corpus::loop_with_tail(), 2), 3),
                       subdivide(corpus::loop_with_tail(), 6), false)
             .has_value(),
         "composition iso (loop)");

    // lower/upper disjointness and its corollary
    auto one_sided = [](const PrecubicalSet& p, const CubeId& c, int k, Sign sg) {
        std::set<std::string> cur{c.key};
        for (int step = 0; step < k; ++step) {
            std::set<std::string> next;
            for (const std::string& key : cur) {
                CubeId x = p.cube(key);
                for (int i = 0; i < x.dim; ++i) next.insert(p.face(x, i, sg).key);
            }
            cur = std::move(next);
        }
        return cur;
    };
    for (const PrecubicalSet& p : corpus_sets)
        for (int s : {2, 3}) {
            PrecubicalSet sub = subdivide(p, s);
            for (const CubeId& c : sub.all_cubes())
                for (int k = 1; k <= c.dim; ++k) {
                    if (k % s == 0 && s <= p.dimension()) continue;
                    std::set<std::string> lo = one_sided(sub, c, k, Sign::minus);
                    std::set<std::string> hi = one_sided(sub, c, k, Sign::plus);
                    std::vector<std::string> both;
                    std::set_intersection(lo.begin(), lo.end(), hi.begin(), hi.end(),
                                          std::back_inserter(both));
                    note(both.empty(), "face disjointness at " + c.key);
                }
        }

    // simplicity after subdivision
    for (const PrecubicalSet& p : corpus_sets)
        for (int s : {2, 3, 6}) note(all_simple(subdivide(p, s), p.dimension()), "simplicity");

    gate.report(7, "subdivision counts, monoidality, composition, disjointness, simplicity", ok,
                detail);
}

void presheaf_law(Gate& gate) {
    std::vector<std::pair<PrecubicalSet, int>> cases;
    cases.emplace_back(corpus::crossing_graph(), 1);
    cases.emplace_back(corpus::coordinate_planes(), 2);
    cases.emplace_back(grid_window(2, 1), 2);
    cases.emplace_back(grid_window(1, 2), 1);
    cases.emplace_back(geometric_model(parse("P(m);V(m)|P(m);V(m)")).complex, 2);
    cases.emplace_back(geometric_model(parse("W(b)|W(b)")).complex, 2);

    bool ok = true;
    std::string detail;
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const auto& [p, n] : cases) {
        BlowupComplex b = build_blowup(p, n);
        for (const CubeId& c : p.all_cubes()) {
            if (c.dim < 2) continue;
            for (int i = 0; i < c.dim - 1; ++i)
                for (int j = i; j < c.dim - 1; ++j)
                    for (Sign eps : signs)
                        for (Sign eta : signs) {
                            CubeId f1 = p.face(c, j + 1, eps);
                            CubeId f2 = p.face(c, i, eta);
                            CubeId w = p.face(f1, i, eta);
                            const auto& top1 = b.table(c.key, j + 1, eps);
                            const auto& low1 = b.table(f1.key, i, eta);
                            const auto& top2 = b.table(c.key, i, eta);
                            const auto& low2 = b.table(f2.key, j, eps);
                            for (std::size_t g = 0; g < b.fibers.at(w.key).size(); ++g) {
                                std::optional<int> via1 = low1[g];
                                if (via1) via1 = top1[static_cast<std::size_t>(*via1)];
                                std::optional<int> via2 = low2[g];
                                if (via2) via2 = top2[static_cast<std::size_t>(*via2)];
                                if (via1 != via2) {
                                    ok = false;
                                    if (detail.empty()) detail = "at " + c.key;
                                }
                            }
                        }
        }
    }
    gate.report(8, "restriction composites commute along all cocubical squares", ok, detail);
}

void overlap_oracle(Gate& gate) {
    std::vector<std::pair<PrecubicalSet, int>> cases;
    cases.emplace_back(corpus::crossing_graph(), 1);
    cases.emplace_back(corpus::coordinate_planes(), 2);
    cases.emplace_back(grid_window(2, 1), 2);
    cases.emplace_back(corpus::square_pair(), 2);
    cases.emplace_back(geometric_model(parse("P(m);V(m)|P(m);V(m)")).complex, 2);
    cases.emplace_back(geometric_model(parse("W(b)|W(b)")).complex, 2);

    bool ok = true;
    std::size_t total = 0;
    std::string detail;
    for (const auto& [p, n] : cases) {
        BlowupComplex b = build_blowup(p, n);
        std::vector<std::string> failures;
        total += oracle::check_all_restrictions(b, failures);
        if (!failures.empty()) {
            ok = false;
            if (detail.empty()) detail = failures.front();
        }
    }
    ok = ok && total > 0;
    gate.report(9, "all " + std::to_string(total) + " restrictions pass the rational overlap check",
                ok, detail);
}

void path_lifting(Gate& gate) {
    bool ok = true;
    std::string detail;

    // every valid walk on a graph lifts at n=1
    std::mt19937 rng(555);
    for (int trial = 0; trial < 20 && ok; ++trial) {
        PrecubicalSet g = corpus::random_graph(rng);
        BlowupComplex b = build_blowup(g, 1);
        for (int w = 0; w < 3; ++w) {
            auto path = corpus::random_edge_walk(g, rng);
            if (!path) continue;
            if (lift_path(b, *path).empty()) {
                ok = false;
                detail = "graph walk without lift (trial " + std::to_string(trial) + ")";
            }
        }
    }

    // the left-to-right crossing path lifts once
    {
        PrecubicalSet g = corpus::crossing_graph();
        BlowupComplex b = build_blowup(g, 1);
        CubePath path = make_path(g, {"w>c", "c", "c>e"});
        if (lift_path(b, path).size() != 1) {
            ok = false;
            detail = "crossing path lift count";
        }
    }

    // locally liftable sheets with a globally unliftable spine
    {
        PrecubicalSet sheets = corpus::two_sheets();
        BlowupComplex b = build_blowup(sheets, 2);
        if (!local_lift_report(b).all_pass) {
            ok = false;
            detail = "two-sheet local report";
        }
        CubePath spine = make_path(sheets, corpus::spine_steps());
        if (!lift_path(b, spine).empty()) {
            ok = false;
            detail = "two-sheet spine lifted";
        }
    }
    gate.report(10, "walks lift at n=1; crossing path once; sheet spine passes locally, fails globally",
                ok, detail);
}

void program_goldens(Gate& gate) {
    bool ok = true;
    std::string detail;

    Model mutex = geometric_model(parse("P(m);V(m)|P(m);V(m)"));
    if (mutex.hda.set.cube_count(0) != 16 || mutex.hda.set.cube_count(2) != 9) {
        ok = false;
        detail = "mutex interpretation shape";
    }
    if (mutex.removed != std::vector<std::string>{tensor_key("e1", "e1")}) {
        ok = false;
        detail = "mutex removal";
    }

    Model barrier = geometric_model(parse("W(b)|W(b)"));
    if (barrier.hda.set.cube_count(0) != 9 || barrier.hda.set.cube_count(2) != 4) {
        ok = false;
        detail = "barrier interpretation shape";
    }
    if (barrier.removed.size() != 8) {
        ok = false;
        detail = "barrier removal count " + std::to_string(barrier.removed.size());
    }
    for (const std::string& key : barrier.removed)
        if (barrier.hda.set.dim_of(key) > 1) {
            ok = false;
            detail = "barrier removed a square";
        }
    gate.report(11, "mutex removes its one square, barrier its eight mixed cells", ok, detail);
}

struct CliRunner {
    std::string cli;
    fs::path dir;
    int counter = 0;

    // returns the produced bytes: artifact file if -o was used, else stdout
    std::string run(const std::string& args, const std::string& env, bool& ok) {
        fs::path out = dir / ("stdout" + std::to_string(counter++) + ".txt");
        std::string cmd = env.empty() ? "" : env + " ";
        cmd += "'" + cli + "' " + args + " > '" + out.string() + "' 2>/dev/null";
        int rc = std::system(cmd.c_str());
        ok = rc == 0;
        return read_file(out.string());
    }
};

void determinism(Gate& gate, const std::string& cli, const fs::path& samples) {
    bool ok = true;
    std::string detail;
    fs::path dir = fs::temp_directory_path() / ("cubeblow-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    CliRunner runner{cli, dir};

    auto expect_same = [&](const std::string& what, const std::string& a, const std::string& b) {
        if (a != b || a.empty()) {
            ok = false;
            if (detail.empty()) detail = what;
        }
    };

    bool rc = true, rc2 = true;
    fs::path art1 = dir / "a1.json", art2 = dir / "a2.json";

    // same command twice
    std::string crossing = (samples / "crossing.json").string();
    std::string sum1 = runner.run("blowup -n 1 '" + crossing + "' -o '" + art1.string() + "'", "", rc);
    std::string sum2 = runner.run("blowup -n 1 '" + crossing + "' -o '" + art2.string() + "'", "", rc2);
    ok = ok && rc && rc2;
    expect_same("crossing summary rerun", sum1, sum2);
    expect_same("crossing artifact rerun", read_file(art1.string()), read_file(art2.string()));

    // one thread versus auto
    std::string planes = (samples / "planes.json").string();
    runner.run("blowup -n 2 '" + planes + "' -o '" + art1.string() + "'", "CUBE_BLOWUP_THREADS=1", rc);
    runner.run("blowup -n 2 '" + planes + "' -o '" + art2.string() + "'", "CUBE_BLOWUP_THREADS=0", rc2);
    ok = ok && rc && rc2;
    expect_same("planes artifact across thread counts", read_file(art1.string()),
                read_file(art2.string()));

    // model artifacts from a program file
    std::string mutex = (samples / "mutex.prog").string();
    runner.run("model --program '" + mutex + "' -o '" + art1.string() + "'", "", rc);
    runner.run("model --program '" + mutex + "' -o '" + art2.string() + "'", "", rc2);
    ok = ok && rc && rc2;
    expect_same("mutex model artifact rerun", read_file(art1.string()), read_file(art2.string()));

    // a round trip through validate re-emits the same bytes
    std::string emitted = runner.run("validate '" + planes + "' -o '" + art1.string() + "'", "", rc);
    runner.run("validate '" + art1.string() + "' -o '" + art2.string() + "'", "", rc2);
    ok = ok && rc && rc2;
    expect_same("validate round trip", read_file(art1.string()), read_file(art2.string()));

    std::error_code ec;
    fs::remove_all(dir, ec);
    gate.report(12, "CLI outputs are byte-identical across reruns and thread counts", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, samples;
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string flag = argv[i];
        if (flag == "--cli") cli = argv[i + 1];
        else if (flag == "--samples") samples = argv[i + 1];
    }
    if (cli.empty() || samples.empty()) {
        std::cerr << "usage: acceptance --cli PATH --samples DIR\n";
        return 2;
    }

    Gate gate;
    try {
        crossing_fibers(gate);
        planes_fibers(gate);
        shared_edge_restriction(gate);
        bottom_example(gate);
        grid_windows(gate);
        oracle_equivalence(gate);
        subdivision_properties(gate);
        presheaf_law(gate);
        overlap_oracle(gate);
        path_lifting(gate);
        program_goldens(gate);
        determinism(gate, cli, samples);
    } catch (const std::exception& e) {
        std::cout << "FAIL criterion ?: unexpected exception [" << e.what() << "]\n";
        return 1;
    }

    if (gate.failures) {
        std::cout << gate.failures << " criteria failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
