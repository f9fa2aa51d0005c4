#include <iostream>
#include <map>
#include <string>
#include <sys/stat.h>

#include <CLI11.hpp>

#include "cubeblow/blowup.hpp"
#include "cubeblow/core.hpp"
#include "cubeblow/dipath.hpp"
#include "cubeblow/exporters.hpp"
#include "cubeblow/frontend.hpp"
#include "cubeblow/json_io.hpp"
#include "cubeblow/parallel.hpp"
#include "cubeblow/subdivision.hpp"

namespace {

using namespace cubeblow;

// Primary artifact goes to the -o file when given, else to stdout; the
// human-readable summary then goes to stdout or stderr respectively, so
// an artifact on stdout is never interleaved with prose.
struct Out {
    std::string path;

    void artifact(const std::string& text) const {
        if (path.empty())
            std::cout << text;
        else
            write_file(path, text);
    }
    std::ostream& summary() const { return path.empty() ? std::cerr : std::cout; }
};

std::string count_lines(const PrecubicalSet& p) {
    std::string out = "cells: " + std::to_string(p.cube_count()) + "\n";
    for (int d = 0; d <= p.dimension(); ++d)
        if (!p.cubes(d).empty())
            out += "dim " + std::to_string(d) + ": " + std::to_string(p.cubes(d).size()) + "\n";
    return out;
}

void fiber_summary(const BlowupComplex& b, std::ostream& os) {
    std::map<std::size_t, std::pair<std::size_t, std::string>> classes;  // size -> (count, exemplar)
    for (const CubeId& c : b.base.all_cubes()) {
        std::size_t size = b.fibers.at(c.key).size();
        auto [it, fresh] = classes.try_emplace(size, 0, c.key);
        ++it->second.first;
        if (c.key < it->second.second) it->second.second = c.key;
    }
    os << "fiber sizes:\n";
    for (const auto& [size, info] : classes)
        os << "  size " << size << ": " << info.first << " cube" << (info.first == 1 ? "" : "s")
           << ", e.g. " << info.second << "\n";
    os << "germs total: " << b.germ_count() << "\n";
}

std::string read_program_arg(const std::string& arg) {
    struct stat st{};
    if (stat(arg.c_str(), &st) == 0 && S_ISREG(st.st_mode)) return read_file(arg);
    return arg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"precubical sets: subdivision, local structures, blowup, lifting"};
    app.require_subcommand(1);

    std::string input, second, output, cube_key, path_file, program_arg, format = "dot";
    int n = 1, s = 2;

    CLI::App* c_validate = app.add_subcommand("validate", "check the face relations of a complex");
    c_validate->add_option("input", input, "complex JSON file")->required();
    c_validate->add_option("-o,--output", output, "re-emit the complex here");

    CLI::App* c_tensor = app.add_subcommand("tensor", "tensor product of two complexes");
    c_tensor->add_option("a", input, "left factor JSON")->required();
    c_tensor->add_option("b", second, "right factor JSON")->required();
    c_tensor->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_subdivide = app.add_subcommand("subdivide", "s-fold subdivision");
    c_subdivide->add_option("-s,--arity", s, "subdivision arity")->check(CLI::PositiveNumber);
    c_subdivide->add_option("input", input, "complex JSON file")->required();
    c_subdivide->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_blowup = app.add_subcommand("blowup", "blowup complex with fiber summary");
    c_blowup->add_option("-n,--dimension", n, "traversal dimension")->check(CLI::NonNegativeNumber);
    c_blowup->add_option("input", input, "complex JSON file")->required();
    c_blowup->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_fibers = app.add_subcommand("fibers", "fiber over a single cube");
    c_fibers->add_option("-n,--dimension", n, "traversal dimension")->check(CLI::NonNegativeNumber);
    c_fibers->add_option("--cube", cube_key, "cube key")->required();
    c_fibers->add_option("input", input, "complex JSON file")->required();
    c_fibers->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_lift = app.add_subcommand("lift", "lift a cube path through the blowup");
    c_lift->add_option("-n,--dimension", n, "traversal dimension")->check(CLI::NonNegativeNumber);
    c_lift->add_option("--path", path_file, "path JSON file")->required();
    c_lift->add_option("input", input, "complex JSON file")->required();
    c_lift->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_model = app.add_subcommand("model", "geometric model of a P/V/W program");
    c_model->add_option("--program", program_arg, "program file or inline text")->required();
    c_model->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* c_export = app.add_subcommand("export", "figure export of a blowup");
    c_export->add_option("-n,--dimension", n, "traversal dimension")->check(CLI::NonNegativeNumber);
    c_export->add_option("--format", format, "dot or off")
        ->check(CLI::IsMember({"dot", "off"}));
    c_export->add_option("input", input, "complex JSON file")->required();
    c_export->add_option("-o,--output", output, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);
    Out out{output};

    try {
        if (app.got_subcommand(c_validate)) {
            PrecubicalSet p = load_complex(input);  // loader already validates
            if (!output.empty()) out.artifact(to_json_text(p));
            out.summary() << "ok\n" << count_lines(p);
            return 0;
        }
        if (app.got_subcommand(c_tensor)) {
            PrecubicalSet p = tensor(load_complex(input), load_complex(second));
            out.artifact(to_json_text(p));
            out.summary() << count_lines(p);
            return 0;
        }
        if (app.got_subcommand(c_subdivide)) {
            PrecubicalSet p = subdivide(load_complex(input), s);
            out.artifact(to_json_text(p));
            out.summary() << count_lines(p);
            return 0;
        }
        if (app.got_subcommand(c_blowup)) {
            BlowupComplex b = build_blowup(load_complex(input), n, threads_from_env());
            out.artifact(to_json_text(b));
            fiber_summary(b, out.summary());
            return 0;
        }
        if (app.got_subcommand(c_fibers)) {
            PrecubicalSet p = load_complex(input);
            if (!p.has(cube_key)) throw BuildError("no cube " + cube_key + " in " + input);
            std::vector<Lps> f = fiber(p, p.cube(cube_key), n);
            nlohmann::json list = nlohmann::json::array();
            for (const Lps& l : f) list.push_back(lps_to_json(l));
            out.artifact(dump_json(
                nlohmann::json{{"cube", cube_key}, {"n", n}, {"fiber", std::move(list)}}));
            out.summary() << "fiber size: " << f.size() << "\n";
            return 0;
        }
        if (app.got_subcommand(c_lift)) {
            PrecubicalSet p = load_complex(input);
            CubePath path = load_path(path_file);
            PathReport report = validate_path(p, path);
            if (!report.ok()) throw BuildError("invalid path:\n" + report.to_string());
            BlowupComplex b = build_blowup(p, n, threads_from_env());
            std::vector<GermPath> lifts = lift_path(b, path);
            nlohmann::json jl = nlohmann::json::array();
            for (const GermPath& gp : lifts) jl.push_back(gp.germs);
            nlohmann::json steps = nlohmann::json::array();
            for (const std::string& st : path.steps) steps.push_back(st);
            out.artifact(dump_json(
                nlohmann::json{{"steps", std::move(steps)}, {"lifts", std::move(jl)}}));
            out.summary() << "lifts: " << lifts.size() << "\n";
            return 0;
        }
        if (app.got_subcommand(c_model)) {
            Model m = geometric_model(parse(read_program_arg(program_arg)));
            out.artifact(to_json_text(m.complex));
            out.summary() << "removed " << m.removed.size() << " cells\n"
                          << count_lines(m.complex);
            return 0;
        }
        if (app.got_subcommand(c_export)) {
            BlowupComplex b = build_blowup(load_complex(input), n, threads_from_env());
            out.artifact(format == "dot" ? export_dot(b) : export_off(b));
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalInconsistency& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownCube& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SimplicityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
