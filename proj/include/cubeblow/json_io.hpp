#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blowup.hpp"
#include "core.hpp"
#include "dipath.hpp"
#include "local_euclid.hpp"

namespace cubeblow {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nlohmann::json complex_to_json(const PrecubicalSet& p) {
    nlohmann::json dims = nlohmann::json::object();
    for (int d = 0; d <= p.dimension(); ++d) {
        nlohmann::json list = nlohmann::json::array();
        for (const std::string& k : p.cubes(d)) list.push_back(k);
        if (!list.empty()) dims[std::to_string(d)] = std::move(list);
    }
    nlohmann::json faces = nlohmann::json::object();
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& c : p.all_cubes()) {
        if (c.dim == 0) continue;
        nlohmann::json entry = nlohmann::json::object();
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs)
                entry[std::to_string(i) + std::string(1, sign_char(s))] = p.face_key(c, i, s);
        faces[c.key] = std::move(entry);
    }
    nlohmann::json out{{"dims", std::move(dims)}, {"faces", std::move(faces)}};
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& [key, label] : p.labels()) labels[key] = label;
    if (!labels.empty()) out["labels"] = std::move(labels);
    return out;
}

inline PrecubicalSet complex_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dims") || !j["dims"].is_object())
        throw IoError("complex JSON needs a \"dims\" object");
    PcsBuilder b;
    for (const auto& [dim_text, list] : j["dims"].items()) {
        int d = 0;
        try {
            d = std::stoi(dim_text);
        } catch (const std::exception&) {
            throw IoError("bad dimension key \"" + dim_text + "\"");
        }
        if (d < 0 || !list.is_array()) throw IoError("bad dimension entry \"" + dim_text + "\"");
        for (const auto& key : list) {
            if (!key.is_string()) throw IoError("cube keys must be strings");
            b.add_cube(d, key.get<std::string>());
        }
    }
    if (j.contains("faces")) {
        if (!j["faces"].is_object()) throw IoError("\"faces\" must be an object");
        for (const auto& [cube, entry] : j["faces"].items()) {
            if (!entry.is_object()) throw IoError("face entry for " + cube + " must be an object");
            for (const auto& [fk, target] : entry.items()) {
                if (fk.size() < 2 || !target.is_string())
                    throw IoError("bad face \"" + fk + "\" on " + cube);
                char sc = fk.back();
                int i = 0;
                try {
                    i = std::stoi(fk.substr(0, fk.size() - 1));
                } catch (const std::exception&) {
                    throw IoError("bad face \"" + fk + "\" on " + cube);
                }
                b.set_face(cube, i, sign_from_char(sc), target.get<std::string>());
            }
        }
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_object()) throw IoError("\"labels\" must be an object");
        for (const auto& [cube, label] : j["labels"].items()) {
            if (!label.is_string()) throw IoError("labels must be strings");
            b.set_label(cube, label.get<std::string>());
        }
    }
    PrecubicalSet p = b.build();
    ValidationReport report = validate(p);
    if (!report.ok()) throw BuildError("input complex is invalid:\n" + report.to_string());
    return p;
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::string to_json_text(const PrecubicalSet& p) { return dump_json(complex_to_json(p)); }

inline nlohmann::json parse_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("not valid JSON");
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

inline PrecubicalSet load_complex(const std::string& path) {
    return complex_from_json(parse_json_text(read_file(path)));
}

inline nlohmann::json lps_to_json(const Lps& l) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& [in, out] : l.axes) axes.push_back({in, out});
    nlohmann::json fillers = nlohmann::json::object();
    for (const auto& [tuple, cube] : l.fillers) fillers[sign_tuple_key(tuple)] = cube;
    return nlohmann::json{{"center", l.center}, {"axes", std::move(axes)},
                          {"fillers", std::move(fillers)}};
}

inline nlohmann::json blowup_to_json(const BlowupComplex& b) {
    nlohmann::json fibers = nlohmann::json::object();
    for (const CubeId& c : b.base.all_cubes()) {
        nlohmann::json list = nlohmann::json::array();
        for (const Lps& l : b.fibers.at(c.key)) list.push_back(lps_to_json(l));
        fibers[c.key] = std::move(list);
    }
    nlohmann::json restrictions = nlohmann::json::object();
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& c : b.base.all_cubes())
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                const std::vector<std::optional<int>>& table = b.table(c.key, i, s);
                nlohmann::json entry = nlohmann::json::object();
                for (std::size_t q = 0; q < table.size(); ++q) {
                    if (table[q])
                        entry[std::to_string(q)] = *table[q];
                    else
                        entry[std::to_string(q)] = "bot";
                }
                restrictions[b.base.face_key(c, i, s) + "->" + c.key + "@" + std::to_string(i) +
                             "," + std::string(1, sign_char(s))] = std::move(entry);
            }
    return nlohmann::json{{"n", b.n}, {"fibers", std::move(fibers)},
                          {"restrictions", std::move(restrictions)}};
}

inline std::string to_json_text(const BlowupComplex& b) { return dump_json(blowup_to_json(b)); }

inline nlohmann::json path_to_json(const CubePath& path) {
    nlohmann::json steps = nlohmann::json::array();
    for (const std::string& s : path.steps) steps.push_back(s);
    nlohmann::json moves = nlohmann::json::array();
    for (const Move& m : path.moves) {
        nlohmann::json faces = nlohmann::json::array();
        for (const auto& [i, s] : m.faces)
            faces.push_back({i, std::string(1, sign_char(s))});
        moves.push_back({{"kind", m.up ? "up" : "down"}, {"faces", std::move(faces)}});
    }
    return nlohmann::json{{"steps", std::move(steps)}, {"moves", std::move(moves)}};
}

inline CubePath path_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
        throw IoError("path JSON needs a \"steps\" array");
    CubePath path;
    for (const auto& s : j["steps"]) {
        if (!s.is_string()) throw IoError("path steps must be cube keys");
        path.steps.push_back(s.get<std::string>());
    }
    if (j.contains("moves")) {
        if (!j["moves"].is_array()) throw IoError("\"moves\" must be an array");
        for (const auto& jm : j["moves"]) {
            if (!jm.is_object() || !jm.contains("kind") || !jm.contains("faces") ||
                !jm["faces"].is_array())
                throw IoError("each move needs \"kind\" and \"faces\"");
            Move m;
            std::string kind = jm["kind"].get<std::string>();
            if (kind != "up" && kind != "down") throw IoError("move kind must be up or down");
            m.up = kind == "up";
            for (const auto& f : jm["faces"]) {
                if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() ||
                    !f[1].is_string() || f[1].get<std::string>().size() != 1)
                    throw IoError("each face must be [index, sign]");
                m.faces.emplace_back(f[0].get<int>(),
                                     sign_from_char(f[1].get<std::string>()[0]));
            }
            path.moves.push_back(std::move(m));
        }
    }
    return path;
}

inline CubePath load_path(const std::string& path) {
    return path_from_json(parse_json_text(read_file(path)));
}

}  // namespace cubeblow
