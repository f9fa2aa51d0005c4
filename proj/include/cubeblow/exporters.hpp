#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "blowup.hpp"

namespace cubeblow {

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

/// Germ adjacency graph: one node per germ ("cube#index"), one arrow per
/// non-bottom restriction entry, pointing from the face germ to the
/// coface germ it restricts from, labelled by the face direction.
inline std::string export_dot(const BlowupComplex& b) {
    std::string out = "digraph blowup {\n";
    for (const CubeId& c : b.base.all_cubes())
        for (std::size_t g = 0; g < b.fibers.at(c.key).size(); ++g)
            out += "  " + detail::dot_quote(c.key + "#" + std::to_string(g)) + ";\n";
    const std::array<Sign, 2> signs{Sign::minus, Sign::plus};
    for (const CubeId& c : b.base.all_cubes())
        for (int i = 0; i < c.dim; ++i)
            for (Sign s : signs) {
                std::string face = b.base.face_key(c, i, s);
                const auto& table = b.table(c.key, i, s);
                for (std::size_t q = 0; q < table.size(); ++q) {
                    if (!table[q]) continue;
                    out += "  " + detail::dot_quote(face + "#" + std::to_string(q)) + " -> " +
                           detail::dot_quote(c.key + "#" + std::to_string(*table[q])) +
                           " [label=" +
                           detail::dot_quote(std::to_string(i) + std::string(1, sign_char(s))) +
                           "];\n";
                }
            }
    return out + "}\n";
}

/// Per-germ chart boxes as an OFF mesh. Boxes sit at the base cube's
/// grid coordinates when its key parses as one (halved, since grid keys
/// use doubled coordinates); other cubes line up along x in enumeration
/// order. Stacked germs at one cube step up in z.
inline std::string export_off(const BlowupComplex& b) {
    struct Box {
        double x, y, z;
    };
    std::vector<Box> boxes;
    double fallback_x = 0.0;
    for (const CubeId& c : b.base.all_cubes()) {
        std::size_t count = b.fibers.at(c.key).size();
        if (count == 0) continue;
        double x = 0.0, y = 0.0, z = 0.0;
        if (auto t = detail::parse_grid_key(c.key)) {
            if (t->size() > 0) x = (*t)[0] / 2.0;
            if (t->size() > 1) y = (*t)[1] / 2.0;
            if (t->size() > 2) z = (*t)[2] / 2.0;
        } else {
            x = fallback_x;
            fallback_x += 2.0;
        }
        for (std::size_t g = 0; g < count; ++g)
            boxes.push_back({x, y, z + 1.2 * static_cast<double>(g)});
    }

    std::string out = "OFF\n";
    out += std::to_string(boxes.size() * 8) + " " + std::to_string(boxes.size() * 6) + " 0\n";
    char line[96];
    const double h = 0.4;
    for (const Box& box : boxes)
        for (int corner = 0; corner < 8; ++corner) {
            double dx = (corner & 1) ? h : -h;
            double dy = (corner & 2) ? h : -h;
            double dz = (corner & 4) ? h : -h;
            std::snprintf(line, sizeof line, "%.3f %.3f %.3f\n", box.x + dx, box.y + dy,
                          box.z + dz);
            out += line;
        }
    static const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                    {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (std::size_t bi = 0; bi < boxes.size(); ++bi)
        for (const auto& q : quads) {
            std::snprintf(line, sizeof line, "4 %zu %zu %zu %zu\n", bi * 8 + q[0], bi * 8 + q[1],
                          bi * 8 + q[2], bi * 8 + q[3]);
            out += line;
        }
    return out;
}

}  // namespace cubeblow
