#pragma once
#include <array>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "triangulation.hpp"

namespace regge {

using nlohmann::json;

// ---- OFF (counts line, vertex lines, face lines) ----

struct OffModel {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
};

inline OffModel read_off(std::istream& in, const std::string& origin = "<stream>") {
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    std::vector<std::pair<std::string, int>> tok_lines;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) tok_lines.push_back({t, lineno});
    }
    size_t pos = 0;
    auto next = [&](const char* what) -> std::pair<std::string, int> {
        if (pos >= tok_lines.size())
            throw ParseError(origin + ": unexpected end of OFF data, expected " +
                             std::string(what));
        return tok_lines[pos++];
    };
    auto next_int = [&](const char* what) {
        auto [t, ln] = next(what);
        try {
            size_t used = 0;
            const int v = std::stoi(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError(origin + ":" + std::to_string(ln) + ": expected integer " +
                             what + ", got '" + t + "'");
        }
    };
    auto next_double = [&](const char* what) {
        auto [t, ln] = next(what);
        try {
            size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError(origin + ":" + std::to_string(ln) + ": expected number " +
                             what + ", got '" + t + "'");
        }
    };

    if (!tok_lines.empty() && tok_lines[0].first == "OFF") ++pos;
    const int nv = next_int("vertex count");
    const int nf = next_int("face count");
    next_int("edge count");
    if (nv < 0 || nf < 0) throw ParseError(origin + ": negative counts in OFF header");

    OffModel m;
    for (int i = 0; i < nv; ++i) {
        const double x = next_double("x"), y = next_double("y"), z = next_double("z");
        m.vertices.push_back(Vec3(x, y, z));
    }
    for (int i = 0; i < nf; ++i) {
        const int c = next_int("face size");
        if (c < 3) throw ParseError(origin + ": face with fewer than 3 vertices");
        std::vector<int> f(c);
        for (int j = 0; j < c; ++j) {
            f[j] = next_int("face vertex");
            if (f[j] < 0 || f[j] >= nv)
                throw ParseError(origin + ": face vertex index " + std::to_string(f[j]) +
                                 " out of range");
        }
        m.faces.push_back(std::move(f));
    }
    return m;
}

inline OffModel read_off_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return read_off(in, path);
}

inline void write_off(std::ostream& out, const std::vector<Vec3>& vertices,
                      const std::vector<std::vector<int>>& faces) {
    out << "OFF\n" << vertices.size() << ' ' << faces.size() << " 0\n";
    out << std::setprecision(17);
    for (const auto& v : vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : faces) {
        out << f.size();
        for (int v : f) out << ' ' << v;
        out << '\n';
    }
}

// ---- JSON tet-triangulation schema ----
// {"vertices": [[x,y,z], ...], "tets": [[a,b,c,d], ...], "faces": [[...], ...]?}

inline Triangulation3 triangulation_from_json(const json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("tets"))
        throw ParseError(origin + ": expected an object with 'vertices' and 'tets'");
    std::vector<Vec3> verts;
    for (const auto& row : j.at("vertices")) {
        if (!row.is_array() || row.size() != 3)
            throw ParseError(origin + ": vertex " + std::to_string(verts.size()) +
                             " is not [x,y,z]");
        verts.push_back(Vec3(row[0].get<double>(), row[1].get<double>(), row[2].get<double>()));
    }
    std::vector<std::array<int, 4>> tets;
    for (const auto& row : j.at("tets")) {
        if (!row.is_array() || row.size() != 4)
            throw ParseError(origin + ": tet " + std::to_string(tets.size()) +
                             " is not [a,b,c,d]");
        tets.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(),
                        row[3].get<int>()});
    }
    std::vector<std::vector<int>> faces;
    if (j.contains("faces"))
        for (const auto& row : j.at("faces")) faces.push_back(row.get<std::vector<int>>());
    try {
        return Triangulation3(std::move(verts), std::move(tets), std::move(faces));
    } catch (const IndexMismatch& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline json triangulation_to_json(const Triangulation3& T) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : T.vertices()) j["vertices"].push_back({v.x(), v.y(), v.z()});
    j["tets"] = json::array();
    for (const auto& q : T.tets()) j["tets"].push_back({q[0], q[1], q[2], q[3]});
    if (!T.reference_faces().empty()) j["faces"] = T.reference_faces();
    return j;
}

inline json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Triangulation3 read_triangulation_file(const std::string& path) {
    return triangulation_from_json(parse_json_file(path), path);
}

inline void write_triangulation_file(const std::string& path, const Triangulation3& T) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open file for writing");
    out << triangulation_to_json(T).dump(2) << '\n';
}

// ---- Move scripts ----
// JSON list (or {"moves": [...]}) of steps applied in order:
//   {"kind": "1->4" | "4->1" | "2->3" | "3->2" |
//            "star-boundary-triangle" | "star-boundary-edge" | "displace",
//    "cell": [vertex ids],          // the simplex or vertex acted on
//    "point": [x, y, z]}            // optional where a default exists

struct MoveStep {
    std::string kind;
    std::vector<int> cell;
    std::optional<Vec3> point;
};

inline std::vector<MoveStep> parse_move_script(const json& j, const std::string& origin) {
    const json* steps = &j;
    if (j.is_object() && j.contains("moves")) steps = &j.at("moves");
    if (!steps->is_array()) throw ParseError(origin + ": move script must be a JSON array");
    std::vector<MoveStep> out;
    for (const auto& s : *steps) {
        if (!s.is_object() || !s.contains("kind") || !s.contains("cell"))
            throw ParseError(origin + ": step " + std::to_string(out.size()) +
                             " must have 'kind' and 'cell'");
        MoveStep step;
        step.kind = s.at("kind").get<std::string>();
        step.cell = s.at("cell").get<std::vector<int>>();
        if (s.contains("point")) {
            const auto& p = s.at("point");
            if (!p.is_array() || p.size() != 3)
                throw ParseError(origin + ": step " + std::to_string(out.size()) +
                                 " point is not [x,y,z]");
            step.point = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        }
        out.push_back(std::move(step));
    }
    return out;
}

// ---- CSV (RFC-4180 fields, '#' comment lines) ----

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += f;
        }
    }
    return out;
}

inline std::string format_double(double x, int precision = 17) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << x;
    return ss.str();
}

} // namespace regge
