#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <regge/regge.hpp>

namespace {

using namespace regge;

constexpr int kExitOk = 0;
constexpr int kExitTheorem = 1;
constexpr int kExitParse = 2;
constexpr int kExitMovePrecondition = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
    std::string catalog_name;
    std::string input_path;
    int cone_apex = -1;
    double zero_threshold = 1e-7;
    double fd_step = 1e-5;
    bool boundary_only = false;
    bool timestamps = false;
    std::string out_path;
};

void add_tolerance_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--zero-threshold", o.zero_threshold,
                    "Relative zero-eigenvalue threshold (default 1e-7)");
    cmd->add_option("--fd-step", o.fd_step,
                    "Relative finite-difference step (default 1e-5)");
}

AnalysisOptions analysis_options(const CommonOpts& o) {
    AnalysisOptions a;
    a.hessian.zero_threshold_rel = o.zero_threshold;
    a.hessian.fd_step_rel = o.fd_step;
    a.boundary_only = o.boundary_only;
    a.timestamps = o.timestamps;
    return a;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError(out_path + ": cannot open for writing");
        out << j.dump(2) << '\n';
    }
}

// Loads either a tet triangulation (JSON / catalog entry with tets) or a
// boundary surface (OFF / catalog entry without tets, or --boundary-only).
struct LoadedModel {
    std::string name;
    std::optional<Triangulation3> tri;
    std::vector<Vec3> surface_verts;
    std::vector<std::array<int, 3>> surface_tris;
};

LoadedModel load_model(const CommonOpts& o) {
    LoadedModel m;
    if (!o.catalog_name.empty()) {
        CatalogEntry e = builtin(o.catalog_name);
        m.name = e.name;
        m.surface_verts = e.vertices;
        m.surface_tris = e.boundary_tris;
        if (e.tets) m.tri = std::move(e.tets);
        if (!m.tri && o.cone_apex >= 0)
            m.tri = cone_triangulation(e.vertices, e.boundary_tris, o.cone_apex, e.faces);
        return m;
    }
    if (o.input_path.empty()) throw ParseError("no input: give a path or --catalog NAME");
    m.name = o.input_path;
    const auto dot = o.input_path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : o.input_path.substr(dot);
    if (ext == ".off" || ext == ".OFF") {
        OffModel off = read_off_file(o.input_path);
        m.surface_verts = off.vertices;
        std::vector<std::array<int, 3>> tris;
        for (const auto& f : off.faces)
            for (size_t i = 1; i + 1 < f.size(); ++i)
                tris.push_back({f[0], f[static_cast<int>(i)], f[static_cast<int>(i + 1)]});
        m.surface_tris = tris;
        if (o.cone_apex >= 0)
            m.tri = cone_triangulation(off.vertices, tris, o.cone_apex, off.faces);
        return m;
    }
    m.tri = read_triangulation_file(o.input_path);
    m.surface_verts = m.tri->vertices();
    m.surface_tris = m.tri->boundary_triangles();
    return m;
}

int run_analyze(const CommonOpts& o) {
    const LoadedModel m = load_model(o);
    AnalysisReport rep;
    if (m.tri && !o.boundary_only) {
        rep = analyze_triangulation(*m.tri, m.name, analysis_options(o));
    } else {
        rep = analyze_surface(m.surface_verts, m.surface_tris, m.name, analysis_options(o));
    }
    emit(to_json(rep), o.out_path);
    if (!rep.validation.valid) {
        std::cerr << "validation failed:";
        for (const auto& issue : rep.validation.issues) std::cerr << ' ' << issue.code;
        std::cerr << '\n';
        return kExitParse;
    }
    return rep.exit_code();
}

MoveResult apply_step(const Triangulation3& T, const MoveStep& s) {
    if (s.kind == "1->4") {
        if (s.cell.size() != 4) throw InvalidMove("1->4 cell must list 4 vertices");
        const int t = detail::find_tet(T, {s.cell[0], s.cell[1], s.cell[2], s.cell[3]});
        if (t < 0) throw InvalidMove("1->4: no such tet");
        return pachner_1_4(T, t, s.point);
    }
    if (s.kind == "4->1") {
        if (s.cell.size() != 1) throw InvalidMove("4->1 cell must list 1 vertex");
        return pachner_4_1(T, s.cell[0]);
    }
    if (s.kind == "2->3") {
        if (s.cell.size() != 3) throw InvalidMove("2->3 cell must list the shared face");
        const auto inc = T.triangle_tets({s.cell[0], s.cell[1], s.cell[2]});
        if (inc.size() != 2) throw InvalidMove("2->3: face is not shared by two tets");
        return pachner_2_3(T, inc[0], inc[1]);
    }
    if (s.kind == "3->2") {
        if (s.cell.size() != 2) throw InvalidMove("3->2 cell must list the edge");
        return pachner_3_2(T, s.cell[0], s.cell[1]);
    }
    if (s.kind == "star-boundary-triangle") {
        if (s.cell.size() != 3) throw InvalidMove("star-boundary-triangle cell must be a face");
        return boundary_star_triangle(T, {s.cell[0], s.cell[1], s.cell[2]}, s.point);
    }
    if (s.kind == "star-boundary-edge") {
        if (s.cell.size() != 2) throw InvalidMove("star-boundary-edge cell must be an edge");
        return boundary_star_edge(T, s.cell[0], s.cell[1], s.point);
    }
    if (s.kind == "displace") {
        if (s.cell.size() != 1 || !s.point)
            throw InvalidMove("displace needs one vertex and a point");
        return displace_vertex(T, s.cell[0], *s.point);
    }
    throw InvalidMove("unknown move kind '" + s.kind + "'");
}

int run_move(const CommonOpts& o, const std::string& script_path,
             const std::string& final_path) {
    const LoadedModel m = load_model(o);
    if (!m.tri) throw ParseError("move: input must be a tet triangulation");
    const std::vector<MoveStep> script =
        parse_move_script(parse_json_file(script_path), script_path);

    Triangulation3 cur = *m.tri;
    json steps = json::array();
    bool transport_ok = true;
    for (size_t i = 0; i < script.size(); ++i) {
        MoveResult res;
        try {
            res = apply_step(cur, script[i]);
        } catch (const Error& e) {
            std::cerr << "step " << i << " (" << script[i].kind << "): " << e.what() << '\n';
            return kExitMovePrecondition;
        }
        HessianOptions hopt;
        hopt.zero_threshold_rel = o.zero_threshold;
        hopt.fd_step_rel = o.fd_step;
        const MoveDelta delta = move_delta(cur, res.tri, res.record, hopt);
        const TransportCheck chk =
            signature_transport_check(cur, res.tri, res.record, hopt);
        transport_ok = transport_ok && chk.ok;
        json step;
        step["index"] = i;
        step["kind"] = move_kind_name(res.record.kind);
        step["delta"] = to_json(delta);
        step["transport"] = to_json(chk);
        steps.push_back(step);
        cur = res.tri;
    }
    json rep;
    rep["tool"] = {{"name", "regge"}, {"version", kToolVersion}};
    rep["input"] = m.name;
    rep["steps"] = steps;
    rep["final_id"] = fnv1a_hex(triangulation_to_json(cur).dump());
    if (o.timestamps) rep["generated_at"] = timestamp_now();
    emit(rep, o.out_path);
    if (!final_path.empty()) write_triangulation_file(final_path, cur);
    return transport_ok ? kExitOk : kExitTheorem;
}

int run_octsweep(double theta_min, double theta_max, int steps, const std::string& out_path) {
    if (steps < 1) throw ParseError("octsweep: steps must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i)
        grid.push_back(theta_min + (theta_max - theta_min) * i / steps);
    std::vector<SweepRow> rows;
    try {
        rows = a0_sweep(grid);
    } catch (const ThetaOutOfRange& e) {
        std::cerr << e.what() << '\n';
        return kExitParse;
    }

    std::ostringstream csv;
    csv << "# columns: theta, A(-1), A(0), A(1), 4*A(0)-A(-1)-A(1)\n";
    csv << "theta,a_bottom,a_mid,a_top,deficit\n";
    for (const auto& r : rows)
        csv << csv_row({format_double(r.theta), format_double(r.a_bottom),
                        format_double(r.a_mid), format_double(r.a_top),
                        format_double(r.deficit)})
            << '\n';
    bool decreasing_tail = true;
    for (size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i].theta) > std::abs(rows[i - 1].theta) &&
            rows[i].a_mid >= rows[i - 1].a_mid)
            decreasing_tail = false;
    csv << "# A(0) decreasing away from 0 over grid: " << (decreasing_tail ? "yes" : "no")
        << '\n';
    std::optional<double> sign_change;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i - 1].deficit > 0 && rows[i].deficit <= 0) sign_change = rows[i].theta;
    if (sign_change)
        csv << "# deficit sign change by theta = " << format_double(*sign_change) << '\n';
    else
        csv << "# deficit sign change: none in range\n";

    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError(out_path + ": cannot open for writing");
        out << csv.str();
    }
    return kExitOk;
}

int run_flex(const CommonOpts& o) {
    const LoadedModel m = load_model(o);
    const Framework f = framework_from_surface(m.surface_verts, m.surface_tris);
    const FlexSpace fs = flex_space(f);
    json j;
    j["tool"] = {{"name", "regge"}, {"version", kToolVersion}};
    j["name"] = m.name;
    j["vertices"] = static_cast<int>(m.surface_verts.size());
    j["edges"] = static_cast<int>(f.edges.size());
    j["singular_values"] = std::vector<double>(
        fs.singular_values.data(), fs.singular_values.data() + fs.singular_values.size());
    j["sv_threshold"] = fs.sv_threshold;
    j["trivial_dim"] = fs.trivial_dim;
    j["nontrivial_dim"] = fs.nontrivial_dim;
    j["rigid"] = fs.nontrivial_dim == 0;
    json basis = json::array();
    for (int c = 0; c < fs.nontrivial_basis.cols(); ++c) {
        json vecs = json::array();
        for (int v = 0; v < fs.nontrivial_basis.rows() / 3; ++v)
            vecs.push_back({fs.nontrivial_basis(3 * v, c), fs.nontrivial_basis(3 * v + 1, c),
                            fs.nontrivial_basis(3 * v + 2, c)});
        basis.push_back(vecs);
    }
    j["nontrivial_basis"] = basis;
    if (o.timestamps) j["generated_at"] = timestamp_now();
    emit(j, o.out_path);
    return kExitOk;
}

int run_catalog(const std::string& name, const std::string& off_path,
                const std::string& json_path) {
    if (name.empty()) {
        for (const auto& n : builtin_names()) std::cout << n << '\n';
        return kExitOk;
    }
    const CatalogEntry e = builtin(name);
    json j;
    j["name"] = e.name;
    j["vertices"] = static_cast<int>(e.vertices.size());
    j["faces"] = static_cast<int>(e.faces.size());
    j["has_tets"] = e.tets.has_value();
    auto put = [&j](const char* key, const auto& v) {
        if (v) j["expected"][key] = *v;
    };
    put("rigid", e.expected.rigid);
    put("weakly_convex", e.expected.weakly_convex);
    put("m", e.expected.m);
    put("k", e.expected.k);
    put("n", e.expected.n);
    put("flex_dim", e.expected.flex_dim);
    if (e.expected.signature) j["expected"]["signature"] = to_json(*e.expected.signature);
    std::cout << j.dump(2) << '\n';
    if (!off_path.empty()) {
        std::ofstream out(off_path);
        if (!out) throw ParseError(off_path + ": cannot open for writing");
        write_off(out, e.vertices, e.faces);
    }
    if (!json_path.empty()) {
        if (!e.tets) throw ParseError(name + ": no tet triangulation to export");
        write_triangulation_file(json_path, *e.tets);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Hilbert-Einstein Hessians of triangulated polyhedra"};
    app.require_subcommand(1);

    CommonOpts aopt;
    auto* analyze = app.add_subcommand(
        "analyze", "Validate, census, Hessian signature, and rigidity of a model");
    analyze->add_option("input", aopt.input_path, "OFF or triangulation JSON file");
    analyze->add_option("--catalog", aopt.catalog_name, "Built-in model name");
    analyze->add_option("--cone-apex", aopt.cone_apex,
                        "Cone a surface input to this vertex to get a tet triangulation");
    analyze->add_flag("--boundary-only", aopt.boundary_only,
                      "Rigidity of the boundary framework only");
    analyze->add_flag("--timestamps", aopt.timestamps, "Include a timestamp in the report");
    analyze->add_option("--out", aopt.out_path, "Write the JSON report here (default stdout)");
    add_tolerance_flags(analyze, aopt);

    CommonOpts mopt;
    std::string script_path, final_path;
    auto* move = app.add_subcommand("move", "Apply a move script with per-step Phi analysis");
    move->add_option("input", mopt.input_path, "Triangulation JSON file");
    move->add_option("script", script_path, "Move script JSON")->required();
    move->add_option("--catalog", mopt.catalog_name, "Built-in model name");
    move->add_flag("--timestamps", mopt.timestamps, "Include a timestamp in the report");
    move->add_option("--out", mopt.out_path, "Write the JSON report here (default stdout)");
    move->add_option("--final", final_path, "Write the final triangulation JSON here");
    add_tolerance_flags(move, mopt);

    double theta_min = 0.0, theta_max = 0.0;
    int sweep_steps = 100;
    std::string sweep_out;
    auto* octsweep = app.add_subcommand(
        "octsweep", "Cross-section areas of the twisted octahedron over a theta grid (CSV)");
    octsweep->add_option("theta_min", theta_min, "Grid start")->required();
    octsweep->add_option("theta_max", theta_max, "Grid end")->required();
    octsweep->add_option("steps", sweep_steps, "Number of grid intervals")->required();
    octsweep->add_option("--out", sweep_out, "Write CSV here (default stdout)");

    CommonOpts fopt;
    auto* flex = app.add_subcommand("flex", "Flex space of a boundary framework");
    flex->add_option("input", fopt.input_path, "OFF or triangulation JSON file");
    flex->add_option("--catalog", fopt.catalog_name, "Built-in model name");
    flex->add_flag("--timestamps", fopt.timestamps, "Include a timestamp in the report");
    flex->add_option("--out", fopt.out_path, "Write the JSON report here (default stdout)");

    std::string cat_name, cat_off, cat_json;
    auto* catalog = app.add_subcommand("catalog", "List built-in models or dump one");
    catalog->add_option("name", cat_name, "Model to describe (omit to list names)");
    catalog->add_option("--dump-off", cat_off, "Export the surface as OFF");
    catalog->add_option("--dump-json", cat_json, "Export the tet triangulation as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (*analyze) return run_analyze(aopt);
        if (*move) return run_move(mopt, script_path, final_path);
        if (*octsweep) return run_octsweep(theta_min, theta_max, sweep_steps, sweep_out);
        if (*flex) return run_flex(fopt);
        if (*catalog) return run_catalog(cat_name, cat_off, cat_json);
    } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitParse;
    } catch (const ThetaOutOfRange& e) {
        std::cerr << e.what() << '\n';
        return kExitParse;
    } catch (const UnknownName& e) {
        std::cerr << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
