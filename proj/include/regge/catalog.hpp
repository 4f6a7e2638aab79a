#pragma once
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hull.hpp"
#include "linalg.hpp"
#include "section.hpp"
#include "triangulation.hpp"

namespace regge {

struct ExpectedProperties {
    std::optional<bool> rigid;
    std::optional<bool> weakly_convex;
    std::optional<int> m;
    std::optional<int> k;
    std::optional<int> n;
    std::optional<Signature> signature;
    std::optional<int> flex_dim;  // full kernel of the rigidity matrix
};

// A named model: the polyhedron, a triangulation of its surface, and
// (when one is built in) a tet decomposition. Expected properties are
// for regression against the pipeline, never fed into it.
struct CatalogEntry {
    std::string name;
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
    std::vector<std::array<int, 3>> boundary_tris;
    std::optional<Triangulation3> tets;
    ExpectedProperties expected;
};

namespace detail {

// Orients a closed triangulated surface coherently, outward by signed
// volume.
inline std::vector<std::array<int, 3>> orient_surface(const std::vector<Vec3>& verts,
                                                      std::vector<std::array<int, 3>> faces) {
    std::map<std::array<int, 2>, std::vector<int>> adj;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
        for (int i = 0; i < 3; ++i) {
            int a = faces[fi][i], b = faces[fi][(i + 1) % 3];
            if (a > b) std::swap(a, b);
            adj[{a, b}].push_back(fi);
        }
    std::vector<char> done(faces.size(), 0);
    std::vector<int> stack{0};
    done[0] = 1;
    while (!stack.empty()) {
        const int fi = stack.back();
        stack.pop_back();
        const auto f = faces[fi];
        for (int i = 0; i < 3; ++i) {
            int a = f[i], b = f[(i + 1) % 3];
            int ka = std::min(a, b), kb = std::max(a, b);
            for (int gj : adj[{ka, kb}]) {
                if (gj == fi || done[gj]) continue;
                auto& g = faces[gj];
                bool same_dir = false;
                for (int r = 0; r < 3; ++r)
                    if (g[r] == a && g[(r + 1) % 3] == b) same_dir = true;
                if (same_dir) std::swap(g[1], g[2]);
                done[gj] = 1;
                stack.push_back(gj);
            }
        }
    }
    double vol = 0.0;
    for (const auto& f : faces)
        vol += verts[f[0]].dot(verts[f[1]].cross(verts[f[2]]));
    if (vol < 0)
        for (auto& f : faces) std::swap(f[1], f[2]);
    return faces;
}

inline int vertex_at(const std::vector<Vec3>& verts, const Vec3& p) {
    for (int i = 0; i < static_cast<int>(verts.size()); ++i)
        if ((verts[i] - p).norm() < 1e-9) return i;
    throw UnknownName("catalog: internal vertex lookup failed");
}

} // namespace detail

// The twisted octahedron family: top triangle fixed, bottom triangle
// rotated by theta, all six vertices on the unit cylinder at z = +-1.
inline CatalogEntry oct_theta(double theta) {
    if (!(theta > -2.0 * kPi / 3.0 && theta < 2.0 * kPi / 3.0))
        throw ThetaOutOfRange("oct_theta: theta must lie in (-2pi/3, 2pi/3)");
    CatalogEntry e;
    e.name = "oct-theta(" + std::to_string(theta) + ")";
    auto rim = [](double phi, double z) { return Vec3(std::cos(phi), std::sin(phi), z); };
    e.vertices = {rim(0.0, 1.0),
                  rim(2.0 * kPi / 3.0, 1.0),
                  rim(4.0 * kPi / 3.0, 1.0),
                  rim(-kPi + theta, -1.0),
                  rim(-kPi / 3.0 + theta, -1.0),
                  rim(kPi / 3.0 + theta, -1.0)};
    e.boundary_tris = {{0, 1, 2}, {3, 4, 5}, {0, 4, 5}, {3, 1, 5},
                       {3, 4, 2}, {0, 1, 5}, {0, 4, 2}, {3, 1, 2}};
    e.boundary_tris = detail::orient_surface(e.vertices, e.boundary_tris);
    for (const auto& f : e.boundary_tris) e.faces.push_back({f[0], f[1], f[2]});
    e.expected.weakly_convex = true;
    if (theta == 0.0) e.expected.rigid = true;
    if (std::abs(std::abs(theta) - kPi / 2.0) < 1e-15) e.expected.rigid = false;
    return e;
}

namespace detail {

inline CatalogEntry regular_tetrahedron_entry() {
    CatalogEntry e;
    e.name = "regular-tetrahedron";
    e.vertices = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
    Triangulation3 T(e.vertices, {{0, 1, 2, 3}});
    e.boundary_tris = T.boundary_triangles();
    for (const auto& f : e.boundary_tris) e.faces.push_back({f[0], f[1], f[2]});
    e.tets = std::move(T);
    e.expected = {true, true, 0, 0, 0, Signature{0, 0, 0}, 6};
    return e;
}

inline std::vector<Vec3> cube_corners() {
    std::vector<Vec3> v;
    for (int i = 0; i < 8; ++i)
        v.push_back(Vec3(i & 1 ? 1.0 : 0.0, i & 2 ? 1.0 : 0.0, i & 4 ? 1.0 : 0.0));
    return v;
}

inline std::vector<std::vector<int>> cube_faces() {
    return {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
}

inline CatalogEntry cube_5tet_entry() {
    CatalogEntry e;
    e.name = "cube-5tet";
    e.vertices = cube_corners();
    e.faces = cube_faces();
    Triangulation3 T(e.vertices,
                     {{0, 1, 2, 4}, {3, 1, 2, 7}, {5, 1, 4, 7}, {6, 2, 4, 7}, {1, 2, 4, 7}},
                     e.faces);
    e.boundary_tris = T.boundary_triangles();
    e.tets = std::move(T);
    e.expected = {true, true, 0, 0, 0, Signature{0, 0, 0}, 6};
    return e;
}

inline CatalogEntry cube_6tet_entry() {
    CatalogEntry e;
    e.name = "cube-6tet";
    e.vertices = cube_corners();
    e.faces = cube_faces();
    // Six tets around the main diagonal 0-7, one per coordinate order.
    const int axes[6][2] = {{1, 2}, {1, 4}, {2, 1}, {2, 4}, {4, 1}, {4, 2}};
    std::vector<std::array<int, 4>> tets;
    for (const auto& ax : axes)
        tets.push_back({0, ax[0], ax[0] | ax[1], 7});
    Triangulation3 T(e.vertices, tets, e.faces);
    e.boundary_tris = T.boundary_triangles();
    e.tets = std::move(T);
    e.expected = {true, true, 0, 0, 1, Signature{0, 0, 1}, 6};
    return e;
}

inline std::vector<Vec3> octahedron_vertices() {
    return {Vec3(1, 0, 0),  Vec3(-1, 0, 0), Vec3(0, 1, 0),
            Vec3(0, -1, 0), Vec3(0, 0, 1),  Vec3(0, 0, -1)};
}

inline std::vector<std::array<int, 3>> octahedron_faces() {
    return {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
}

inline CatalogEntry octahedron_cone_entry() {
    CatalogEntry e;
    e.name = "octahedron-cone";
    e.vertices = octahedron_vertices();
    e.boundary_tris = octahedron_faces();
    for (const auto& f : e.boundary_tris) e.faces.push_back({f[0], f[1], f[2]});
    e.tets = cone_triangulation(e.vertices, e.boundary_tris, 4, e.faces);
    e.expected = {true, true, 0, 0, 1, Signature{0, 0, 1}, 6};
    return e;
}

inline CatalogEntry flat_vertex_sphere_entry() {
    CatalogEntry e;
    e.name = "flat-vertex-sphere";
    e.vertices = octahedron_vertices();
    // Star the face (2,0,5) at its centroid: the new vertex is flat.
    e.vertices.push_back((e.vertices[2] + e.vertices[0] + e.vertices[5]) / 3.0);
    for (const auto& f : octahedron_faces()) e.faces.push_back({f[0], f[1], f[2]});
    for (const auto& f : octahedron_faces()) {
        if (f == std::array<int, 3>{2, 0, 5}) {
            e.boundary_tris.push_back({6, 0, 5});
            e.boundary_tris.push_back({2, 6, 5});
            e.boundary_tris.push_back({2, 0, 6});
        } else {
            e.boundary_tris.push_back(f);
        }
    }
    e.tets = cone_triangulation(e.vertices, e.boundary_tris, 4, e.faces);
    // The flat vertex sits inside a face, so the vertex set is not in
    // strictly convex position.
    e.expected = {false, false, 0, 1, 2, Signature{0, 1, 1}, 7};
    return e;
}

inline CatalogEntry jessen_icosahedron_entry() {
    CatalogEntry e;
    e.name = "jessen-icosahedron";
    for (double a : {1.0, -1.0})
        for (double b : {2.0, -2.0}) e.vertices.push_back(Vec3(0, a, b));
    for (double a : {1.0, -1.0})
        for (double b : {2.0, -2.0}) e.vertices.push_back(Vec3(b, 0, a));
    for (double a : {1.0, -1.0})
        for (double b : {2.0, -2.0}) e.vertices.push_back(Vec3(a, b, 0));

    std::vector<std::array<int, 3>> faces;
    auto at = [&](double x, double y, double z) { return vertex_at(e.vertices, Vec3(x, y, z)); };
    // One equilateral face per octant.
    for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0})
            for (double sz : {1.0, -1.0})
                faces.push_back({at(0, sy, 2 * sz), at(2 * sx, 0, sz), at(sx, 2 * sy, 0)});
    // Two isoceles faces over each short edge, spanning the reflex hinges.
    for (double b : {2.0, -2.0}) {
        faces.push_back({at(2, 0, b / 2), at(-2, 0, b / 2), at(0, 1, b)});
        faces.push_back({at(2, 0, b / 2), at(-2, 0, b / 2), at(0, -1, b)});
        faces.push_back({at(b / 2, 2, 0), at(b / 2, -2, 0), at(b, 0, 1)});
        faces.push_back({at(b / 2, 2, 0), at(b / 2, -2, 0), at(b, 0, -1)});
        faces.push_back({at(0, b / 2, 2), at(0, b / 2, -2), at(1, b, 0)});
        faces.push_back({at(0, b / 2, 2), at(0, b / 2, -2), at(-1, b, 0)});
    }
    e.boundary_tris = orient_surface(e.vertices, faces);
    for (const auto& f : e.boundary_tris) e.faces.push_back({f[0], f[1], f[2]});
    e.expected.rigid = false;
    e.expected.weakly_convex = true;
    e.expected.flex_dim = 7;
    return e;
}

} // namespace detail

// Named models. oct-theta takes its parameter in parentheses, e.g.
// "oct-theta(0.7853981633974483)".
inline CatalogEntry builtin(const std::string& name) {
    if (name == "regular-tetrahedron") return detail::regular_tetrahedron_entry();
    if (name == "cube-5tet") return detail::cube_5tet_entry();
    if (name == "cube-6tet") return detail::cube_6tet_entry();
    if (name == "octahedron-cone") return detail::octahedron_cone_entry();
    if (name == "flat-vertex-sphere") return detail::flat_vertex_sphere_entry();
    if (name == "jessen-icosahedron") return detail::jessen_icosahedron_entry();
    if (name == "wunderlich-octahedron") {
        CatalogEntry e = oct_theta(kPi / 2.0);
        e.name = "wunderlich-octahedron";
        e.expected.rigid = false;
        e.expected.flex_dim = 7;
        return e;
    }
    if (name.rfind("oct-theta(", 0) == 0 && name.back() == ')') {
        const std::string arg = name.substr(10, name.size() - 11);
        try {
            return oct_theta(std::stod(arg));
        } catch (const std::invalid_argument&) {
            throw UnknownName("builtin: cannot parse oct-theta parameter '" + arg + "'");
        }
    }
    throw UnknownName("builtin: no model named '" + name + "'");
}

inline std::vector<std::string> builtin_names() {
    return {"regular-tetrahedron", "cube-5tet",          "cube-6tet",
            "octahedron-cone",     "jessen-icosahedron", "wunderlich-octahedron",
            "oct-theta(<theta>)",  "flat-vertex-sphere"};
}

// Cross-section areas of Oct_theta at z = -1, 0, +1. The cap areas come
// straight from the cap triangles; the midsection from the planar cut.
struct SweepRow {
    double theta;
    double a_bottom;
    double a_mid;
    double a_top;
    double deficit;  // 4*a_mid - a_bottom - a_top
};

inline SweepRow oct_section_areas(double theta) {
    const CatalogEntry e = oct_theta(theta);
    SweepRow r;
    r.theta = theta;
    r.a_top = triangle_area(e.vertices[0], e.vertices[1], e.vertices[2]);
    r.a_bottom = triangle_area(e.vertices[3], e.vertices[4], e.vertices[5]);
    r.a_mid = plane_section(e.vertices, e.boundary_tris, 0.0).area;
    r.deficit = 4.0 * r.a_mid - r.a_bottom - r.a_top;
    return r;
}

inline std::vector<SweepRow> a0_sweep(const std::vector<double>& grid) {
    std::vector<SweepRow> out;
    out.reserve(grid.size());
    for (double th : grid) out.push_back(oct_section_areas(th));
    return out;
}

// Per-tet slab inequality 4a(0) >= a(-1) + a(1) for tets whose vertices
// all satisfy |z| >= 1, and its aggregate over a cover.
struct SlabRow {
    int upper = 0;  // vertices with z >= 1
    int lower = 0;  // vertices with z <= -1
    double a_bottom = 0.0;
    double a_mid = 0.0;
    double a_top = 0.0;
    bool ok = false;            // 4 a(0) >= a(-1) + a(1)
    bool ok_quadratic = true;   // 2 a(0) >= a(-1) + a(1); sharp for 2+2 splits
};

struct SlabReport {
    std::vector<SlabRow> per_tet;
    double A_bottom = 0.0;
    double A_mid = 0.0;
    double A_top = 0.0;
    bool per_tet_ok = true;
    bool aggregate_ok = true;  // 4*A_mid >= A_bottom + A_top
};

inline SlabReport codecomposability_inequality_check(
    const std::vector<std::array<Vec3, 4>>& tets) {
    SlabReport rep;
    for (const auto& pts : tets) {
        SlabRow row;
        double scale = 0.0;
        for (const auto& se : kTetEdges)
            scale = std::max(scale, (pts[se[0]] - pts[se[1]]).norm());
        for (const auto& p : pts) {
            if (p.z() >= 1.0 - 1e-9)
                ++row.upper;
            else if (p.z() <= -1.0 + 1e-9)
                ++row.lower;
            else
                throw CaseUnclassifiable(
                    "codecomposability_inequality_check: tet vertex with |z| < 1");
        }
        row.a_bottom = tet_section_area_profile(pts, -1.0);
        row.a_mid = tet_section_area_profile(pts, 0.0);
        row.a_top = tet_section_area_profile(pts, 1.0);
        row.ok = 4.0 * row.a_mid + 1e-9 * scale * scale >= row.a_bottom + row.a_top;
        if (row.upper == 2 && row.lower == 2)
            row.ok_quadratic =
                2.0 * row.a_mid + 1e-9 * scale * scale >= row.a_bottom + row.a_top;
        rep.per_tet_ok = rep.per_tet_ok && row.ok && row.ok_quadratic;
        rep.A_bottom += row.a_bottom;
        rep.A_mid += row.a_mid;
        rep.A_top += row.a_top;
        rep.per_tet.push_back(row);
    }
    double scale2 = 1.0;
    for (const auto& row : rep.per_tet)
        scale2 = std::max({scale2, row.a_bottom, row.a_mid, row.a_top});
    rep.aggregate_ok = 4.0 * rep.A_mid + 1e-9 * scale2 >= rep.A_bottom + rep.A_top;
    return rep;
}

// Proper (interior-overlapping) intersection test between the triangles
// of a surface; shared-vertex pairs are exempt.
namespace detail {

inline bool triangles_properly_intersect(const std::array<Vec3, 3>& A,
                                         const std::array<Vec3, 3>& B) {
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, (A[i] - B[j]).norm());
    const double eps = 1e-10 * std::max(1.0, scale);
    std::vector<Vec3> axes;
    axes.push_back((A[1] - A[0]).cross(A[2] - A[0]));
    axes.push_back((B[1] - B[0]).cross(B[2] - B[0]));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            axes.push_back((A[(i + 1) % 3] - A[i]).cross(B[(j + 1) % 3] - B[j]));
    for (const auto& ax : axes) {
        if (ax.norm() < 1e-14) continue;
        const Vec3 u = ax.normalized();
        double loA = 1e300, hiA = -1e300, loB = 1e300, hiB = -1e300;
        for (int i = 0; i < 3; ++i) {
            loA = std::min(loA, u.dot(A[i]));
            hiA = std::max(hiA, u.dot(A[i]));
            loB = std::min(loB, u.dot(B[i]));
            hiB = std::max(hiB, u.dot(B[i]));
        }
        if (loA >= hiB - eps || loB >= hiA - eps) return false;
    }
    return true;
}

} // namespace detail

inline bool surface_embedded(const std::vector<Vec3>& verts,
                             const std::vector<std::array<int, 3>>& tris) {
    for (size_t i = 0; i < tris.size(); ++i)
        for (size_t j = i + 1; j < tris.size(); ++j) {
            bool share = false;
            for (int a : tris[i])
                for (int b : tris[j])
                    if (a == b) share = true;
            if (share) continue;
            const std::array<Vec3, 3> A{verts[tris[i][0]], verts[tris[i][1]], verts[tris[i][2]]};
            const std::array<Vec3, 3> B{verts[tris[j][0]], verts[tris[j][1]], verts[tris[j][2]]};
            if (detail::triangles_properly_intersect(A, B)) return false;
        }
    return true;
}

} // namespace regge
