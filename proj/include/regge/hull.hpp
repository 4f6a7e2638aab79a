#pragma once
#include <array>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace regge {

struct ConvexHull {
    std::vector<std::array<int, 3>> faces;  // outward oriented triangles
    std::vector<int> hull_vertices;         // sorted, unique
    double diameter = 0.0;
};

namespace detail {

inline double plane_distance(const Vec3& a, const Vec3& n_unit, const Vec3& p) {
    return n_unit.dot(p - a);
}

} // namespace detail

// Incremental convex hull. Throws DegenerateInput when the points are
// affinely dependent (all collinear or coplanar). Coplanar clusters of
// input points are fine; the faces covering them are triangulated
// arbitrarily.
inline ConvexHull convex_hull(const std::vector<Vec3>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DegenerateInput("convex_hull: need at least 4 points");

    double diam = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            diam = std::max(diam, (pts[i] - pts[j]).norm());
    if (diam == 0.0) throw DegenerateInput("convex_hull: all points coincide");

    // Initial simplex: greedily maximize extent, area, then volume.
    int ia = 0, ib = 1;
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = (pts[i] - pts[j]).norm();
            if (d > best) { best = d; ia = i; ib = j; }
        }
    int ic = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = triangle_area(pts[ia], pts[ib], pts[i]);
        if (a > best) { best = a; ic = i; }
    }
    if (ic < 0 || best < 1e-14 * diam * diam)
        throw DegenerateInput("convex_hull: points are collinear");
    int id = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = std::abs(tet_signed_volume(pts[ia], pts[ib], pts[ic], pts[i]));
        if (v > best) { best = v; id = i; }
    }
    if (id < 0 || best < 1e-14 * diam * diam * diam)
        throw DegenerateInput("convex_hull: points are coplanar");

    const Vec3 centroid = 0.25 * (pts[ia] + pts[ib] + pts[ic] + pts[id]);
    struct Face {
        std::array<int, 3> v;
        Vec3 n;  // outward unit normal
        bool alive = true;
    };
    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c) {
        Vec3 nn = triangle_normal(pts[a], pts[b], pts[c]);
        const double ln = nn.norm();
        if (ln == 0.0) throw DegenerateInput("convex_hull: degenerate face");
        nn /= ln;
        if (detail::plane_distance(pts[a], nn, centroid) > 0.0) {
            std::swap(b, c);
            nn = -nn;
        }
        faces.push_back(Face{{a, b, c}, nn, true});
    };
    add_face(ia, ib, ic);
    add_face(ia, ib, id);
    add_face(ia, ic, id);
    add_face(ib, ic, id);

    const double eps_vis = 1e-12 * diam;
    for (int p = 0; p < n; ++p) {
        if (p == ia || p == ib || p == ic || p == id) continue;
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            if (!faces[f].alive) continue;
            if (detail::plane_distance(pts[faces[f].v[0]], faces[f].n, pts[p]) > eps_vis)
                visible.push_back(f);
        }
        if (visible.empty()) continue;

        // Horizon edges: directed edges of visible faces whose reverse is not
        // also on a visible face.
        std::map<std::pair<int, int>, int> edge_count;
        for (int f : visible) {
            const auto& v = faces[f].v;
            for (int k = 0; k < 3; ++k) {
                const int a = v[k], b = v[(k + 1) % 3];
                edge_count[{a, b}]++;
            }
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [e, cnt] : edge_count) {
            (void)cnt;
            if (edge_count.find({e.second, e.first}) == edge_count.end())
                horizon.push_back(e);
        }
        for (int f : visible) faces[f].alive = false;
        for (const auto& [a, b] : horizon) add_face(a, b, p);
    }

    ConvexHull out;
    out.diameter = diam;
    std::vector<int> live;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        if (faces[f].alive) {
            out.faces.push_back(faces[f].v);
            live.push_back(f);
        }

    // A point appearing in the face triangulation is a hull vertex only if
    // it is strictly extreme. Group faces into coplanar clusters; a corner
    // has incident face planes spanning all of 3-space.
    const int nf = static_cast<int>(live.size());
    std::vector<int> group(nf);
    for (int i = 0; i < nf; ++i) group[i] = i;
    auto find = [&](int i) {
        while (group[i] != i) i = group[i] = group[group[i]];
        return i;
    };
    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j) {
            const Face& fi = faces[live[i]];
            const Face& fj = faces[live[j]];
            if (fi.n.dot(fj.n) > 1.0 - 1e-9 &&
                std::abs(fi.n.dot(pts[fj.v[0]] - pts[fi.v[0]])) < 1e-9 * diam)
                group[find(i)] = find(j);
        }
    std::map<int, std::map<int, Vec3>> vertex_planes;  // vertex -> group -> normal
    for (int i = 0; i < nf; ++i)
        for (int v : faces[live[i]].v) vertex_planes[v][find(i)] = faces[live[i]].n;
    for (const auto& [v, planes] : vertex_planes) {
        Eigen::MatrixXd N(3, static_cast<int>(planes.size()));
        int c = 0;
        for (const auto& [g, nn] : planes) {
            (void)g;
            N.col(c++) = nn;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
        const auto& sv = svd.singularValues();
        int rank = 0;
        while (rank < sv.size() && sv(rank) > 1e-6 * sv(0)) ++rank;
        if (rank == 3) out.hull_vertices.push_back(v);
    }
    return out;
}

// Signed distance from a point to the hull boundary: negative inside,
// positive outside (max over supporting planes).
inline double signed_hull_distance(const std::vector<Vec3>& pts, const ConvexHull& hull,
                                   const Vec3& p) {
    double d = -std::numeric_limits<double>::infinity();
    for (const auto& f : hull.faces) {
        Vec3 nn = triangle_normal(pts[f[0]], pts[f[1]], pts[f[2]]);
        const double ln = nn.norm();
        if (ln == 0.0) continue;
        d = std::max(d, detail::plane_distance(pts[f[0]], nn / ln, p));
    }
    return d;
}

// True when every point lies within tol_rel * diameter of the hull
// boundary, i.e. no point is strictly interior.
// Strict convex position: every point is a vertex of the hull.
inline bool vertices_in_convex_position(const std::vector<Vec3>& pts) {
    const ConvexHull hull = convex_hull(pts);
    return hull.hull_vertices.size() == pts.size();
}

} // namespace regge
