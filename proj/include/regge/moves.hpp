#pragma once
#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hessian.hpp"
#include "triangulation.hpp"

namespace regge {

enum class MoveKind {
    Pachner14,
    Pachner41,
    Pachner23,
    Pachner32,
    BoundaryStarTriangle,
    BoundaryStarEdge,
    Weld,
    VertexDisplacement,
};

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::Pachner14: return "1->4";
        case MoveKind::Pachner41: return "4->1";
        case MoveKind::Pachner23: return "2->3";
        case MoveKind::Pachner32: return "3->2";
        case MoveKind::BoundaryStarTriangle: return "star-boundary-triangle";
        case MoveKind::BoundaryStarEdge: return "star-boundary-edge";
        case MoveKind::Weld: return "weld";
        case MoveKind::VertexDisplacement: return "displace";
    }
    return "?";
}

// Everything needed to report a move and to undo it exactly. Removed
// cells and vertices are recorded in before-move indexing, added cells
// and the new vertex in after-move indexing.
struct MoveRecord {
    MoveKind kind{};
    std::vector<std::array<int, 4>> removed_tets;
    std::vector<std::array<int, 4>> added_tets;
    int new_vertex = -1;
    int removed_vertex = -1;
    Vec3 vertex_point = Vec3::Zero();  // position of the new/removed vertex
    int displaced_vertex = -1;
    Vec3 displaced_from = Vec3::Zero();
    Vec3 displaced_to = Vec3::Zero();
    std::vector<std::array<int, 2>> added_edges;    // after indexing
    std::vector<std::array<int, 2>> removed_edges;  // before indexing
};

struct MoveResult {
    Triangulation3 tri;
    MoveRecord record;
};

namespace detail {

inline std::array<int, 4> sorted4(std::array<int, 4> q) {
    std::sort(q.begin(), q.end());
    return q;
}

inline int find_tet(const Triangulation3& T, std::array<int, 4> verts) {
    const auto key = sorted4(verts);
    for (int t = 0; t < T.num_tets(); ++t)
        if (sorted4(T.tets()[t]) == key) return t;
    return -1;
}

inline Eigen::Vector4d tet_barycentric(const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                       const Vec3& v3, const Vec3& p) {
    Eigen::Matrix3d A;
    A.col(0) = v1 - v0;
    A.col(1) = v2 - v0;
    A.col(2) = v3 - v0;
    const Vec3 lam = A.fullPivLu().solve(p - v0);
    return {1.0 - lam.sum(), lam(0), lam(1), lam(2)};
}

// Barycentric coordinates of p in triangle (a,b,c) plus p's out-of-plane
// distance relative to the triangle scale.
inline std::pair<Eigen::Vector3d, double> triangle_barycentric(const Vec3& a, const Vec3& b,
                                                               const Vec3& c, const Vec3& p) {
    Eigen::Matrix<double, 3, 2> A;
    A.col(0) = b - a;
    A.col(1) = c - a;
    const Eigen::Vector2d uv =
        (A.transpose() * A).ldlt().solve(A.transpose() * (p - a));
    const Vec3 foot = a + A * uv;
    const double scale = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    return {Eigen::Vector3d(1.0 - uv.sum(), uv(0), uv(1)), (p - foot).norm() / scale};
}

inline constexpr double kBaryMargin = 1e-9;

inline std::vector<std::array<int, 4>> erase_tets(const Triangulation3& T,
                                                  const std::vector<std::array<int, 4>>& gone) {
    std::vector<std::array<int, 4>> keys;
    for (const auto& g : gone) keys.push_back(sorted4(g));
    std::vector<std::array<int, 4>> out;
    for (const auto& q : T.tets())
        if (std::find(keys.begin(), keys.end(), sorted4(q)) == keys.end()) out.push_back(q);
    if (out.size() + gone.size() != T.tets().size())
        throw InvalidMove("move: a cell scheduled for removal is absent");
    return out;
}

} // namespace detail

// Splits one tet into four around an interior point.
inline MoveResult pachner_1_4(const Triangulation3& T, int tet,
                              std::optional<Vec3> point = std::nullopt) {
    if (tet < 0 || tet >= T.num_tets()) throw IndexMismatch("pachner_1_4: bad tet index");
    const auto q = T.tets()[tet];
    const auto& V = T.vertices();
    const Vec3 p = point.value_or(0.25 * (V[q[0]] + V[q[1]] + V[q[2]] + V[q[3]]));
    const Eigen::Vector4d lam = detail::tet_barycentric(V[q[0]], V[q[1]], V[q[2]], V[q[3]], p);
    if (lam.minCoeff() <= detail::kBaryMargin)
        throw PointNotInterior("pachner_1_4: point not strictly inside the tet");

    std::vector<Vec3> verts = V;
    verts.push_back(p);
    const int w = static_cast<int>(verts.size()) - 1;

    MoveRecord rec;
    rec.kind = MoveKind::Pachner14;
    rec.removed_tets = {q};
    rec.new_vertex = w;
    rec.vertex_point = p;
    auto tets = detail::erase_tets(T, {q});
    for (int i = 0; i < 4; ++i) {
        auto nt = q;
        nt[i] = w;
        tets.push_back(nt);
        rec.added_tets.push_back(nt);
        rec.added_edges.push_back(q[i] < w ? std::array<int, 2>{q[i], w}
                                           : std::array<int, 2>{w, q[i]});
    }
    return {Triangulation3(std::move(verts), std::move(tets), T.reference_faces()), rec};
}

// Removes an interior vertex of tet-degree four, merging its star back
// into one tet. Vertex indices above the removed one shift down.
inline MoveResult pachner_4_1(const Triangulation3& T, int vertex) {
    if (vertex < 0 || vertex >= T.num_vertices())
        throw IndexMismatch("pachner_4_1: bad vertex index");
    for (const auto& f : T.boundary_triangles())
        for (int v : f)
            if (v == vertex) throw InvalidMove("pachner_4_1: vertex lies on the boundary");
    const auto& star = T.vertex_tets()[vertex];
    if (star.size() != 4) throw InvalidMove("pachner_4_1: vertex star is not four tets");

    std::set<int> link_set;
    for (int t : star)
        for (int v : T.tets()[t])
            if (v != vertex) link_set.insert(v);
    if (link_set.size() != 4) throw InvalidMove("pachner_4_1: star is not a 1->4 figure");

    MoveRecord rec;
    rec.kind = MoveKind::Pachner41;
    rec.removed_vertex = vertex;
    rec.vertex_point = T.vertices()[vertex];
    std::vector<std::array<int, 4>> gone;
    for (int t : star) {
        gone.push_back(T.tets()[t]);
        rec.removed_tets.push_back(T.tets()[t]);
        for (int v : T.tets()[t]) {
            if (v == vertex) continue;
            std::array<int, 2> e{std::min(v, vertex), std::max(v, vertex)};
            if (std::find(rec.removed_edges.begin(), rec.removed_edges.end(), e) ==
                rec.removed_edges.end())
                rec.removed_edges.push_back(e);
        }
    }
    auto remap = [&](int v) { return v > vertex ? v - 1 : v; };
    std::vector<Vec3> verts;
    for (int v = 0; v < T.num_vertices(); ++v)
        if (v != vertex) verts.push_back(T.vertices()[v]);
    std::vector<std::array<int, 4>> tets;
    for (const auto& q : detail::erase_tets(T, gone))
        tets.push_back({remap(q[0]), remap(q[1]), remap(q[2]), remap(q[3])});
    std::array<int, 4> merged;
    int c = 0;
    for (int v : link_set) merged[c++] = remap(v);
    tets.push_back(merged);
    rec.added_tets.push_back(merged);

    std::vector<std::vector<int>> faces;
    for (const auto& poly : T.reference_faces()) {
        std::vector<int> np;
        for (int v : poly) np.push_back(remap(v));
        faces.push_back(np);
    }
    return {Triangulation3(std::move(verts), std::move(tets), std::move(faces)), rec};
}

// Replaces two tets forming a strictly convex bipyramid by three tets
// around the new apex-to-apex edge.
inline MoveResult pachner_2_3(const Triangulation3& T, int tet1, int tet2) {
    if (tet1 < 0 || tet1 >= T.num_tets() || tet2 < 0 || tet2 >= T.num_tets() || tet1 == tet2)
        throw IndexMismatch("pachner_2_3: bad tet indices");
    const auto qa = T.tets()[tet1];
    const auto qb = T.tets()[tet2];
    std::vector<int> shared;
    int apex_a = -1, apex_b = -1;
    for (int v : qa) {
        if (std::find(qb.begin(), qb.end(), v) != qb.end())
            shared.push_back(v);
        else
            apex_a = v;
    }
    for (int v : qb)
        if (std::find(qa.begin(), qa.end(), v) == qa.end()) apex_b = v;
    if (shared.size() != 3 || apex_a < 0 || apex_b < 0)
        throw InvalidMove("pachner_2_3: tets do not share a face");

    const auto& V = T.vertices();
    const Vec3 n = triangle_normal(V[shared[0]], V[shared[1]], V[shared[2]]);
    const double sa = n.dot(V[apex_a] - V[shared[0]]);
    const double sb = n.dot(V[apex_b] - V[shared[0]]);
    if (sa * sb >= 0.0)
        throw NotConvexBipyramid("pachner_2_3: apexes on the same side of the shared face");
    const Vec3 cross = V[apex_a] + sa / (sa - sb) * (V[apex_b] - V[apex_a]);
    const auto [bary, off] = detail::triangle_barycentric(V[shared[0]], V[shared[1]],
                                                          V[shared[2]], cross);
    (void)off;
    if (bary.minCoeff() <= detail::kBaryMargin)
        throw NotConvexBipyramid(
            "pachner_2_3: apex segment misses the shared face interior (margin " +
            std::to_string(bary.minCoeff()) + ")");

    MoveRecord rec;
    rec.kind = MoveKind::Pachner23;
    rec.removed_tets = {qa, qb};
    rec.added_edges.push_back({std::min(apex_a, apex_b), std::max(apex_a, apex_b)});
    auto tets = detail::erase_tets(T, {qa, qb});
    for (int k = 0; k < 3; ++k) {
        const std::array<int, 4> nt{apex_a, apex_b, shared[k], shared[(k + 1) % 3]};
        tets.push_back(nt);
        rec.added_tets.push_back(nt);
    }
    return {Triangulation3(T.vertices(), std::move(tets), T.reference_faces()), rec};
}

// Removes an interior edge of tet-degree three.
inline MoveResult pachner_3_2(const Triangulation3& T, int a, int b) {
    const int e = T.edge_index(a, b);
    if (e < 0) throw IndexMismatch("pachner_3_2: no such edge");
    const auto& around = T.edge_tets()[e];
    if (around.size() != 3) throw InvalidMove("pachner_3_2: edge is not in exactly 3 tets");

    std::set<int> link;
    for (int t : around)
        for (int v : T.tets()[t])
            if (v != a && v != b) link.insert(v);
    if (link.size() != 3) throw InvalidMove("pachner_3_2: broken link");
    std::vector<int> xyz(link.begin(), link.end());

    const auto& V = T.vertices();
    const Vec3 n = triangle_normal(V[xyz[0]], V[xyz[1]], V[xyz[2]]);
    const double sa = n.dot(V[a] - V[xyz[0]]);
    const double sb = n.dot(V[b] - V[xyz[0]]);
    if (sa * sb >= 0.0)
        throw NotConvexBipyramid("pachner_3_2: link triangle does not separate the edge ends");
    const Vec3 cross = V[a] + sa / (sa - sb) * (V[b] - V[a]);
    const auto [bary, off] =
        detail::triangle_barycentric(V[xyz[0]], V[xyz[1]], V[xyz[2]], cross);
    (void)off;
    if (bary.minCoeff() <= detail::kBaryMargin)
        throw NotConvexBipyramid("pachner_3_2: edge does not cross the link triangle");

    MoveRecord rec;
    rec.kind = MoveKind::Pachner32;
    rec.removed_edges.push_back({std::min(a, b), std::max(a, b)});
    std::vector<std::array<int, 4>> gone;
    for (int t : around) {
        gone.push_back(T.tets()[t]);
        rec.removed_tets.push_back(T.tets()[t]);
    }
    auto tets = detail::erase_tets(T, gone);
    const std::array<int, 4> ta{a, xyz[0], xyz[1], xyz[2]};
    const std::array<int, 4> tb{b, xyz[0], xyz[1], xyz[2]};
    tets.push_back(ta);
    tets.push_back(tb);
    rec.added_tets = {ta, tb};
    return {Triangulation3(T.vertices(), std::move(tets), T.reference_faces()), rec};
}

// Stars a boundary triangle at an interior point of the triangle: the one
// incident tet becomes three.
inline MoveResult boundary_star_triangle(const Triangulation3& T, std::array<int, 3> tri,
                                         std::optional<Vec3> point = std::nullopt) {
    const auto inc = T.triangle_tets(tri);
    if (inc.size() != 1)
        throw InvalidMove("boundary_star_triangle: triangle is not a boundary face");
    const auto& V = T.vertices();
    const Vec3 p =
        point.value_or((V[tri[0]] + V[tri[1]] + V[tri[2]]) / 3.0);
    const auto [bary, off] = detail::triangle_barycentric(V[tri[0]], V[tri[1]], V[tri[2]], p);
    if (off > 1e-9 || bary.minCoeff() <= detail::kBaryMargin)
        throw PointNotInterior(
            "boundary_star_triangle: point not in the triangle's relative interior");

    const auto q = T.tets()[inc[0]];
    int opp = -1;
    for (int v : q)
        if (v != tri[0] && v != tri[1] && v != tri[2]) opp = v;

    std::vector<Vec3> verts = V;
    verts.push_back(p);
    const int w = static_cast<int>(verts.size()) - 1;

    MoveRecord rec;
    rec.kind = MoveKind::BoundaryStarTriangle;
    rec.removed_tets = {q};
    rec.new_vertex = w;
    rec.vertex_point = p;
    auto tets = detail::erase_tets(T, {q});
    for (int k = 0; k < 3; ++k) {
        const std::array<int, 4> nt{w, tri[k], tri[(k + 1) % 3], opp};
        tets.push_back(nt);
        rec.added_tets.push_back(nt);
    }
    for (int v : {tri[0], tri[1], tri[2], opp})
        rec.added_edges.push_back({std::min(v, w), std::max(v, w)});
    return {Triangulation3(std::move(verts), std::move(tets), T.reference_faces()), rec};
}

// Stars a boundary edge at an interior point of the edge: every incident
// tet splits in two.
inline MoveResult boundary_star_edge(const Triangulation3& T, int a, int b,
                                     std::optional<Vec3> point = std::nullopt) {
    const int e = T.edge_index(a, b);
    if (e < 0) throw IndexMismatch("boundary_star_edge: no such edge");
    bool on_boundary = false;
    for (const auto& f : T.boundary_triangles())
        for (int k = 0; k < 3; ++k) {
            const int x = f[k], y = f[(k + 1) % 3];
            if ((x == a && y == b) || (x == b && y == a)) on_boundary = true;
        }
    if (!on_boundary) throw InvalidMove("boundary_star_edge: edge is not on the boundary");

    const auto& V = T.vertices();
    const Vec3 p = point.value_or(0.5 * (V[a] + V[b]));
    const Vec3 d = V[b] - V[a];
    const double s = d.dot(p - V[a]) / d.squaredNorm();
    const double off = (p - (V[a] + s * d)).norm() / d.norm();
    if (off > 1e-9 || s <= detail::kBaryMargin || s >= 1.0 - detail::kBaryMargin)
        throw PointNotInterior("boundary_star_edge: point not in the edge's relative interior");

    std::vector<Vec3> verts = V;
    verts.push_back(V[a] + s * d);
    const int w = static_cast<int>(verts.size()) - 1;

    MoveRecord rec;
    rec.kind = MoveKind::BoundaryStarEdge;
    rec.new_vertex = w;
    rec.vertex_point = verts.back();
    std::vector<std::array<int, 4>> gone;
    std::set<int> link;
    for (int t : T.edge_tets()[e]) {
        gone.push_back(T.tets()[t]);
        rec.removed_tets.push_back(T.tets()[t]);
        for (int v : T.tets()[t])
            if (v != a && v != b) link.insert(v);
    }
    auto tets = detail::erase_tets(T, gone);
    for (const auto& q : gone) {
        for (int end : {a, b}) {
            auto nt = q;
            for (auto& v : nt)
                if (v == (end == a ? b : a)) v = w;
            tets.push_back(nt);
            rec.added_tets.push_back(nt);
        }
    }
    rec.added_edges.push_back({std::min(a, w), std::max(a, w)});
    rec.added_edges.push_back({std::min(b, w), std::max(b, w)});
    for (int v : link) rec.added_edges.push_back({std::min(v, w), std::max(v, w)});
    return {Triangulation3(std::move(verts), std::move(tets), T.reference_faces()), rec};
}

// Moves one vertex along a straight path sampled in steps; no incident
// tet may degenerate at any sample.
inline MoveResult displace_vertex(const Triangulation3& T, int vertex, const Vec3& target,
                                  int steps = 16) {
    if (vertex < 0 || vertex >= T.num_vertices())
        throw IndexMismatch("displace_vertex: bad vertex index");
    const Vec3 from = T.vertices()[vertex];
    for (int s = 1; s <= steps; ++s) {
        const Vec3 pos = from + (double(s) / steps) * (target - from);
        for (int t : T.vertex_tets()[vertex]) {
            auto q = T.tets()[t];
            std::array<Vec3, 4> pts;
            for (int i = 0; i < 4; ++i) pts[i] = q[i] == vertex ? pos : T.vertices()[q[i]];
            const double vol = tet_signed_volume(pts[0], pts[1], pts[2], pts[3]);
            double lmax = 0.0;
            for (const auto& se : kTetEdges)
                lmax = std::max(lmax, (pts[se[0]] - pts[se[1]]).norm());
            if (vol < kDegenerateVolumeRel * lmax * lmax * lmax)
                throw InvalidMove("displace_vertex: simplex degenerates at step " +
                                  std::to_string(s));
        }
    }
    std::vector<Vec3> verts = T.vertices();
    verts[vertex] = target;
    MoveRecord rec;
    rec.kind = MoveKind::VertexDisplacement;
    rec.displaced_vertex = vertex;
    rec.displaced_from = from;
    rec.displaced_to = target;
    return {T.with_vertices(std::move(verts)), rec};
}

// Exact inverse of a recorded move; the returned record carries the
// inverse kind (weld for the boundary starrings).
inline MoveResult undo_move(const Triangulation3& after, const MoveRecord& rec) {
    MoveRecord inv;
    inv.removed_tets = rec.added_tets;
    inv.added_tets = rec.removed_tets;
    inv.added_edges = rec.removed_edges;
    inv.removed_edges = rec.added_edges;

    switch (rec.kind) {
        case MoveKind::Pachner14:
        case MoveKind::BoundaryStarTriangle:
        case MoveKind::BoundaryStarEdge:
        case MoveKind::Pachner23: {
            inv.kind = rec.kind == MoveKind::Pachner14 ? MoveKind::Pachner41
                       : rec.kind == MoveKind::Pachner23
                           ? MoveKind::Pachner32
                           : MoveKind::Weld;
            std::vector<Vec3> verts = after.vertices();
            if (rec.new_vertex >= 0) {
                if (rec.new_vertex != static_cast<int>(verts.size()) - 1)
                    throw InvalidMove("undo_move: new vertex is not the last index");
                for (const auto& q : after.tets())
                    if (std::count(q.begin(), q.end(), rec.new_vertex) &&
                        std::find_if(rec.added_tets.begin(), rec.added_tets.end(),
                                     [&](const auto& t) {
                                         return detail::sorted4(t) == detail::sorted4(q);
                                     }) == rec.added_tets.end())
                        throw InvalidMove("undo_move: new vertex used outside the move");
                verts.pop_back();
                inv.removed_vertex = rec.new_vertex;
                inv.vertex_point = rec.vertex_point;
            }
            auto tets = detail::erase_tets(after, rec.added_tets);
            for (const auto& q : rec.removed_tets) tets.push_back(q);
            return {Triangulation3(std::move(verts), std::move(tets), after.reference_faces()),
                    inv};
        }
        case MoveKind::Pachner32: {
            inv.kind = MoveKind::Pachner23;
            auto tets = detail::erase_tets(after, rec.added_tets);
            for (const auto& q : rec.removed_tets) tets.push_back(q);
            return {Triangulation3(after.vertices(), std::move(tets), after.reference_faces()),
                    inv};
        }
        case MoveKind::Pachner41: {
            inv.kind = MoveKind::Pachner14;
            inv.new_vertex = rec.removed_vertex;
            inv.vertex_point = rec.vertex_point;
            const int v = rec.removed_vertex;
            auto lift = [&](int w) { return w >= v ? w + 1 : w; };
            std::vector<Vec3> verts;
            for (int w = 0; w < after.num_vertices() + 1; ++w) {
                if (w == v)
                    verts.push_back(rec.vertex_point);
                else
                    verts.push_back(after.vertices()[w > v ? w - 1 : w]);
            }
            std::vector<std::array<int, 4>> lifted;
            for (const auto& q : after.tets())
                lifted.push_back({lift(q[0]), lift(q[1]), lift(q[2]), lift(q[3])});
            Triangulation3 shifted(verts, lifted);
            auto tets = detail::erase_tets(shifted, rec.added_tets);
            for (const auto& q : rec.removed_tets) tets.push_back(q);
            return {Triangulation3(std::move(verts), std::move(tets)), inv};
        }
        case MoveKind::VertexDisplacement: {
            inv.kind = MoveKind::VertexDisplacement;
            inv.displaced_vertex = rec.displaced_vertex;
            inv.displaced_from = rec.displaced_to;
            inv.displaced_to = rec.displaced_from;
            std::vector<Vec3> verts = after.vertices();
            verts[rec.displaced_vertex] = rec.displaced_from;
            return {after.with_vertices(std::move(verts)), inv};
        }
        case MoveKind::Weld:
            throw InvalidMove("undo_move: weld records are produced only as inverses");
    }
    throw InvalidMove("undo_move: unknown kind");
}

// Direct stellar subdivisions of interior cells; used as the reference
// against which realized Pachner sequences are compared.
inline Triangulation3 star_interior_triangle(const Triangulation3& T, std::array<int, 3> tri,
                                             const Vec3& p) {
    const auto inc = T.triangle_tets(tri);
    if (inc.size() != 2) throw InvalidMove("star_interior_triangle: triangle not interior");
    std::vector<Vec3> verts = T.vertices();
    verts.push_back(p);
    const int w = static_cast<int>(verts.size()) - 1;
    std::vector<std::array<int, 4>> gone{T.tets()[inc[0]], T.tets()[inc[1]]};
    auto tets = detail::erase_tets(T, gone);
    for (const auto& q : gone) {
        int opp = -1;
        for (int v : q)
            if (v != tri[0] && v != tri[1] && v != tri[2]) opp = v;
        for (int k = 0; k < 3; ++k)
            tets.push_back({w, tri[k], tri[(k + 1) % 3], opp});
    }
    return Triangulation3(std::move(verts), std::move(tets), T.reference_faces());
}

inline Triangulation3 star_interior_edge(const Triangulation3& T, int a, int b,
                                         const Vec3& p) {
    const int e = T.edge_index(a, b);
    if (e < 0) throw IndexMismatch("star_interior_edge: no such edge");
    std::vector<Vec3> verts = T.vertices();
    verts.push_back(p);
    const int w = static_cast<int>(verts.size()) - 1;
    std::vector<std::array<int, 4>> gone;
    for (int t : T.edge_tets()[e]) gone.push_back(T.tets()[t]);
    auto tets = detail::erase_tets(T, gone);
    for (const auto& q : gone)
        for (int end : {a, b}) {
            auto nt = q;
            for (auto& v : nt)
                if (v == (end == a ? b : a)) v = w;
            tets.push_back(nt);
        }
    return Triangulation3(std::move(verts), std::move(tets), T.reference_faces());
}

struct RealizedStarring {
    Triangulation3 result;
    std::vector<MoveRecord> records;
};

namespace detail {

// Link of an interior edge as a cyclic vertex sequence.
inline std::vector<int> interior_edge_link_cycle(const Triangulation3& T, int e) {
    std::vector<int> order;
    if (edge_link_shape(T, e, &order) != LinkShape::Cycle)
        throw InvalidMove("interior edge expected (closed link)");
    return order;
}

inline double wrap_angle(double x) {
    while (x < 0) x += 2.0 * kPi;
    while (x >= 2.0 * kPi) x -= 2.0 * kPi;
    return x;
}

} // namespace detail

// Realizes the starring of an interior triangle or interior edge at p as
// a sequence of Pachner moves followed by one vertex displacement, per
// the constructive recipes: the auxiliary point starts strictly inside a
// starting tet and is displaced onto the starred cell at the end.
inline RealizedStarring realize_interior_starring(const Triangulation3& T,
                                                  const std::vector<int>& cell,
                                                  const Vec3& p) {
    const double shrink[] = {0.25, 0.1, 0.03, 0.01};

    if (cell.size() == 3) {
        std::array<int, 3> tri{cell[0], cell[1], cell[2]};
        const auto inc = T.triangle_tets(tri);
        if (inc.size() != 2)
            throw InvalidMove("realize_interior_starring: triangle not interior");
        const auto [bary, off] = detail::triangle_barycentric(
            T.vertices()[tri[0]], T.vertices()[tri[1]], T.vertices()[tri[2]], p);
        if (off > 1e-9 || bary.minCoeff() <= detail::kBaryMargin)
            throw PointNotInterior("realize_interior_starring: point not inside the triangle");

        std::string last_error;
        for (int side = 0; side < 2; ++side) {
            const auto qa = T.tets()[inc[side]];
            const auto qb = T.tets()[inc[1 - side]];
            int a = -1, b = -1;
            for (int v : qa)
                if (v != tri[0] && v != tri[1] && v != tri[2]) a = v;
            for (int v : qb)
                if (v != tri[0] && v != tri[1] && v != tri[2]) b = v;
            for (double s : shrink) {
                try {
                    RealizedStarring out;
                    const Vec3 pp = p + s * (T.vertices()[a] - p);
                    auto r1 = pachner_1_4(T, inc[side], pp);
                    out.records.push_back(r1.record);
                    const int w = r1.record.new_vertex;
                    const int t1 = detail::find_tet(r1.tri, {w, tri[0], tri[1], tri[2]});
                    const int t2 = detail::find_tet(r1.tri, {b, tri[0], tri[1], tri[2]});
                    if (t1 < 0 || t2 < 0)
                        throw InvalidMove("realize: expected tets missing after 1->4");
                    auto r2 = pachner_2_3(r1.tri, t1, t2);
                    out.records.push_back(r2.record);
                    auto r3 = displace_vertex(r2.tri, w, p);
                    out.records.push_back(r3.record);
                    out.result = r3.tri;
                    return out;
                } catch (const Error& e) {
                    last_error = e.what();
                }
            }
        }
        throw GenericityFailure("realize_interior_starring: all placements failed (last: " +
                                last_error + ")");
    }

    if (cell.size() != 2)
        throw InvalidMove("realize_interior_starring: cell must be an edge or a triangle");
    const int a = cell[0], b = cell[1];
    const int e = T.edge_index(a, b);
    if (e < 0) throw IndexMismatch("realize_interior_starring: no such edge");
    std::vector<int> cyc = detail::interior_edge_link_cycle(T, e);
    const int n = static_cast<int>(cyc.size());

    const auto& V = T.vertices();
    const Vec3 axis = (V[b] - V[a]).normalized();
    const double s_on = axis.dot(p - V[a]) / (V[b] - V[a]).norm();
    const double off_axis = (p - (V[a] + s_on * (V[b] - V[a]))).norm();
    if (off_axis > 1e-9 * (V[b] - V[a]).norm() || s_on <= detail::kBaryMargin ||
        s_on >= 1.0 - detail::kBaryMargin)
        throw PointNotInterior("realize_interior_starring: point not inside the edge");

    Vec3 f = axis.unitOrthogonal();
    Vec3 g = axis.cross(f);
    auto azimuth = [&](const Vec3& x) {
        const Vec3 d = x - V[a];
        return std::atan2(d.dot(g), d.dot(f));
    };
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) phi[i] = azimuth(V[cyc[i]]);
    // Orient the cycle so azimuth increases along it.
    {
        double winding = 0.0;
        for (int i = 0; i < n; ++i)
            winding += std::remainder(phi[(i + 1) % n] - phi[i], 2.0 * kPi);
        if (winding < 0) {
            std::reverse(cyc.begin(), cyc.end());
            std::reverse(phi.begin(), phi.end());
        }
    }

    // Wedge widths; try the narrowest starting wedges first.
    std::vector<std::pair<double, int>> wedges;
    for (int i = 0; i < n; ++i)
        wedges.push_back({detail::wrap_angle(phi[(i + 1) % n] - phi[i]), i});
    std::sort(wedges.begin(), wedges.end());

    std::string last_error = "no wedge admitted the recipe";
    for (const auto& [width, start] : wedges) {
        if (width >= kPi) continue;
        // Relabel so the starting wedge is (v_n, v_1).
        std::vector<int> v(n + 1);  // 1-based
        for (int i = 0; i < n; ++i) v[1 + i] = cyc[(start + 1 + i) % n];

        for (double s : shrink) {
            try {
                const int start_tet = detail::find_tet(T, {a, b, v[n], v[1]});
                if (start_tet < 0) throw InvalidMove("realize: starting tet missing");
                const auto& q = T.tets()[start_tet];
                const Vec3 centroid =
                    0.25 * (V[q[0]] + V[q[1]] + V[q[2]] + V[q[3]]);
                const Vec3 pp = (1.0 - s) * p + s * centroid;

                // The half plane of (a,b,pp) opposite pp must cross a wedge
                // (v_k, v_k+1) with 1 <= k <= n-1, clear of all link rays.
                const double opp = detail::wrap_angle(azimuth(pp) + kPi);
                int k = -1;
                for (int j = 1; j <= n - 1; ++j) {
                    const double lo = azimuth(V[v[j]]);
                    const double width_j = detail::wrap_angle(azimuth(V[v[j + 1]]) - lo);
                    const double x = detail::wrap_angle(opp - lo);
                    if (x > 1e-7 && x < width_j - 1e-7) { k = j; break; }
                }
                if (k < 0)
                    throw GenericityFailure(
                        "realize: auxiliary plane hits a link ray or the starting wedge");

                RealizedStarring out;
                auto r = pachner_1_4(T, start_tet, pp);
                out.records.push_back(r.record);
                const int w = r.record.new_vertex;
                Triangulation3 cur = r.tri;
                auto do23 = [&](std::array<int, 4> ta, std::array<int, 4> tb) {
                    const int i1 = detail::find_tet(cur, ta);
                    const int i2 = detail::find_tet(cur, tb);
                    if (i1 < 0 || i2 < 0)
                        throw InvalidMove("realize: expected tets missing in the fan");
                    auto rr = pachner_2_3(cur, i1, i2);
                    out.records.push_back(rr.record);
                    cur = rr.tri;
                };
                for (int j = 1; j <= k - 1; ++j)
                    do23({a, b, v[j], w}, {a, b, v[j], v[j + 1]});
                for (int j = n - 1; j >= k + 1; --j)
                    do23({a, b, v[j + 1], w}, {a, b, v[j + 1], v[j]});
                auto r32 = pachner_3_2(cur, a, b);
                out.records.push_back(r32.record);
                cur = r32.tri;
                auto rd = displace_vertex(cur, w, V[a] + s_on * (V[b] - V[a]));
                out.records.push_back(rd.record);
                out.result = rd.tri;
                return out;
            } catch (const Error& err) {
                last_error = err.what();
            }
        }
    }
    throw GenericityFailure("realize_interior_starring: all placements failed (last: " +
                            last_error + ")");
}

enum class Definiteness { PositiveSemidefinite, NegativeSemidefinite, Indefinite, Zero };

inline const char* definiteness_name(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveSemidefinite: return "psd";
        case Definiteness::NegativeSemidefinite: return "nsd";
        case Definiteness::Indefinite: return "indefinite";
        case Definiteness::Zero: return "zero";
    }
    return "?";
}

// Phi = M_after - M_before over the union interior-edge set, with the
// smaller matrix zero-padded on the edges it lacks.
struct MoveDelta {
    Eigen::MatrixXd Phi;
    std::vector<std::array<int, 2>> union_edges;  // vertex pairs, larger complex's indexing
    int rank = 0;
    Definiteness definiteness = Definiteness::Zero;
    Eigen::VectorXd eigenvalues;
    double zero_threshold = 0.0;
    HessianReport before;
    HessianReport after;
};

inline MoveDelta move_delta(const Triangulation3& T_before, const Triangulation3& T_after,
                            const MoveRecord& rec, const HessianOptions& opt = {}) {
    const Census cb = census(T_before);
    const Census ca = census(T_after);

    MoveDelta out;

    // Embed the smaller complex's vertex indices into the larger one's.
    const bool shrinking = rec.removed_vertex >= 0;
    const int expected_after_verts =
        T_before.num_vertices() + (rec.new_vertex >= 0 ? 1 : 0) - (shrinking ? 1 : 0);
    if (T_after.num_vertices() != expected_after_verts)
        throw IncompatibleEdgeSets("move_delta: vertex counts do not fit the record");

    out.before = hessian(T_before, cb, opt);
    out.after = hessian(T_after, ca, opt);
    auto embed_small = [&](int v) {
        if (!shrinking) return v;  // growing or same-size: indices preserved
        return v >= rec.removed_vertex ? v + 1 : v;
    };
    // Before-side edges map through embed when before is smaller (growing
    // move); after-side edges map through embed when shrinking.
    auto before_key = [&](const std::array<int, 2>& ed) {
        if (shrinking) return ed;
        std::array<int, 2> k{embed_small(ed[0]), embed_small(ed[1])};
        if (k[0] > k[1]) std::swap(k[0], k[1]);
        return k;
    };
    auto after_key = [&](const std::array<int, 2>& ed) {
        if (!shrinking) return ed;
        std::array<int, 2> k{embed_small(ed[0]), embed_small(ed[1])};
        if (k[0] > k[1]) std::swap(k[0], k[1]);
        return k;
    };

    // Every interior edge of the smaller complex must survive into the
    // larger one; the record connects the two indexings.
    for (int i = 0; i < (shrinking ? ca.n() : cb.n()); ++i) {
        const auto key = shrinking ? after_key(ca.edge.edges[ca.edge.interior_edges[i]])
                                   : before_key(cb.edge.edges[cb.edge.interior_edges[i]]);
        const Triangulation3& big = shrinking ? T_before : T_after;
        if (key[1] >= big.num_vertices() || big.edge_index(key[0], key[1]) < 0)
            throw IncompatibleEdgeSets("move_delta: interior edge (" + std::to_string(key[0]) +
                                       "," + std::to_string(key[1]) +
                                       ") has no counterpart across the move");
    }

    std::map<std::array<int, 2>, int> slot;
    for (int i = 0; i < cb.n(); ++i)
        slot.emplace(before_key(cb.edge.edges[cb.edge.interior_edges[i]]), 0);
    for (int i = 0; i < ca.n(); ++i)
        slot.emplace(after_key(ca.edge.edges[ca.edge.interior_edges[i]]), 0);
    int idx = 0;
    for (auto& [key, s] : slot) {
        s = idx++;
        out.union_edges.push_back(key);
    }
    const int u = idx;

    Eigen::MatrixXd Mb = Eigen::MatrixXd::Zero(u, u);
    Eigen::MatrixXd Ma = Eigen::MatrixXd::Zero(u, u);
    std::vector<int> rb(cb.n()), ra(ca.n());
    for (int i = 0; i < cb.n(); ++i)
        rb[i] = slot.at(before_key(cb.edge.edges[cb.edge.interior_edges[i]]));
    for (int i = 0; i < ca.n(); ++i)
        ra[i] = slot.at(after_key(ca.edge.edges[ca.edge.interior_edges[i]]));
    for (int i = 0; i < cb.n(); ++i)
        for (int j = 0; j < cb.n(); ++j) Mb(rb[i], rb[j]) = out.before.M(i, j);
    for (int i = 0; i < ca.n(); ++i)
        for (int j = 0; j < ca.n(); ++j) Ma(ra[i], ra[j]) = out.after.M(i, j);

    out.Phi = Ma - Mb;
    const SymmetricSpectrum sp = symmetric_spectrum(out.Phi, opt.zero_threshold_rel);
    out.eigenvalues = sp.eigenvalues;
    out.zero_threshold = sp.zero_threshold;
    out.rank = sp.signature.negative + sp.signature.positive;
    if (sp.signature.negative == 0 && sp.signature.positive == 0)
        out.definiteness = Definiteness::Zero;
    else if (sp.signature.negative == 0)
        out.definiteness = Definiteness::PositiveSemidefinite;
    else if (sp.signature.positive == 0)
        out.definiteness = Definiteness::NegativeSemidefinite;
    else
        out.definiteness = Definiteness::Indefinite;
    return out;
}

struct TransportCheck {
    bool ok = false;
    Signature before;
    Signature after;
    Signature expected_after;
    bool theorem_before = false;  // signature matches (m, 3m+k, n-4m-k)
    bool theorem_after = false;
    std::string detail;
};

namespace detail {

inline Signature theorem_signature(const Census& c) {
    return Signature{c.m(), 3 * c.m() + c.k(), c.n() - 4 * c.m() - c.k()};
}

} // namespace detail

// Checks the predicted signature change for one elementary move, and the
// census-based signature formula on both sides.
inline TransportCheck signature_transport_check(const Triangulation3& T_before,
                                                const Triangulation3& T_after,
                                                const MoveRecord& rec,
                                                const HessianOptions& opt = {}) {
    const Census cb = census(T_before);
    const Census ca = census(T_after);
    const HessianReport hb = hessian(T_before, cb, opt);
    const HessianReport ha = hessian(T_after, ca, opt);

    TransportCheck chk;
    chk.before = hb.signature;
    chk.after = ha.signature;
    chk.theorem_before = hb.signature == detail::theorem_signature(cb);
    chk.theorem_after = ha.signature == detail::theorem_signature(ca);

    auto star_edge_delta = [&](const Triangulation3& base, const Census& after_census,
                               const MoveRecord& r) {
        // i = one less than the number of tets incident to the starred edge.
        (void)base;
        const int i = static_cast<int>(r.removed_tets.size()) - 1;
        const bool flat = std::find(after_census.vertex.flat_vertices.begin(),
                                    after_census.vertex.flat_vertices.end(),
                                    r.new_vertex) != after_census.vertex.flat_vertices.end();
        return flat ? Signature{0, 1, i - 1} : Signature{0, 0, i};
    };

    Signature d{0, 0, 0};
    switch (rec.kind) {
        case MoveKind::Pachner14: d = {1, 3, 0}; break;
        case MoveKind::Pachner41: d = {-1, -3, 0}; break;
        case MoveKind::Pachner23: d = {0, 0, 1}; break;
        case MoveKind::Pachner32: d = {0, 0, -1}; break;
        case MoveKind::BoundaryStarTriangle: d = {0, 1, 0}; break;
        case MoveKind::BoundaryStarEdge: d = star_edge_delta(T_before, ca, rec); break;
        case MoveKind::Weld: {
            // Inverse of a starring: recompute the starring prediction in
            // the reverse direction and negate.
            MoveRecord fwd = rec;
            fwd.removed_tets = rec.added_tets;
            fwd.added_tets = rec.removed_tets;
            fwd.new_vertex = rec.removed_vertex;
            if (rec.added_tets.size() == 1) {
                d = {0, -1, 0};
            } else {
                const Signature s = star_edge_delta(T_after, cb, fwd);
                d = {-s.negative, -s.zero, -s.positive};
            }
            break;
        }
        case MoveKind::VertexDisplacement: d = {0, 0, 0}; break;
    }
    chk.expected_after = Signature{chk.before.negative + d.negative,
                                   chk.before.zero + d.zero,
                                   chk.before.positive + d.positive};
    chk.ok = chk.after == chk.expected_after && chk.theorem_before && chk.theorem_after;
    if (!chk.ok)
        chk.detail = std::string("expected (") + std::to_string(chk.expected_after.negative) +
                     "," + std::to_string(chk.expected_after.zero) + "," +
                     std::to_string(chk.expected_after.positive) + ") observed (" +
                     std::to_string(chk.after.negative) + "," + std::to_string(chk.after.zero) +
                     "," + std::to_string(chk.after.positive) + ")";
    return chk;
}

} // namespace regge
