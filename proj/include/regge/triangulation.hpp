#pragma once
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace regge {

using EdgeLengthVector = std::vector<double>;  // indexed by interior edges

// Tetrahedral complex over an explicit vertex set. Immutable after
// construction; tets are normalized to positive orientation and all
// incidence structure is derived up front. Moves produce fresh values.
class Triangulation3 {
public:
    Triangulation3() = default;
    Triangulation3(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                   std::vector<std::vector<int>> reference_faces = {})
        : verts_(std::move(vertices)),
          tets_(std::move(tets)),
          ref_faces_(std::move(reference_faces)) {
        build();
    }

    const std::vector<Vec3>& vertices() const { return verts_; }
    const std::vector<std::array<int, 4>>& tets() const { return tets_; }
    const std::vector<std::vector<int>>& reference_faces() const { return ref_faces_; }

    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int num_tets() const { return static_cast<int>(tets_.size()); }

    // All edges as sorted vertex pairs, in lexicographic order.
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    int edge_index(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = edge_index_.find({a, b});
        return it == edge_index_.end() ? -1 : it->second;
    }
    const std::vector<std::vector<int>>& edge_tets() const { return edge_tets_; }

    // Outward-oriented boundary triangles (faces incident to one tet).
    const std::vector<std::array<int, 3>>& boundary_triangles() const {
        return boundary_tris_;
    }
    // Tets incident to a triangle given by any vertex order.
    std::vector<int> triangle_tets(std::array<int, 3> tri) const {
        std::sort(tri.begin(), tri.end());
        auto it = tri_map_.find(tri);
        if (it == tri_map_.end()) return {};
        std::vector<int> out;
        for (const auto& [tet, opp] : it->second) {
            (void)opp;
            out.push_back(tet);
        }
        return out;
    }
    const std::vector<std::vector<int>>& vertex_tets() const { return vertex_tets_; }

    // Global edge index for each of a tet's six edge slots (kTetEdges order).
    const std::array<int, 6>& tet_edge_indices(int t) const { return tet_edges_[t]; }

    TetLengths tet_lengths(int t) const {
        const auto& q = tets_[t];
        return tet_lengths_from_points(verts_[q[0]], verts_[q[1]], verts_[q[2]],
                                       verts_[q[3]]);
    }

    double edge_length(int e) const {
        return (verts_[edges_[e][0]] - verts_[edges_[e][1]]).norm();
    }

    double diameter() const { return diameter_; }

    double tet_volume_sum() const {
        double v = 0.0;
        for (const auto& q : tets_)
            v += tet_signed_volume(verts_[q[0]], verts_[q[1]], verts_[q[2]], verts_[q[3]]);
        return v;
    }

    // Volume of the region enclosed by the boundary surface, by the
    // divergence theorem.
    double solid_volume() const {
        double v = 0.0;
        for (const auto& f : boundary_tris_)
            v += tet_signed_volume(Vec3::Zero(), verts_[f[0]], verts_[f[1]], verts_[f[2]]);
        return v;
    }

    // Same complex with vertex positions replaced (combinatorics kept).
    Triangulation3 with_vertices(std::vector<Vec3> new_verts) const {
        return Triangulation3(std::move(new_verts), tets_, ref_faces_);
    }

private:
    void build() {
        for (auto& q : tets_) {
            for (int v : q)
                if (v < 0 || v >= num_vertices())
                    throw IndexMismatch("Triangulation3: tet vertex index out of range");
            if (tet_signed_volume(verts_[q[0]], verts_[q[1]], verts_[q[2]], verts_[q[3]]) <
                0.0)
                std::swap(q[2], q[3]);
        }

        diameter_ = 0.0;
        for (size_t i = 0; i < verts_.size(); ++i)
            for (size_t j = i + 1; j < verts_.size(); ++j)
                diameter_ = std::max(diameter_, (verts_[i] - verts_[j]).norm());

        std::set<std::array<int, 2>> edge_set;
        for (const auto& q : tets_)
            for (const auto& s : kTetEdges) {
                int a = q[s[0]], b = q[s[1]];
                if (a > b) std::swap(a, b);
                edge_set.insert({a, b});
            }
        edges_.assign(edge_set.begin(), edge_set.end());
        for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
            edge_index_[edges_[e]] = e;

        edge_tets_.assign(edges_.size(), {});
        tet_edges_.assign(tets_.size(), {});
        vertex_tets_.assign(verts_.size(), {});
        tri_map_.clear();
        for (int t = 0; t < num_tets(); ++t) {
            const auto& q = tets_[t];
            for (int s = 0; s < 6; ++s) {
                const int e = edge_index(q[kTetEdges[s][0]], q[kTetEdges[s][1]]);
                tet_edges_[t][s] = e;
                edge_tets_[e].push_back(t);
            }
            for (int v : q) vertex_tets_[v].push_back(t);
            for (int opp = 0; opp < 4; ++opp) {
                std::array<int, 3> tri;
                int c = 0;
                for (int v = 0; v < 4; ++v)
                    if (v != opp) tri[c++] = q[v];
                std::sort(tri.begin(), tri.end());
                tri_map_[tri].push_back({t, opp});
            }
        }

        boundary_tris_.clear();
        for (const auto& [tri, inc] : tri_map_) {
            (void)tri;
            if (inc.size() != 1) continue;
            boundary_tris_.push_back(outward_face(inc[0].first, inc[0].second));
        }
    }

    // Face of tet t opposite local position opp, oriented outward for a
    // positively oriented tet.
    std::array<int, 3> outward_face(int t, int opp) const {
        const auto& q = tets_[t];
        std::array<int, 3> f;
        int c = 0;
        for (int v = 0; v < 4; ++v)
            if (v != opp) f[c++] = q[v];
        // Boundary of an oriented 3-simplex: faces at odd positions flip.
        if (opp == 1 || opp == 3) std::swap(f[1], f[2]);
        return f;
    }

    std::vector<Vec3> verts_;
    std::vector<std::array<int, 4>> tets_;
    std::vector<std::vector<int>> ref_faces_;
    std::vector<std::array<int, 2>> edges_;
    std::map<std::array<int, 2>, int> edge_index_;
    std::vector<std::vector<int>> edge_tets_;
    std::vector<std::array<int, 6>> tet_edges_;
    std::vector<std::vector<int>> vertex_tets_;
    std::map<std::array<int, 3>, std::vector<std::pair<int, int>>> tri_map_;
    std::vector<std::array<int, 3>> boundary_tris_;
    double diameter_ = 0.0;
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct ValidationReport {
    bool valid = true;
    std::vector<ValidationIssue> issues;

    void fail(std::string code, std::string message) {
        valid = false;
        issues.push_back({std::move(code), std::move(message)});
    }
};

namespace detail {

// Link structure around an edge: every incident tet contributes one edge
// of the link graph. A closed cycle means an interior edge, an open path
// a boundary edge.
enum class LinkShape { Cycle, Path, Broken };

inline LinkShape edge_link_shape(const Triangulation3& T, int e,
                                 std::vector<int>* path_order = nullptr) {
    const auto [a, b] = std::pair{T.edges()[e][0], T.edges()[e][1]};
    std::map<int, std::vector<int>> adj;
    for (int t : T.edge_tets()[e]) {
        int other[2], c = 0;
        for (int v : T.tets()[t])
            if (v != a && v != b) other[c++] = v;
        adj[other[0]].push_back(other[1]);
        adj[other[1]].push_back(other[0]);
    }
    int deg1 = 0;
    for (const auto& [v, nb] : adj) {
        (void)v;
        if (nb.size() == 1)
            ++deg1;
        else if (nb.size() != 2)
            return LinkShape::Broken;
    }
    if (deg1 != 0 && deg1 != 2) return LinkShape::Broken;

    // Walk to verify a single component, recording the order.
    int start = adj.begin()->first;
    if (deg1 == 2)
        for (const auto& [v, nb] : adj)
            if (nb.size() == 1) { start = v; break; }
    std::vector<int> order{start};
    std::set<int> seen{start};
    int prev = -1, cur = start;
    while (true) {
        int nxt = -1;
        for (int nb : adj[cur])
            if (nb != prev && !seen.count(nb)) { nxt = nb; break; }
        if (nxt < 0) break;
        order.push_back(nxt);
        seen.insert(nxt);
        prev = cur;
        cur = nxt;
    }
    if (order.size() != adj.size()) return LinkShape::Broken;
    if (path_order) *path_order = order;
    return deg1 == 0 ? LinkShape::Cycle : LinkShape::Path;
}

} // namespace detail

// Structural diagnostics: face matching, orientation, degeneracy, edge
// links, volume additivity, closed orientable boundary.
inline ValidationReport validate(const Triangulation3& T) {
    ValidationReport rep;
    const auto& verts = T.vertices();
    const auto& tets = T.tets();

    for (size_t i = 0; i < verts.size(); ++i)
        if (!verts[i].allFinite())
            rep.fail("nonfinite-vertex", "vertex " + std::to_string(i) + " has nonfinite coordinates");

    std::set<std::array<int, 4>> seen;
    for (size_t t = 0; t < tets.size(); ++t) {
        auto q = tets[t];
        std::sort(q.begin(), q.end());
        for (int i = 0; i < 3; ++i)
            if (q[i] == q[i + 1])
                rep.fail("repeated-vertex", "tet " + std::to_string(t) + " repeats a vertex");
        if (!seen.insert(q).second)
            rep.fail("duplicate-cell", "tet " + std::to_string(t) + " duplicates another tet");
    }

    for (size_t t = 0; t < tets.size(); ++t) {
        const auto& q = tets[t];
        const TetLengths tl = T.tet_lengths(static_cast<int>(t));
        const double vol =
            tet_signed_volume(verts[q[0]], verts[q[1]], verts[q[2]], verts[q[3]]);
        const double lmax = tl.max_length();
        if (vol < kDegenerateVolumeRel * lmax * lmax * lmax)
            rep.fail("degenerate-tet", "tet " + std::to_string(t) + " is degenerate");
    }
    if (!rep.valid) return rep;  // incidence checks assume sane cells

    // Face matching and interior orientation compatibility.
    std::map<std::array<int, 3>, std::vector<std::array<int, 3>>> oriented;
    for (size_t t = 0; t < tets.size(); ++t) {
        const auto& q = tets[t];
        for (int opp = 0; opp < 4; ++opp) {
            std::array<int, 3> f;
            int c = 0;
            for (int v = 0; v < 4; ++v)
                if (v != opp) f[c++] = q[v];
            if (opp == 1 || opp == 3) std::swap(f[1], f[2]);
            auto key = f;
            std::sort(key.begin(), key.end());
            oriented[key].push_back(f);
        }
    }
    auto same_cycle = [](const std::array<int, 3>& x, const std::array<int, 3>& y) {
        for (int r = 0; r < 3; ++r)
            if (x[0] == y[r] && x[1] == y[(r + 1) % 3] && x[2] == y[(r + 2) % 3])
                return true;
        return false;
    };
    for (const auto& [key, reps] : oriented) {
        if (reps.size() > 2) {
            rep.fail("overused-face", "triangle (" + std::to_string(key[0]) + "," +
                                          std::to_string(key[1]) + "," +
                                          std::to_string(key[2]) + ") lies in " +
                                          std::to_string(reps.size()) + " tets");
        } else if (reps.size() == 2 && same_cycle(reps[0], reps[1])) {
            rep.fail("orientation-clash", "tets on triangle (" + std::to_string(key[0]) +
                                              "," + std::to_string(key[1]) + "," +
                                              std::to_string(key[2]) +
                                              ") overlap on the same side");
        }
    }

    // Boundary must be closed and orientable: each boundary edge traversed
    // once in each direction by outward faces.
    std::map<std::pair<int, int>, int> dir_count;
    for (const auto& f : T.boundary_triangles())
        for (int k = 0; k < 3; ++k) dir_count[{f[k], f[(k + 1) % 3]}]++;
    for (const auto& [e, c] : dir_count) {
        if (c != 1 || dir_count.find({e.second, e.first}) == dir_count.end() ||
            dir_count.at({e.second, e.first}) != 1) {
            rep.fail("open-boundary", "boundary edge (" + std::to_string(e.first) + "," +
                                          std::to_string(e.second) +
                                          ") is not matched once in each direction");
            break;
        }
    }

    // Edge links: interior edges close up, boundary edges fan open.
    std::set<std::array<int, 2>> boundary_edge_set;
    for (const auto& f : T.boundary_triangles())
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            boundary_edge_set.insert({a, b});
        }
    for (int e = 0; e < static_cast<int>(T.edges().size()); ++e) {
        const bool on_boundary = boundary_edge_set.count(T.edges()[e]) > 0;
        const auto shape = detail::edge_link_shape(T, e);
        if (on_boundary && shape != detail::LinkShape::Path)
            rep.fail("bad-boundary-link", "boundary edge " + std::to_string(e) +
                                              " has a non-fan link");
        if (!on_boundary && shape != detail::LinkShape::Cycle)
            rep.fail("bad-interior-link", "interior edge " + std::to_string(e) +
                                              " has a non-cycle link");
    }

    const double vol_sum = T.tet_volume_sum();
    const double vol_div = T.solid_volume();
    const double scale = std::max({std::abs(vol_sum), std::abs(vol_div), 1e-300});
    if (std::abs(vol_sum - vol_div) > 1e-9 * scale)
        rep.fail("volume-mismatch", "tet volume sum " + std::to_string(vol_sum) +
                                        " differs from enclosed volume " +
                                        std::to_string(vol_div));
    return rep;
}

struct VertexCensus {
    int interior_count = 0;  // m
    int flat_count = 0;      // k
    std::vector<int> interior_vertices;
    std::vector<int> flat_vertices;
    std::vector<int> nonflat_vertices;
    std::vector<Vec3> flat_normals;  // outward unit normals, aligned with flat_vertices
};

struct EdgeCensus {
    std::vector<std::array<int, 2>> edges;  // all edges, lex order
    std::vector<int> interior_edges;        // indices into edges, lex order
    std::vector<int> boundary_edges;
    std::vector<double> boundary_lengths;  // aligned with boundary_edges
    std::vector<std::vector<int>> edge_tets;

    int n() const { return static_cast<int>(interior_edges.size()); }
};

struct Census {
    VertexCensus vertex;
    EdgeCensus edge;

    int m() const { return vertex.interior_count; }
    int k() const { return vertex.flat_count; }
    int n() const { return edge.n(); }
};

// Flatness of boundary vertices on a bare surface: a vertex is flat when
// its entire boundary star fits one plane within 1e-8 times the diameter.
inline constexpr double kFlatVertexRel = 1e-8;

namespace detail {

struct SurfaceFlatness {
    std::vector<int> flat;  // vertex ids
    std::map<int, Vec3> normal;
};

inline SurfaceFlatness surface_flat_vertices(const std::vector<Vec3>& verts,
                                             const std::vector<std::array<int, 3>>& tris,
                                             double diameter) {
    SurfaceFlatness out;
    std::map<int, std::vector<int>> star;
    for (int f = 0; f < static_cast<int>(tris.size()); ++f)
        for (int v : tris[f]) star[v].push_back(f);
    const double tol = kFlatVertexRel * std::max(diameter, 1e-300);
    for (const auto& [v, fs] : star) {
        // Anchor plane: the largest incident triangle.
        double best_area = -1.0;
        Vec3 n = Vec3::Zero();
        for (int f : fs) {
            const auto& t = tris[f];
            const Vec3 nn = triangle_normal(verts[t[0]], verts[t[1]], verts[t[2]]);
            if (0.5 * nn.norm() > best_area) {
                best_area = 0.5 * nn.norm();
                n = nn.normalized();
            }
        }
        bool flat = true;
        for (int f : fs) {
            for (int w : tris[f])
                if (std::abs(n.dot(verts[w] - verts[v])) > tol) { flat = false; break; }
            if (!flat) break;
        }
        if (flat) {
            out.flat.push_back(v);
            out.normal[v] = n;
        }
    }
    return out;
}

} // namespace detail

// Classifies all vertices and edges. Flatness is decided against the
// reference face planes when the triangulation carries them, and from
// boundary-star coplanarity otherwise; the tolerance is identical.
inline Census census(const Triangulation3& T) {
    Census out;
    const auto& verts = T.vertices();
    const auto& btris = T.boundary_triangles();

    std::set<int> boundary_vertices;
    for (const auto& f : btris)
        for (int v : f) boundary_vertices.insert(v);

    detail::SurfaceFlatness star_flat =
        detail::surface_flat_vertices(verts, btris, T.diameter());
    std::set<int> flat_set(star_flat.flat.begin(), star_flat.flat.end());

    if (!T.reference_faces().empty()) {
        // A flat vertex must also sit on one of the reference planes while
        // not being one of that face's corners.
        std::set<int> on_plane;
        const double tol = kFlatVertexRel * std::max(T.diameter(), 1e-300);
        for (const auto& poly : T.reference_faces()) {
            if (poly.size() < 3) continue;
            const Vec3 n =
                triangle_normal(verts[poly[0]], verts[poly[1]], verts[poly[2]]).normalized();
            std::set<int> corners(poly.begin(), poly.end());
            for (int v : boundary_vertices) {
                if (corners.count(v)) continue;
                if (std::abs(n.dot(verts[v] - verts[poly[0]])) < tol) on_plane.insert(v);
            }
        }
        std::set<int> refined;
        for (int v : flat_set)
            if (on_plane.count(v)) refined.insert(v);
        flat_set = refined;
    }

    for (int v = 0; v < T.num_vertices(); ++v) {
        if (!boundary_vertices.count(v)) {
            out.vertex.interior_vertices.push_back(v);
        } else if (flat_set.count(v)) {
            out.vertex.flat_vertices.push_back(v);
            out.vertex.flat_normals.push_back(star_flat.normal.at(v));
        } else {
            out.vertex.nonflat_vertices.push_back(v);
        }
    }
    out.vertex.interior_count = static_cast<int>(out.vertex.interior_vertices.size());
    out.vertex.flat_count = static_cast<int>(out.vertex.flat_vertices.size());

    std::set<std::array<int, 2>> boundary_edge_set;
    for (const auto& f : btris)
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            boundary_edge_set.insert({a, b});
        }
    out.edge.edges = T.edges();
    out.edge.edge_tets = T.edge_tets();
    for (int e = 0; e < static_cast<int>(out.edge.edges.size()); ++e) {
        if (boundary_edge_set.count(out.edge.edges[e])) {
            out.edge.boundary_edges.push_back(e);
            out.edge.boundary_lengths.push_back(T.edge_length(e));
        } else {
            out.edge.interior_edges.push_back(e);
        }
    }
    return out;
}

// True iff substituting l for the interior-edge lengths leaves every tet
// non-degenerate (realizable with positive volume above tolerance).
inline bool in_domain(const Triangulation3& T, const Census& c, const EdgeLengthVector& l) {
    if (static_cast<int>(l.size()) != c.n())
        throw IndexMismatch("in_domain: length vector does not match interior edge count");
    for (double x : l)
        if (!(x > 0.0)) return false;

    std::vector<int> interior_pos(T.edges().size(), -1);
    for (int i = 0; i < c.n(); ++i) interior_pos[c.edge.interior_edges[i]] = i;

    for (int t = 0; t < T.num_tets(); ++t) {
        TetLengths tl = T.tet_lengths(t);
        const auto& ge = T.tet_edge_indices(t);
        for (int s = 0; s < 6; ++s)
            if (interior_pos[ge[s]] >= 0) tl[s] = l[interior_pos[ge[s]]];
        if (tet_lengths_degenerate(tl)) return false;
    }
    return true;
}

// Realized interior-edge lengths of T, in census order.
inline EdgeLengthVector realized_lengths(const Triangulation3& T, const Census& c) {
    EdgeLengthVector l(c.n());
    for (int i = 0; i < c.n(); ++i) l[i] = T.edge_length(c.edge.interior_edges[i]);
    return l;
}

// Cone over a triangulated sphere from one of its vertices: one tet per
// triangle not containing the apex.
inline Triangulation3 cone_triangulation(const std::vector<Vec3>& verts,
                                         const std::vector<std::array<int, 3>>& tris,
                                         int apex,
                                         std::vector<std::vector<int>> reference_faces = {}) {
    if (apex < 0 || apex >= static_cast<int>(verts.size()))
        throw IndexMismatch("cone_triangulation: apex index out of range");
    double diam = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            diam = std::max(diam, (verts[i] - verts[j]).norm());
    std::vector<std::array<int, 4>> tets;
    for (const auto& t : tris) {
        if (t[0] == apex || t[1] == apex || t[2] == apex) continue;
        const double vol =
            std::abs(tet_signed_volume(verts[apex], verts[t[0]], verts[t[1]], verts[t[2]]));
        if (vol < kDegenerateVolumeRel * diam * diam * diam)
            throw DegenerateCone("cone_triangulation: triangle (" + std::to_string(t[0]) +
                                 "," + std::to_string(t[1]) + "," + std::to_string(t[2]) +
                                 ") is coplanar with the apex");
        tets.push_back({apex, t[0], t[1], t[2]});
    }
    return Triangulation3(verts, std::move(tets), std::move(reference_faces));
}

// Cone over a polyhedron given by polygonal faces: faces containing the
// apex are fanned from it (so every triangle touches the apex and is
// skipped by the cone), other faces are fanned from their first vertex.
inline Triangulation3 cone_triangulation_of_polyhedron(
    const std::vector<Vec3>& verts, const std::vector<std::vector<int>>& faces, int apex) {
    std::vector<std::array<int, 3>> tris;
    for (const auto& poly : faces) {
        if (poly.size() < 3)
            throw DegenerateInput("cone_triangulation_of_polyhedron: face with < 3 vertices");
        int pivot = 0;
        for (size_t i = 0; i < poly.size(); ++i)
            if (poly[i] == apex) pivot = static_cast<int>(i);
        const int nn = static_cast<int>(poly.size());
        for (int i = 1; i + 1 < nn; ++i)
            tris.push_back({poly[pivot], poly[(pivot + i) % nn], poly[(pivot + i + 1) % nn]});
    }
    return cone_triangulation(verts, tris, apex, faces);
}

// Alternating simplex count V - E + F - C; equals 1 for a ball.
inline int euler_characteristic(const Triangulation3& T) {
    std::set<std::array<int, 3>> tris;
    for (const auto& q : T.tets())
        for (int opp = 0; opp < 4; ++opp) {
            std::array<int, 3> f;
            int c = 0;
            for (int v = 0; v < 4; ++v)
                if (v != opp) f[c++] = q[v];
            std::sort(f.begin(), f.end());
            tris.insert(f);
        }
    return T.num_vertices() - static_cast<int>(T.edges().size()) +
           static_cast<int>(tris.size()) - T.num_tets();
}

} // namespace regge
