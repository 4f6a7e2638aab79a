#pragma once
#include <vector>

#include "linalg.hpp"
#include "triangulation.hpp"

namespace regge {

// Cone angles around interior edges and dihedral angles at boundary
// edges, as functions of the interior-edge lengths (boundary lengths are
// pinned to their realized values).
struct AngleState {
    std::vector<double> omega;            // per interior edge, census order
    std::vector<double> kappa;            // 2 pi - omega
    std::vector<double> boundary_alphas;  // per boundary edge, census order
};

inline AngleState angle_state(const Triangulation3& T, const Census& c,
                              const EdgeLengthVector& l) {
    if (static_cast<int>(l.size()) != c.n())
        throw IndexMismatch("angle_state: length vector does not match interior edge count");

    std::vector<int> interior_pos(T.edges().size(), -1);
    for (int i = 0; i < c.n(); ++i) interior_pos[c.edge.interior_edges[i]] = i;
    std::vector<int> boundary_pos(T.edges().size(), -1);
    for (int j = 0; j < static_cast<int>(c.edge.boundary_edges.size()); ++j)
        boundary_pos[c.edge.boundary_edges[j]] = j;

    AngleState st;
    st.omega.assign(c.n(), 0.0);
    st.boundary_alphas.assign(c.edge.boundary_edges.size(), 0.0);

    for (int t = 0; t < T.num_tets(); ++t) {
        TetLengths tl = T.tet_lengths(t);
        const auto& ge = T.tet_edge_indices(t);
        for (int s = 0; s < 6; ++s)
            if (interior_pos[ge[s]] >= 0) tl[s] = l[interior_pos[ge[s]]];
        std::array<double, 6> dih;
        try {
            dih = dihedral_angles_from_lengths(tl);
        } catch (const DegenerateSimplex& e) {
            throw DomainViolation("angle_state: tet " + std::to_string(t) +
                                  " degenerates at the given lengths (" + e.what() + ")");
        }
        for (int s = 0; s < 6; ++s) {
            if (interior_pos[ge[s]] >= 0)
                st.omega[interior_pos[ge[s]]] += dih[s];
            else if (boundary_pos[ge[s]] >= 0)
                st.boundary_alphas[boundary_pos[ge[s]]] += dih[s];
        }
    }
    st.kappa.resize(st.omega.size());
    for (size_t i = 0; i < st.omega.size(); ++i) st.kappa[i] = 2.0 * kPi - st.omega[i];
    return st;
}

// S(l) = sum_i l_i kappa_i + sum_j l'_j (pi - alpha_j).
inline double hilbert_einstein(const Triangulation3& T, const Census& c,
                               const EdgeLengthVector& l) {
    const AngleState st = angle_state(T, c, l);
    double s = 0.0;
    for (int i = 0; i < c.n(); ++i) s += l[i] * st.kappa[i];
    for (size_t j = 0; j < c.edge.boundary_edges.size(); ++j)
        s += c.edge.boundary_lengths[j] * (kPi - st.boundary_alphas[j]);
    return s;
}

// Worst relative disagreement between the finite-difference gradient of S
// and kappa (they coincide by the first variation formula).
inline double gradient_check(const Triangulation3& T, const Census& c,
                             const EdgeLengthVector& l, double fd_step_rel = 1e-5) {
    const AngleState st = angle_state(T, c, l);
    double worst = 0.0;
    for (int i = 0; i < c.n(); ++i) {
        const double h = fd_step_rel * l[i];
        EdgeLengthVector lp = l, lm = l;
        lp[i] += h;
        lm[i] -= h;
        const double g = (hilbert_einstein(T, c, lp) - hilbert_einstein(T, c, lm)) / (2 * h);
        worst = std::max(worst, std::abs(g - st.kappa[i]) / std::max(1.0, std::abs(st.kappa[i])));
    }
    return worst;
}

struct HessianOptions {
    double fd_step_rel = 1e-5;
    double zero_threshold_rel = 1e-7;
};

struct HessianReport {
    int n = 0;
    Eigen::MatrixXd M;  // symmetrized
    double max_asymmetry = 0.0;
    double fd_disagreement = 0.0;  // worst |D(h) - D(h/2)| entry before extrapolation
    Eigen::VectorXd eigenvalues;   // ascending
    Signature signature;
    Eigen::MatrixXd kernel_basis;  // columns
    double zero_threshold = 0.0;
    double gap_ratio = 0.0;
    HessianOptions options;
};

// M[i][j] = d omega_i / d l_j at the realized lengths, by central
// differences with one Richardson extrapolation level. The step shrinks
// automatically if a stencil point leaves the domain.
inline HessianReport hessian(const Triangulation3& T, const Census& c,
                             const HessianOptions& opt = {}) {
    const int n = c.n();
    HessianReport rep;
    rep.n = n;
    rep.options = opt;
    rep.M.resize(n, n);

    const EdgeLengthVector l0 = realized_lengths(T, c);
    Eigen::MatrixXd raw(n, n);
    auto omega_at = [&](const EdgeLengthVector& l) {
        return angle_state(T, c, l).omega;
    };
    for (int j = 0; j < n; ++j) {
        double h = opt.fd_step_rel * l0[j];
        Eigen::VectorXd dh, dh2;
        for (int attempt = 0;; ++attempt) {
            try {
                auto column = [&](double step) {
                    EdgeLengthVector lp = l0, lm = l0;
                    lp[j] += step;
                    lm[j] -= step;
                    const auto op = omega_at(lp);
                    const auto om = omega_at(lm);
                    Eigen::VectorXd d(n);
                    for (int i = 0; i < n; ++i) d(i) = (op[i] - om[i]) / (2 * step);
                    return d;
                };
                dh = column(h);
                dh2 = column(h / 2);
                break;
            } catch (const DomainViolation&) {
                if (attempt >= 40) throw;
                h /= 2;
            }
        }
        raw.col(j) = (4.0 * dh2 - dh) / 3.0;
        rep.fd_disagreement =
            std::max(rep.fd_disagreement, (dh - dh2).cwiseAbs().maxCoeff());
    }
    if (n == 0) rep.fd_disagreement = 0.0;

    rep.max_asymmetry = n > 0 ? (raw - raw.transpose()).cwiseAbs().maxCoeff() : 0.0;
    rep.M = 0.5 * (raw + raw.transpose());

    const SymmetricSpectrum sp = symmetric_spectrum(rep.M, opt.zero_threshold_rel);
    rep.eigenvalues = sp.eigenvalues;
    rep.signature = sp.signature;
    rep.zero_threshold = sp.zero_threshold;
    rep.gap_ratio = sp.gap_ratio;
    rep.kernel_basis.resize(n, sp.signature.zero);
    int kcol = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(sp.eigenvalues(i)) < sp.zero_threshold)
            rep.kernel_basis.col(kcol++) = sp.eigenvectors.col(i);
    return rep;
}

inline HessianReport hessian(const Triangulation3& T, const HessianOptions& opt = {}) {
    return hessian(T, census(T), opt);
}

// One vector per vertex of T.
using VertexDisplacement = std::vector<Vec3>;

inline int kernel_dimension_predicted(const Census& c) { return 3 * c.m() + c.k(); }

// First-order length change of each interior edge under the vertex
// displacement Q. Q must vanish on non-flat boundary vertices and be
// orthogonal to the ambient face at flat vertices; those conditions make
// the result a kernel vector of the Hessian.
inline Eigen::VectorXd kernel_vector_from_displacement(const Triangulation3& T,
                                                       const Census& c,
                                                       const VertexDisplacement& Q) {
    if (static_cast<int>(Q.size()) != T.num_vertices())
        throw IndexMismatch("kernel_vector_from_displacement: one vector per vertex required");

    double qmax = 0.0;
    for (const auto& q : Q) qmax = std::max(qmax, q.norm());
    const double tol = 1e-9 * std::max(qmax, 1e-300);

    std::set<int> interior(c.vertex.interior_vertices.begin(),
                           c.vertex.interior_vertices.end());
    std::map<int, Vec3> flat_normal;
    for (size_t i = 0; i < c.vertex.flat_vertices.size(); ++i)
        flat_normal[c.vertex.flat_vertices[i]] = c.vertex.flat_normals[i];

    for (int v = 0; v < T.num_vertices(); ++v) {
        if (interior.count(v)) continue;
        auto it = flat_normal.find(v);
        if (it == flat_normal.end()) {
            if (Q[v].norm() > tol)
                throw InadmissibleDisplacement(
                    "displacement nonzero at non-flat boundary vertex " + std::to_string(v));
        } else {
            const Vec3 tangential = Q[v] - Q[v].dot(it->second) * it->second;
            if (tangential.norm() > tol)
                throw InadmissibleDisplacement(
                    "displacement not orthogonal to the face at flat vertex " +
                    std::to_string(v));
        }
    }

    Eigen::VectorXd ell(c.n());
    for (int i = 0; i < c.n(); ++i) {
        const auto& e = c.edge.edges[c.edge.interior_edges[i]];
        const Vec3 d = T.vertices()[e[0]] - T.vertices()[e[1]];
        ell(i) = d.dot(Q[e[0]] - Q[e[1]]) / d.norm();
    }
    return ell;
}

// Canonical admissible displacements: the three coordinate directions at
// each interior vertex, the face normal at each flat vertex. Their kernel
// vectors span ker M_T.
inline std::vector<VertexDisplacement> admissible_displacement_basis(
    const Triangulation3& T, const Census& c) {
    std::vector<VertexDisplacement> basis;
    for (int v : c.vertex.interior_vertices)
        for (int axis = 0; axis < 3; ++axis) {
            VertexDisplacement Q(T.num_vertices(), Vec3::Zero());
            Q[v] = Vec3::Unit(axis);
            basis.push_back(std::move(Q));
        }
    for (size_t i = 0; i < c.vertex.flat_vertices.size(); ++i) {
        VertexDisplacement Q(T.num_vertices(), Vec3::Zero());
        Q[c.vertex.flat_vertices[i]] = c.vertex.flat_normals[i];
        basis.push_back(std::move(Q));
    }
    return basis;
}

// |sum over all edges of l_e dalpha_e| for a first-order deformation of
// the vertices. Dihedral angle rates are exact directional derivatives;
// interior edges contribute the (identically zero) rate of omega.
inline double schlafli_residual(const Triangulation3& T, const std::vector<Vec3>& velocity) {
    if (static_cast<int>(velocity.size()) != T.num_vertices())
        throw IndexMismatch("schlafli_residual: one velocity per vertex required");
    const auto& verts = T.vertices();
    std::vector<double> dangle(T.edges().size(), 0.0);
    for (int t = 0; t < T.num_tets(); ++t) {
        const auto& q = T.tets()[t];
        const auto& ge = T.tet_edge_indices(t);
        for (int s = 0; s < 6; ++s) {
            const int a = q[kTetEdges[s][0]], b = q[kTetEdges[s][1]];
            int rest[2], r = 0;
            for (int v : q)
                if (v != a && v != b) rest[r++] = v;
            const auto [ang, rate] =
                hinge_angle_and_rate(verts[a], verts[b], verts[rest[0]], verts[rest[1]],
                                     velocity[a], velocity[b], velocity[rest[0]],
                                     velocity[rest[1]]);
            dangle[ge[s]] += (ang < 0 ? -rate : rate);
        }
    }
    double total = 0.0;
    for (size_t e = 0; e < dangle.size(); ++e) total += T.edge_length(e) * dangle[e];
    return std::abs(total);
}

// Same identity on a closed triangulated surface (interior dihedral
// angles along surface edges, reflex edges included).
inline double surface_schlafli_residual(const std::vector<Vec3>& verts,
                                        const std::vector<std::array<int, 3>>& tris,
                                        const std::vector<Vec3>& velocity) {
    if (velocity.size() != verts.size())
        throw IndexMismatch("surface_schlafli_residual: one velocity per vertex required");
    std::map<std::pair<int, int>, std::pair<int, int>> wing;  // directed edge -> (third, face)
    for (int f = 0; f < static_cast<int>(tris.size()); ++f)
        for (int k = 0; k < 3; ++k) {
            const int a = tris[f][k], b = tris[f][(k + 1) % 3], cth = tris[f][(k + 2) % 3];
            wing[{a, b}] = {cth, f};
        }
    double total = 0.0;
    for (const auto& [e, wc] : wing) {
        const auto [a, b] = e;
        if (a > b) continue;  // visit each undirected edge once
        auto rev = wing.find({b, a});
        if (rev == wing.end()) continue;
        const int cth = wc.first, d = rev->second.first;
        // With outward-wound faces the interior dihedral is pi plus the fold
        // angle, which is smooth through flat hinges and whose derivative is
        // the negated hinge rate on both the convex and reflex branches.
        const double rate = hinge_angle_and_rate(
            verts[a], verts[b], verts[cth], verts[d], velocity[a], velocity[b],
            velocity[cth], velocity[d]).second;
        total += (verts[a] - verts[b]).norm() * -rate;
    }
    return std::abs(total);
}

// Single-tetrahedron overload.
inline double schlafli_residual(const std::array<Vec3, 4>& p,
                                const std::array<Vec3, 4>& velocity) {
    double total = 0.0;
    for (int s = 0; s < 6; ++s) {
        const int i = kTetEdges[s][0], j = kTetEdges[s][1];
        int rest[2], r = 0;
        for (int v = 0; v < 4; ++v)
            if (v != i && v != j) rest[r++] = v;
        const auto [ang, rate] =
            hinge_angle_and_rate(p[i], p[j], p[rest[0]], p[rest[1]], velocity[i],
                                 velocity[j], velocity[rest[0]], velocity[rest[1]]);
        total += (p[i] - p[j]).norm() * (ang < 0 ? -rate : rate);
    }
    return std::abs(total);
}

} // namespace regge
