#pragma once
#include <set>
#include <vector>

#include "linalg.hpp"
#include "triangulation.hpp"

namespace regge {

struct Framework {
    std::vector<Vec3> points;
    std::vector<std::array<int, 2>> edges;  // sorted pairs, unique
};

inline Framework framework_from_surface(const std::vector<Vec3>& verts,
                                        const std::vector<std::array<int, 3>>& tris) {
    Framework f;
    f.points = verts;
    std::set<std::array<int, 2>> es;
    for (const auto& t : tris)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            es.insert({a, b});
        }
    f.edges.assign(es.begin(), es.end());
    return f;
}

// Full 1-skeleton of a tetrahedral complex.
inline Framework framework_from_triangulation(const Triangulation3& T) {
    return Framework{T.vertices(), T.edges()};
}

// One row per edge: block (p_i - p_j) in columns of i, the negative in
// columns of j. Kernel vectors are the infinitesimal flexes.
inline Eigen::MatrixXd rigidity_matrix(const Framework& f) {
    const int ne = static_cast<int>(f.edges.size());
    const int nv = static_cast<int>(f.points.size());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(ne, 3 * nv);
    for (int e = 0; e < ne; ++e) {
        const auto [i, j] = std::pair{f.edges[e][0], f.edges[e][1]};
        const Vec3 d = f.points[i] - f.points[j];
        for (int c = 0; c < 3; ++c) {
            R(e, 3 * i + c) = d(c);
            R(e, 3 * j + c) = -d(c);
        }
    }
    return R;
}

// The six infinitesimal rigid motions: translations and rotations about
// the centroid.
inline Eigen::MatrixXd trivial_motion_basis(const std::vector<Vec3>& pts) {
    const int nv = static_cast<int>(pts.size());
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : pts) centroid += p;
    if (nv > 0) centroid /= double(nv);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3 * nv, 6);
    for (int v = 0; v < nv; ++v) {
        for (int c = 0; c < 3; ++c) B(3 * v + c, c) = 1.0;
        const Vec3 r = pts[v] - centroid;
        for (int axis = 0; axis < 3; ++axis) {
            const Vec3 w = Vec3::Unit(axis).cross(r);
            for (int c = 0; c < 3; ++c) B(3 * v + c, 3 + axis) = w(c);
        }
    }
    return B;
}

struct FlexSpace {
    Eigen::MatrixXd basis;  // 3V x dim, orthonormal kernel of the rigidity matrix
    int trivial_dim = 0;
    int nontrivial_dim = 0;
    Eigen::MatrixXd nontrivial_basis;  // rigid motions projected out, orthonormal
    Eigen::VectorXd singular_values;
    double sv_threshold = 0.0;
    double gap_ratio = 0.0;  // smallest kept / largest dropped singular value
};

inline FlexSpace flex_space(const Framework& f, double sv_rel_tol = 1e-9) {
    const int nv = static_cast<int>(f.points.size());
    if (nv < 3) throw DegenerateConfiguration("flex_space: need at least 3 points");

    Eigen::MatrixXd centered(3, nv);
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : f.points) centroid += p;
    centroid /= double(nv);
    for (int v = 0; v < nv; ++v) centered.col(v) = f.points[v] - centroid;
    if (numeric_rank(centered, 1e-9) < 3)
        throw DegenerateConfiguration("flex_space: points are affinely dependent");

    const Eigen::MatrixXd R = rigidity_matrix(f);
    FlexSpace out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
    out.sv_threshold = sv_rel_tol * smax;
    int rank = 0;
    while (rank < out.singular_values.size() && out.singular_values(rank) > out.sv_threshold)
        ++rank;
    out.basis = svd.matrixV().rightCols(3 * nv - rank);
    if (rank == 0) {
        out.gap_ratio = std::numeric_limits<double>::infinity();
    } else if (rank == out.singular_values.size()) {
        out.gap_ratio = std::numeric_limits<double>::infinity();
    } else {
        const double dropped = out.singular_values(rank);
        out.gap_ratio = dropped > 0.0 ? out.singular_values(rank - 1) / dropped
                                      : std::numeric_limits<double>::infinity();
    }

    const Eigen::MatrixXd triv = trivial_motion_basis(f.points);
    out.trivial_dim = numeric_rank(triv, 1e-9);
    out.nontrivial_dim = static_cast<int>(out.basis.cols()) - out.trivial_dim;
    if (out.nontrivial_dim <= 0) {
        out.nontrivial_basis = Eigen::MatrixXd(3 * nv, 0);
    } else {
        // Exactly nontrivial_dim directions survive the projection; taking
        // the top singular directions avoids keeping projection noise.
        Eigen::JacobiSVD<Eigen::MatrixXd> psvd(project_out(out.basis, triv),
                                               Eigen::ComputeThinU);
        out.nontrivial_basis = psvd.matrixU().leftCols(out.nontrivial_dim);
    }
    return out;
}

inline bool is_infinitesimally_rigid(const std::vector<Vec3>& verts,
                                     const std::vector<std::array<int, 3>>& tris) {
    const Framework f = framework_from_surface(verts, tris);
    std::set<int> used;
    for (const auto& e : f.edges) {
        used.insert(e[0]);
        used.insert(e[1]);
    }
    if (used.size() != verts.size())
        throw DegenerateInput("is_infinitesimally_rigid: surface does not cover all vertices");
    return flex_space(f).nontrivial_dim == 0;
}

struct DehnReport {
    bool ok = false;
    int flex_dim = 0;
    int expected_dim = 0;
    int flat_count = 0;
    // Largest kernel component outside the span of rigid motions plus the
    // flat-vertex normal modes (kernel basis columns are unit vectors).
    double worst_support_residual = 0.0;
};

// For a triangulated convex sphere: the flex space must split into rigid
// motions plus one normal displacement per flat vertex.
inline DehnReport dehn_decomposition_check(const std::vector<Vec3>& verts,
                                           const std::vector<std::array<int, 3>>& tris) {
    DehnReport rep;
    double diam = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            diam = std::max(diam, (verts[i] - verts[j]).norm());
    const detail::SurfaceFlatness flat = detail::surface_flat_vertices(verts, tris, diam);
    rep.flat_count = static_cast<int>(flat.flat.size());
    rep.expected_dim = 6 + rep.flat_count;

    const FlexSpace fs = flex_space(framework_from_surface(verts, tris));
    rep.flex_dim = static_cast<int>(fs.basis.cols());

    const int nv = static_cast<int>(verts.size());
    Eigen::MatrixXd span(3 * nv, 6 + rep.flat_count);
    span.leftCols(6) = trivial_motion_basis(verts);
    int col = 6;
    for (int v : flat.flat) {
        span.col(col).setZero();
        span.col(col).segment<3>(3 * v) = flat.normal.at(v);
        ++col;
    }
    const Eigen::MatrixXd outside = project_out(fs.basis, span);
    for (int c = 0; c < outside.cols(); ++c)
        rep.worst_support_residual =
            std::max(rep.worst_support_residual, outside.col(c).norm());

    rep.ok = rep.flex_dim == rep.expected_dim && rep.worst_support_residual < 1e-7;
    return rep;
}

} // namespace regge
