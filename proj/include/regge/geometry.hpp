#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace regge {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Tetrahedron edges in lexicographic order of local vertex pairs.
// This fixed order is used everywhere a tet's six lengths appear as a vector.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {{
    {{0, 1}}, {{0, 2}}, {{0, 3}}, {{1, 2}}, {{1, 3}}, {{2, 3}},
}};

inline int tet_edge_slot(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int s = 0; s < 6; ++s)
        if (kTetEdges[s][0] == a && kTetEdges[s][1] == b) return s;
    throw IndexMismatch("tet_edge_slot: vertices must be distinct and in 0..3");
}

// Six edge lengths of a tetrahedron, indexed per kTetEdges.
struct TetLengths {
    std::array<double, 6> l{};

    double operator[](int s) const { return l[s]; }
    double& operator[](int s) { return l[s]; }
    double between(int a, int b) const { return l[tet_edge_slot(a, b)]; }
    double max_length() const { return *std::max_element(l.begin(), l.end()); }
};

inline TetLengths tet_lengths_from_points(const Vec3& p0, const Vec3& p1,
                                          const Vec3& p2, const Vec3& p3) {
    const Vec3* p[4] = {&p0, &p1, &p2, &p3};
    TetLengths t;
    for (int s = 0; s < 6; ++s)
        t.l[s] = (*p[kTetEdges[s][0]] - *p[kTetEdges[s][1]]).norm();
    return t;
}

// Cayley-Menger determinant of the six lengths; equals 288 V^2 for a
// realizable tetrahedron of volume V, and is <= 0 otherwise.
inline double cayley_menger_volume(const TetLengths& t) {
    Eigen::Matrix<double, 5, 5> B;
    B.setZero();
    for (int i = 0; i < 4; ++i) {
        B(0, i + 1) = 1.0;
        B(i + 1, 0) = 1.0;
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const double q = t.between(a, b) * t.between(a, b);
            B(a + 1, b + 1) = q;
            B(b + 1, a + 1) = q;
        }
    return B.determinant();
}

inline double tet_volume_from_lengths(const TetLengths& t) {
    const double cm = cayley_menger_volume(t);
    return cm > 0.0 ? std::sqrt(cm / 288.0) : 0.0;
}

inline double tet_signed_volume(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                const Vec3& p3) {
    return (p1 - p0).cross(p2 - p0).dot(p3 - p0) / 6.0;
}

// A tetrahedron is treated as degenerate when its volume falls below
// 1e-12 times the cube of its longest edge.
inline constexpr double kDegenerateVolumeRel = 1e-12;

inline bool tet_lengths_degenerate(const TetLengths& t) {
    const double lmax = t.max_length();
    return tet_volume_from_lengths(t) < kDegenerateVolumeRel * lmax * lmax * lmax;
}

inline double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

// Angle at the vertex joining sides a and b, opposite side c.
inline double triangle_angle(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw DegenerateSimplex("triangle_angle: nonpositive side length");
    if (c >= a + b || a >= b + c || b >= c + a)
        throw DegenerateSimplex("triangle_angle: triangle inequality violated");
    return std::acos(clamp_unit((a * a + b * b - c * c) / (2.0 * a * b)));
}

// Interior dihedral angle along the edge joining local vertices i and j,
// computed purely from the six lengths via the spherical law of cosines
// applied to the vertex figure at i.
inline double dihedral_angle_from_lengths(const TetLengths& t, int i, int j) {
    if (tet_lengths_degenerate(t))
        throw DegenerateSimplex("dihedral_angle_from_lengths: degenerate tetrahedron");
    int rest[2];
    int r = 0;
    for (int v = 0; v < 4; ++v)
        if (v != i && v != j) rest[r++] = v;
    const int k = rest[0], m = rest[1];
    const double a = triangle_angle(t.between(i, j), t.between(i, k), t.between(j, k));
    const double b = triangle_angle(t.between(i, j), t.between(i, m), t.between(j, m));
    const double c = triangle_angle(t.between(i, k), t.between(i, m), t.between(k, m));
    const double sa = std::sin(a), sb = std::sin(b);
    if (sa == 0.0 || sb == 0.0)
        throw DegenerateSimplex("dihedral_angle_from_lengths: flat vertex figure");
    return std::acos(clamp_unit((std::cos(c) - std::cos(a) * std::cos(b)) / (sa * sb)));
}

// All six dihedral angles, indexed per kTetEdges.
inline std::array<double, 6> dihedral_angles_from_lengths(const TetLengths& t) {
    std::array<double, 6> d;
    for (int s = 0; s < 6; ++s)
        d[s] = dihedral_angle_from_lengths(t, kTetEdges[s][0], kTetEdges[s][1]);
    return d;
}

// Embeds a tetrahedron with the given lengths: p0 at the origin, p1 on the
// +x axis, p2 in the upper xy half plane, p3 with positive z.
inline std::array<Vec3, 4> embed_tet(const TetLengths& t) {
    if (tet_lengths_degenerate(t))
        throw DegenerateSimplex("embed_tet: degenerate tetrahedron");
    const double l01 = t.between(0, 1), l02 = t.between(0, 2), l03 = t.between(0, 3);
    const double l12 = t.between(1, 2), l13 = t.between(1, 3);
    std::array<Vec3, 4> p;
    p[0] = Vec3::Zero();
    p[1] = Vec3(l01, 0, 0);
    const double x2 = (l01 * l01 + l02 * l02 - l12 * l12) / (2.0 * l01);
    const double y2sq = l02 * l02 - x2 * x2;
    if (y2sq <= 0.0) throw DegenerateSimplex("embed_tet: base triangle degenerate");
    p[2] = Vec3(x2, std::sqrt(y2sq), 0);
    const double x3 = (l01 * l01 + l03 * l03 - l13 * l13) / (2.0 * l01);
    const double l23 = t.between(2, 3);
    const double y3 = (l03 * l03 - l23 * l23 + p[2].squaredNorm() - 2.0 * x3 * p[2].x()) /
                      (2.0 * p[2].y());
    const double z3sq = l03 * l03 - x3 * x3 - y3 * y3;
    if (z3sq <= 0.0) throw DegenerateSimplex("embed_tet: apex has no real height");
    p[3] = Vec3(x3, y3, std::sqrt(z3sq));
    return p;
}

// Dihedral angle along the hinge x0-x1 of the wedge spanned by x2 and x3,
// measured inside the wedge; range (-pi, pi] via atan2, sign given by the
// orientation of (w1, w2) around the hinge.
inline double hinge_angle(const Vec3& x0, const Vec3& x1, const Vec3& x2,
                          const Vec3& x3) {
    const Vec3 e = x1 - x0;
    const double le = e.norm();
    if (le == 0.0) throw DegenerateSimplex("hinge_angle: zero length hinge");
    const Vec3 eh = e / le;
    const Vec3 w1 = (x2 - x0) - (x2 - x0).dot(eh) * eh;
    const Vec3 w2 = (x3 - x0) - (x3 - x0).dot(eh) * eh;
    return std::atan2(w1.cross(w2).dot(eh), w1.dot(w2));
}

// Exact directional derivative of hinge_angle under vertex velocities
// v0..v3. Returns {angle, rate}. Unlike a finite difference this has no
// step-size noise, which matters for residuals that must vanish to
// rounding precision.
inline std::pair<double, double> hinge_angle_and_rate(
    const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3,
    const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3) {
    const Vec3 e = x1 - x0;
    const double le = e.norm();
    if (le == 0.0) throw DegenerateSimplex("hinge_angle_and_rate: zero length hinge");
    const Vec3 eh = e / le;

    const Vec3 u2 = x2 - x0, u3 = x3 - x0;
    const Vec3 w1 = u2 - u2.dot(eh) * eh;
    const Vec3 w2 = u3 - u3.dot(eh) * eh;
    const double s = w1.cross(w2).dot(eh);
    const double c = w1.dot(w2);

    const Vec3 de = v1 - v0;
    const Vec3 deh = (de - de.dot(eh) * eh) / le;
    auto dw = [&](const Vec3& u, const Vec3& du) {
        return du - du.dot(eh) * eh - u.dot(eh) * deh - u.dot(deh) * eh;
    };
    const Vec3 dw1 = dw(u2, v2 - v0);
    const Vec3 dw2 = dw(u3, v3 - v0);
    const double ds = (dw1.cross(w2) + w1.cross(dw2)).dot(eh) + w1.cross(w2).dot(deh);
    const double dc = dw1.dot(w2) + w1.dot(dw2);
    const double denom = c * c + s * s;
    if (denom == 0.0)
        throw DegenerateSimplex("hinge_angle_and_rate: undefined angle");
    return {std::atan2(s, c), (c * ds - s * dc) / denom};
}

// Dihedral angle of the tet (p0..p3) along the edge joining local
// vertices i and j, measured from coordinates.
inline double tet_dihedral_from_coords(const std::array<Vec3, 4>& p, int i, int j) {
    int rest[2];
    int r = 0;
    for (int v = 0; v < 4; ++v)
        if (v != i && v != j) rest[r++] = v;
    return std::abs(hinge_angle(p[i], p[j], p[rest[0]], p[rest[1]]));
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

inline Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a);
}

// Interior dihedral angle of a closed surface along edge (a, b), where
// (a, b, c) and (b, a, d) are the two incident faces with outward
// orientation. Reflex edges give angles in (pi, 2 pi).
inline double surface_interior_dihedral(const Vec3& pa, const Vec3& pb,
                                        const Vec3& pc, const Vec3& pd) {
    const Vec3 n1 = triangle_normal(pa, pb, pc);
    const double base = std::abs(hinge_angle(pa, pb, pc, pd));
    const bool reflex = (pd - pa).dot(n1) > 0.0;
    return reflex ? 2.0 * kPi - base : base;
}

} // namespace regge
