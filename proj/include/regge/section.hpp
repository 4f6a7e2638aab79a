#pragma once
#include <array>
#include <map>
#include <vector>

#include "geometry.hpp"

namespace regge {

// Cross-section of a solid with the horizontal plane {z = t}. When the
// requested plane passes through a vertex, t is nudged upward by
// 1e-9 times the bounding-box height and the nudge is reported.
struct PlaneSection {
    double t_requested = 0.0;
    double t_effective = 0.0;
    bool nudged = false;
    std::vector<std::vector<Vec3>> loops;
    std::vector<Vec3> polygon;  // largest loop
    double area = 0.0;

    bool empty() const { return loops.empty(); }
};

namespace detail {

inline double loop_area_xy(const std::vector<Vec3>& loop) {
    double a = 0.0;
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
        const Vec3& p = loop[i];
        const Vec3& q = loop[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(a) * 0.5;
}

} // namespace detail

// Section of a closed triangulated surface. Returns an empty section
// (area 0, no polygon) when the plane misses the solid.
inline PlaneSection plane_section(const std::vector<Vec3>& verts,
                                  const std::vector<std::array<int, 3>>& tris,
                                  double t) {
    PlaneSection out;
    out.t_requested = t;
    if (verts.empty()) return out;

    double zmin = verts[0].z(), zmax = verts[0].z();
    for (const auto& v : verts) {
        zmin = std::min(zmin, v.z());
        zmax = std::max(zmax, v.z());
    }
    const double height = zmax - zmin;
    const double eps = 1e-9 * std::max(height, 1e-300);
    double te = t;
    for (int tries = 0; tries < 16; ++tries) {
        bool hit = false;
        for (const auto& v : verts)
            if (std::abs(v.z() - te) < eps) { hit = true; break; }
        if (!hit) break;
        te += eps;
        out.nudged = true;
    }
    out.t_effective = te;
    if (te <= zmin || te >= zmax) return out;

    // Each triangle crossing the plane contributes a segment whose
    // endpoints lie on two of its edges. Chain segments through shared
    // edges into closed loops.
    using EdgeKey = std::pair<int, int>;
    auto edge_key = [](int a, int b) {
        return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
    };
    struct Segment {
        EdgeKey e0, e1;
        bool used = false;
    };
    std::vector<Segment> segs;
    std::map<EdgeKey, Vec3> cut_point;
    std::map<EdgeKey, std::vector<int>> segs_on_edge;
    for (const auto& tri : tris) {
        int lone = -1;
        bool lone_above = false;
        const bool above0 = verts[tri[0]].z() > te;
        const bool above1 = verts[tri[1]].z() > te;
        const bool above2 = verts[tri[2]].z() > te;
        const int n_above = int(above0) + int(above1) + int(above2);
        if (n_above == 0 || n_above == 3) continue;
        lone_above = (n_above == 1);
        for (int k = 0; k < 3; ++k) {
            const bool ab = verts[tri[k]].z() > te;
            if (ab == lone_above) { lone = k; break; }
        }
        const int a = tri[lone], b = tri[(lone + 1) % 3], c = tri[(lone + 2) % 3];
        Segment s;
        s.e0 = edge_key(a, b);
        s.e1 = edge_key(a, c);
        for (const EdgeKey& e : {s.e0, s.e1}) {
            if (cut_point.count(e)) continue;
            const Vec3& p = verts[e.first];
            const Vec3& q = verts[e.second];
            const double lam = (te - p.z()) / (q.z() - p.z());
            cut_point[e] = p + lam * (q - p);
        }
        const int idx = static_cast<int>(segs.size());
        segs.push_back(s);
        segs_on_edge[s.e0].push_back(idx);
        segs_on_edge[s.e1].push_back(idx);
    }

    for (int start = 0; start < static_cast<int>(segs.size()); ++start) {
        if (segs[start].used) continue;
        std::vector<Vec3> loop;
        int cur = start;
        EdgeKey at = segs[start].e0;
        while (true) {
            segs[cur].used = true;
            loop.push_back(cut_point[at]);
            const EdgeKey next = (at == segs[cur].e0) ? segs[cur].e1 : segs[cur].e0;
            int nxt = -1;
            for (int cand : segs_on_edge[next])
                if (!segs[cand].used) { nxt = cand; break; }
            at = next;
            if (nxt < 0) break;
            cur = nxt;
        }
        if (loop.size() >= 3) out.loops.push_back(std::move(loop));
    }

    double best = -1.0;
    for (const auto& loop : out.loops) {
        const double a = detail::loop_area_xy(loop);
        out.area += a;
        if (a > best) {
            best = a;
            out.polygon = loop;
        }
    }
    return out;
}

// Area of tet ∩ {z = t}; piecewise quadratic in t. Vertices lying exactly
// on the plane count as polygon corners, so at a vertex height this
// returns the one-sided limit of the profile.
inline double tet_section_area_profile(const std::array<Vec3, 4>& p, double t) {
    double scale = std::abs(t);
    for (const auto& v : p) scale = std::max(scale, v.norm());
    const double eps_on = 1e-12 * std::max(scale, 1e-300);

    std::vector<Vec3> pts;
    for (const auto& v : p)
        if (std::abs(v.z() - t) <= eps_on) pts.push_back(v);
    for (int s = 0; s < 6; ++s) {
        const Vec3& a = p[kTetEdges[s][0]];
        const Vec3& b = p[kTetEdges[s][1]];
        const double da = a.z() - t, db = b.z() - t;
        if (std::abs(da) <= eps_on || std::abs(db) <= eps_on) continue;
        if (da * db < 0.0) {
            const double lam = da / (da - db);
            pts.push_back(a + lam * (b - a));
        }
    }
    if (pts.size() < 3) return 0.0;

    Vec3 centroid = Vec3::Zero();
    for (const auto& q : pts) centroid += q;
    centroid /= double(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Vec3& u, const Vec3& v) {
        return std::atan2(u.y() - centroid.y(), u.x() - centroid.x()) <
               std::atan2(v.y() - centroid.y(), v.x() - centroid.x());
    });
    return detail::loop_area_xy(pts);
}

} // namespace regge
