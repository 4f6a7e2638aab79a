#pragma once
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "hessian.hpp"
#include "io.hpp"
#include "moves.hpp"
#include "rigidity.hpp"
#include "triangulation.hpp"

namespace regge {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct AnalysisOptions {
    HessianOptions hessian{};
    double min_gap_ratio = 1e3;
    bool boundary_only = false;
    bool timestamps = false;
};

struct RigidityVerdict {
    int vertex_count = 0;
    int edge_count = 0;
    int trivial_dim = 0;
    int nontrivial_dim = 0;
    bool rigid = false;
    double gap_ratio = 0.0;
};

struct ConsistencyFlags {
    std::optional<bool> signature_theorem;       // signature == (m, 3m+k, n-4m-k)
    std::optional<bool> kernel_dimension;        // zero eigenvalue count == 3m+k
    std::optional<bool> spectral_gap;            // gap ratio >= min_gap_ratio
    std::optional<bool> nondegenerate_iff_rigid; // checked when m = 0 and k = 0

    bool theorem_ok() const {
        return signature_theorem.value_or(true) && kernel_dimension.value_or(true) &&
               nondegenerate_iff_rigid.value_or(true);
    }
    bool numeric_ok() const { return spectral_gap.value_or(true); }
};

struct AnalysisReport {
    std::string name;
    std::string input_id;
    AnalysisOptions options;
    ValidationReport validation;
    std::optional<Census> census;
    std::optional<HessianReport> hessian;
    std::optional<RigidityVerdict> rigidity;
    ConsistencyFlags flags;
    std::string generated_at;  // empty unless timestamps requested

    // 0 consistent, 1 theorem inconsistency, 4 numeric gap failure
    int exit_code() const {
        if (!flags.theorem_ok()) return 1;
        if (!flags.numeric_ok()) return 4;
        return 0;
    }
};

inline RigidityVerdict rigidity_verdict(const std::vector<Vec3>& verts,
                                        const std::vector<std::array<int, 3>>& tris) {
    const Framework f = framework_from_surface(verts, tris);
    const FlexSpace fs = flex_space(f);
    RigidityVerdict v;
    v.vertex_count = static_cast<int>(verts.size());
    v.edge_count = static_cast<int>(f.edges.size());
    v.trivial_dim = fs.trivial_dim;
    v.nontrivial_dim = fs.nontrivial_dim;
    v.rigid = fs.nontrivial_dim == 0;
    v.gap_ratio = fs.gap_ratio;
    return v;
}

inline std::string timestamp_now() {
    char buf[32];
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline AnalysisReport analyze_triangulation(const Triangulation3& T, const std::string& name,
                                            const AnalysisOptions& opt = {}) {
    AnalysisReport rep;
    rep.name = name;
    rep.options = opt;
    rep.input_id = fnv1a_hex(triangulation_to_json(T).dump());
    if (opt.timestamps) rep.generated_at = timestamp_now();
    rep.validation = validate(T);
    if (!rep.validation.valid) return rep;

    const Census c = census(T);
    rep.census = c;
    rep.rigidity = rigidity_verdict(T.vertices(), T.boundary_triangles());

    if (!opt.boundary_only) {
        rep.hessian = hessian(T, c, opt.hessian);
        const Signature expect{c.m(), 3 * c.m() + c.k(), c.n() - 4 * c.m() - c.k()};
        rep.flags.signature_theorem = rep.hessian->signature == expect;
        rep.flags.kernel_dimension = rep.hessian->signature.zero == 3 * c.m() + c.k();
        rep.flags.spectral_gap =
            rep.hessian->gap_ratio >= opt.min_gap_ratio &&
            rep.rigidity->gap_ratio >= opt.min_gap_ratio;
        if (c.m() == 0 && c.k() == 0) {
            const bool nondegenerate = rep.hessian->signature.zero == 0;
            rep.flags.nondegenerate_iff_rigid = nondegenerate == rep.rigidity->rigid;
        }
    }
    return rep;
}

inline AnalysisReport analyze_surface(const std::vector<Vec3>& verts,
                                      const std::vector<std::array<int, 3>>& tris,
                                      const std::string& name,
                                      const AnalysisOptions& opt = {}) {
    AnalysisReport rep;
    rep.name = name;
    rep.options = opt;
    json id;
    id["vertices"] = json::array();
    for (const auto& v : verts) id["vertices"].push_back({v.x(), v.y(), v.z()});
    id["tris"] = json::array();
    for (const auto& f : tris) id["tris"].push_back({f[0], f[1], f[2]});
    rep.input_id = fnv1a_hex(id.dump());
    if (opt.timestamps) rep.generated_at = timestamp_now();
    rep.validation.valid = true;
    rep.rigidity = rigidity_verdict(verts, tris);
    return rep;
}

// ---- JSON serialization ----

inline json to_json(const Signature& s) {
    return {{"negative", s.negative}, {"zero", s.zero}, {"positive", s.positive}};
}

inline json to_json(const Census& c) {
    json j;
    j["m"] = c.m();
    j["k"] = c.k();
    j["n"] = c.n();
    j["interior_vertices"] = c.vertex.interior_vertices;
    j["flat_vertices"] = c.vertex.flat_vertices;
    j["interior_edges"] = json::array();
    for (int e : c.edge.interior_edges)
        j["interior_edges"].push_back({c.edge.edges[e][0], c.edge.edges[e][1]});
    j["boundary_edge_count"] = static_cast<int>(c.edge.boundary_edges.size());
    return j;
}

inline json to_json(const HessianReport& h) {
    json j;
    j["n"] = h.n;
    json rows = json::array();
    for (int i = 0; i < h.n; ++i)
        for (int k = 0; k < h.n; ++k) rows.push_back(h.M(i, k));
    j["matrix_row_major"] = rows;
    j["eigenvalues"] = std::vector<double>(h.eigenvalues.data(),
                                           h.eigenvalues.data() + h.eigenvalues.size());
    j["signature"] = to_json(h.signature);
    j["zero_threshold"] = h.zero_threshold;
    j["gap_ratio"] = h.gap_ratio;
    j["max_asymmetry"] = h.max_asymmetry;
    j["fd_disagreement"] = h.fd_disagreement;
    return j;
}

inline json to_json(const RigidityVerdict& r) {
    return {{"vertices", r.vertex_count},       {"edges", r.edge_count},
            {"trivial_dim", r.trivial_dim},     {"nontrivial_dim", r.nontrivial_dim},
            {"rigid", r.rigid},                 {"gap_ratio", r.gap_ratio}};
}

inline json to_json(const ValidationReport& v) {
    json j;
    j["valid"] = v.valid;
    j["issues"] = json::array();
    for (const auto& issue : v.issues)
        j["issues"].push_back({{"code", issue.code}, {"message", issue.message}});
    return j;
}

inline json to_json(const AnalysisReport& rep) {
    json j;
    j["tool"] = {{"name", "regge"}, {"version", kToolVersion}};
    j["name"] = rep.name;
    j["input_id"] = rep.input_id;
    j["options"] = {{"fd_step_rel", rep.options.hessian.fd_step_rel},
                    {"zero_threshold_rel", rep.options.hessian.zero_threshold_rel},
                    {"min_gap_ratio", rep.options.min_gap_ratio},
                    {"boundary_only", rep.options.boundary_only}};
    j["validation"] = to_json(rep.validation);
    if (rep.census) j["census"] = to_json(*rep.census);
    if (rep.hessian) j["hessian"] = to_json(*rep.hessian);
    if (rep.rigidity) j["rigidity"] = to_json(*rep.rigidity);
    json flags = json::object();
    auto put = [&](const char* key, const std::optional<bool>& v) {
        if (v) flags[key] = *v;
    };
    put("signature_theorem", rep.flags.signature_theorem);
    put("kernel_dimension", rep.flags.kernel_dimension);
    put("spectral_gap", rep.flags.spectral_gap);
    put("nondegenerate_iff_rigid", rep.flags.nondegenerate_iff_rigid);
    j["consistency"] = flags;
    j["exit_code"] = rep.exit_code();
    if (!rep.generated_at.empty()) j["generated_at"] = rep.generated_at;
    return j;
}

inline json to_json(const MoveDelta& d) {
    json j;
    j["union_edges"] = json::array();
    for (const auto& e : d.union_edges) j["union_edges"].push_back({e[0], e[1]});
    j["rank"] = d.rank;
    j["definiteness"] = definiteness_name(d.definiteness);
    j["eigenvalues"] =
        std::vector<double>(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
    j["zero_threshold"] = d.zero_threshold;
    j["signature_before"] = to_json(d.before.signature);
    j["signature_after"] = to_json(d.after.signature);
    return j;
}

inline json to_json(const TransportCheck& t) {
    json j;
    j["ok"] = t.ok;
    j["signature_before"] = to_json(t.before);
    j["signature_after"] = to_json(t.after);
    j["expected_after"] = to_json(t.expected_after);
    j["theorem_before"] = t.theorem_before;
    j["theorem_after"] = t.theorem_after;
    if (!t.detail.empty()) j["detail"] = t.detail;
    return j;
}

} // namespace regge
