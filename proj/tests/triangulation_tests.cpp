#include <catch_amalgamated.hpp>

#include <regge/catalog.hpp>
#include <regge/moves.hpp>
#include <regge/triangulation.hpp>

#include "support/generators.hpp"

using namespace regge;
using Catch::Approx;

namespace {

bool has_issue(const ValidationReport& r, const std::string& code) {
    for (const auto& i : r.issues)
        if (i.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("cube decomposition structure") {
    const Triangulation3 T = *builtin("cube-6tet").tets;
    REQUIRE(T.num_vertices() == 8);
    REQUIRE(T.num_tets() == 6);
    REQUIRE(T.boundary_triangles().size() == 12);
    REQUIRE(euler_characteristic(T) == 1);
    REQUIRE(validate(T).valid);
    REQUIRE(T.tet_volume_sum() == Approx(1.0).epsilon(1e-12));
    REQUIRE(T.solid_volume() == Approx(1.0).epsilon(1e-12));

    const Census c = census(T);
    REQUIRE(c.m() == 0);
    REQUIRE(c.k() == 0);
    REQUIRE(c.n() == 1);
    const auto e = c.edge.edges[c.edge.interior_edges[0]];
    REQUIRE(e == std::array<int, 2>{0, 7});
    REQUIRE(c.n() ==
            static_cast<int>(T.edges().size() - c.edge.boundary_edges.size()));
}

TEST_CASE("validation diagnostics") {
    const auto verts = builtin("cube-6tet").tets->vertices();
    auto tets = builtin("cube-6tet").tets->tets();

    SECTION("clean complex passes") {
        REQUIRE(validate(Triangulation3(verts, tets)).valid);
    }
    SECTION("duplicate cell") {
        tets.push_back(tets.front());
        const auto r = validate(Triangulation3(verts, tets));
        REQUIRE_FALSE(r.valid);
        REQUIRE(has_issue(r, "duplicate-cell"));
    }
    SECTION("nonfinite vertex") {
        auto bad = verts;
        bad[2].y() = std::numeric_limits<double>::quiet_NaN();
        const auto r = validate(Triangulation3(bad, tets));
        REQUIRE(has_issue(r, "nonfinite-vertex"));
    }
    SECTION("repeated vertex inside a tet") {
        auto bad = tets;
        bad.push_back({0, 1, 2, 2});
        const auto r = validate(Triangulation3(verts, bad));
        REQUIRE_FALSE(r.valid);
        REQUIRE(has_issue(r, "repeated-vertex"));
    }
    SECTION("degenerate tet") {
        auto worse = tets;
        // Four corners of one cube face are coplanar.
        std::array<int, 4> face{};
        int c = 0;
        for (int v = 0; v < 8; ++v)
            if (std::abs(verts[v].z()) < 1e-12) face[c++] = v;
        REQUIRE(c == 4);
        worse.push_back(face);
        bool degenerate_or_invalid = false;
        try {
            const auto r = validate(Triangulation3(verts, worse));
            degenerate_or_invalid = !r.valid && has_issue(r, "degenerate-tet");
        } catch (const Error&) {
            degenerate_or_invalid = true;
        }
        REQUIRE(degenerate_or_invalid);
    }
    SECTION("overlapping tets break additivity") {
        auto worse = tets;
        worse.push_back({0, 1, 2, 7});  // overlaps the existing cells
        const auto r = validate(Triangulation3(verts, worse));
        REQUIRE_FALSE(r.valid);
    }
    SECTION("out of range index throws at construction") {
        auto worse = tets;
        worse.push_back({0, 1, 2, 99});
        REQUIRE_THROWS_AS(Triangulation3(verts, worse), IndexMismatch);
    }
}

TEST_CASE("census flat vertices") {
    const CatalogEntry flat = builtin("flat-vertex-sphere");
    const Triangulation3& T = *flat.tets;
    const Census c = census(T);
    REQUIRE(c.m() == 0);
    REQUIRE(c.k() == 1);
    REQUIRE(c.vertex.flat_vertices == std::vector<int>{6});
    REQUIRE(c.n() == 2);
    // The flat vertex's outward normal is the starred face's normal.
    REQUIRE(std::abs(std::abs(c.vertex.flat_normals[0].dot(
                Vec3(1, 1, -1).normalized())) -
                     1.0) < 1e-9);

    SECTION("detection survives dropping the reference faces") {
        const Triangulation3 bare(T.vertices(), T.tets());
        const Census cb = census(bare);
        REQUIRE(cb.k() == 1);
        REQUIRE(cb.vertex.flat_vertices == std::vector<int>{6});
    }
    SECTION("census is invariant under relabeling") {
        std::vector<int> perm(T.num_vertices());
        for (int i = 0; i < T.num_vertices(); ++i) perm[i] = i;
        std::mt19937_64 rng(5);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Vec3> verts(T.num_vertices());
        for (int i = 0; i < T.num_vertices(); ++i) verts[perm[i]] = T.vertices()[i];
        std::vector<std::array<int, 4>> tets;
        for (const auto& q : T.tets())
            tets.push_back({perm[q[0]], perm[q[1]], perm[q[2]], perm[q[3]]});
        const Census cp = census(Triangulation3(verts, tets));
        REQUIRE(cp.m() == c.m());
        REQUIRE(cp.k() == c.k());
        REQUIRE(cp.n() == c.n());
        REQUIRE(cp.vertex.flat_vertices == std::vector<int>{perm[6]});
    }
}

TEST_CASE("interior vertex census") {
    Triangulation3 T = *builtin("regular-tetrahedron").tets;
    T = pachner_1_4(T, 0).tri;
    const Census c = census(T);
    REQUIRE(c.m() == 1);
    REQUIRE(c.vertex.interior_vertices == std::vector<int>{4});
    REQUIRE(c.k() == 0);
    REQUIRE(c.n() == 4);
}

TEST_CASE("length domain") {
    const Triangulation3 T = *builtin("cube-6tet").tets;
    const Census c = census(T);
    const EdgeLengthVector base = realized_lengths(T, c);
    REQUIRE(base.size() == 1);
    REQUIRE(base[0] == Approx(std::sqrt(3.0)).epsilon(1e-12));
    REQUIRE(in_domain(T, c, base));

    EdgeLengthVector l = base;
    l[0] = 0.0;
    REQUIRE_FALSE(in_domain(T, c, l));
    l[0] = 50.0;  // violates the triangle inequality in every incident tet
    REQUIRE_FALSE(in_domain(T, c, l));
    REQUIRE_THROWS_AS(in_domain(T, c, EdgeLengthVector{}), IndexMismatch);

    testgen::Rng rng(31);
    for (int i = 0; i < 20; ++i)
        REQUIRE(in_domain(T, c, testgen::perturbed_lengths(T, c, rng)));
}

TEST_CASE("cone triangulations") {
    SECTION("octahedron cone from a vertex") {
        const CatalogEntry oct = builtin("octahedron-cone");
        REQUIRE(oct.tets->num_tets() == 4);
        REQUIRE(validate(*oct.tets).valid);
        const Census c = census(*oct.tets);
        REQUIRE(c.m() == 0);
        REQUIRE(c.k() == 0);
        REQUIRE(c.n() == 1);
    }
    SECTION("apex coplanar with a disjoint face is rejected") {
        const Triangulation3 cube = *builtin("cube-6tet").tets;
        bool threw = false;
        for (int apex = 0; apex < 8 && !threw; ++apex) {
            try {
                cone_triangulation(cube.vertices(), cube.boundary_triangles(), apex);
            } catch (const DegenerateCone&) {
                threw = true;
            }
        }
        REQUIRE(threw);
    }
    SECTION("cone over polygon faces fans flat faces through the apex") {
        const CatalogEntry cube = builtin("cube-5tet");
        const Triangulation3 T =
            cone_triangulation_of_polyhedron(cube.vertices, cube.faces, 0);
        REQUIRE(validate(T).valid);
        REQUIRE(T.solid_volume() == Approx(1.0).epsilon(1e-12));
        const Census c = census(T);
        REQUIRE(c.m() == 0);
        REQUIRE(c.k() == 0);
    }
}

TEST_CASE("random cone triangulations validate") {
    testgen::Rng rng(32);
    for (int i = 0; i < 10; ++i) {
        const Triangulation3 T = testgen::random_cone_triangulation(rng);
        const auto r = validate(T);
        REQUIRE(r.valid);
        REQUIRE(euler_characteristic(T) == 1);
        REQUIRE(T.tet_volume_sum() == Approx(T.solid_volume()).epsilon(1e-9));
        const Census c = census(T);
        REQUIRE(c.m() == 0);
        REQUIRE(c.k() == 0);
    }
}
