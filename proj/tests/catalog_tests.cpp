#include <catch_amalgamated.hpp>

#include <map>

#include <regge/catalog.hpp>
#include <regge/hessian.hpp>
#include <regge/hull.hpp>
#include <regge/rigidity.hpp>

using namespace regge;
using Catch::Approx;

TEST_CASE("builtin lookup") {
    for (const auto& name : builtin_names()) {
        if (name.find('<') != std::string::npos) continue;  // parameter placeholder
        REQUIRE(builtin(name).name == name);
    }
    REQUIRE_THROWS_AS(builtin("no-such-model"), UnknownName);
    REQUIRE_THROWS_AS(builtin("oct-theta(xyz)"), UnknownName);
    REQUIRE_THROWS_AS(builtin("oct-theta(2.5)"), ThetaOutOfRange);

    const CatalogEntry e = builtin("oct-theta(0.25)");
    const CatalogEntry f = oct_theta(0.25);
    REQUIRE(e.vertices.size() == f.vertices.size());
    for (size_t i = 0; i < e.vertices.size(); ++i)
        REQUIRE((e.vertices[i] - f.vertices[i]).norm() == 0.0);
}

TEST_CASE("expected properties are reproduced by the pipeline") {
    for (const char* name : {"regular-tetrahedron", "cube-5tet", "cube-6tet",
                             "octahedron-cone", "flat-vertex-sphere"}) {
        const CatalogEntry e = builtin(name);
        CAPTURE(name);
        REQUIRE(e.tets.has_value());
        REQUIRE(validate(*e.tets).valid);

        const Census c = census(*e.tets);
        REQUIRE(c.m() == *e.expected.m);
        REQUIRE(c.k() == *e.expected.k);
        REQUIRE(c.n() == *e.expected.n);

        const HessianReport rep = hessian(*e.tets, c);
        REQUIRE(rep.signature == *e.expected.signature);

        REQUIRE(is_infinitesimally_rigid(e.vertices, e.boundary_tris) == *e.expected.rigid);
        const FlexSpace fs = flex_space(framework_from_surface(e.vertices, e.boundary_tris));
        REQUIRE(fs.basis.cols() == *e.expected.flex_dim);

        REQUIRE(vertices_in_convex_position(e.vertices) == *e.expected.weakly_convex);
        REQUIRE(surface_embedded(e.vertices, e.boundary_tris));
    }
}

TEST_CASE("twisted octahedron family geometry") {
    for (double theta : {0.0, 0.35, -1.1, kPi / 2.0, 2.0}) {
        const CatalogEntry e = oct_theta(theta);
        CAPTURE(theta);
        REQUIRE(e.vertices.size() == 6);
        REQUIRE(e.boundary_tris.size() == 8);
        for (int i = 0; i < 6; ++i) {
            REQUIRE(e.vertices[i].head<2>().norm() == Approx(1.0).epsilon(1e-15));
            REQUIRE(std::abs(e.vertices[i].z()) == Approx(1.0).epsilon(1e-15));
        }
        // Closed oriented surface: each directed edge appears exactly once.
        std::map<std::pair<int, int>, int> dir;
        for (const auto& f : e.boundary_tris)
            for (int k = 0; k < 3; ++k) dir[{f[k], f[(k + 1) % 3]}]++;
        REQUIRE(dir.size() == 24);
        for (const auto& [d, cnt] : dir) {
            REQUIRE(cnt == 1);
            REQUIRE(dir.count({d.second, d.first}) == 1);
        }
        REQUIRE(surface_embedded(e.vertices, e.boundary_tris));
        REQUIRE(vertices_in_convex_position(e.vertices));
    }
    REQUIRE_THROWS_AS(oct_theta(2.0 * kPi / 3.0), ThetaOutOfRange);
    REQUIRE_THROWS_AS(oct_theta(-2.0 * kPi / 3.0), ThetaOutOfRange);
    REQUIRE_THROWS_AS(oct_theta(7.0), ThetaOutOfRange);
}

TEST_CASE("cap and midsection areas across the twist") {
    const double cap = 3.0 * std::sqrt(3.0) / 4.0;

    const SweepRow at0 = oct_section_areas(0.0);
    REQUIRE(std::abs(at0.a_top - cap) < 1e-12);
    REQUIRE(std::abs(at0.a_bottom - cap) < 1e-12);
    REQUIRE(at0.a_mid == Approx(9.0 * std::sqrt(3.0) / 8.0).epsilon(1e-9));
    REQUIRE(at0.deficit > 0.0);

    SECTION("caps are twist invariant, the midsection shrinks") {
        double prev = at0.a_mid;
        for (double theta : {0.3, 0.8, 1.3, 1.8, 2.05}) {
            const SweepRow row = oct_section_areas(theta);
            REQUIRE(std::abs(row.a_top - cap) < 1e-12);
            REQUIRE(std::abs(row.a_bottom - cap) < 1e-12);
            REQUIRE(row.a_mid < prev);
            prev = row.a_mid;

            const SweepRow neg = oct_section_areas(-theta);
            REQUIRE(neg.a_mid == Approx(row.a_mid).margin(1e-10));
        }
    }
    SECTION("near the collapse the midsection vanishes") {
        const SweepRow row = oct_section_areas(2.0 * kPi / 3.0 - 1e-3);
        REQUIRE(row.a_mid < 1e-2 * at0.a_mid);
        REQUIRE(row.deficit < 0.0);
    }
    SECTION("the deficit changes sign on a sweep") {
        std::vector<double> grid;
        for (int i = 0; i <= 100; ++i)
            grid.push_back(-2.0 * kPi / 3.0 + 1e-6 + i * (4.0 * kPi / 3.0 - 2e-6) / 100);
        const auto rows = a0_sweep(grid);
        bool pos = false, neg = false;
        for (const auto& r : rows) {
            if (r.deficit > 0) pos = true;
            if (r.deficit < 0) neg = true;
        }
        REQUIRE(pos);
        REQUIRE(neg);
    }
}

TEST_CASE("critically twisted octahedron") {
    const CatalogEntry w = builtin("wunderlich-octahedron");
    REQUIRE(w.name == "wunderlich-octahedron");
    REQUIRE_FALSE(*w.expected.rigid);
    const CatalogEntry same = oct_theta(kPi / 2.0);
    for (size_t i = 0; i < w.vertices.size(); ++i)
        REQUIRE((w.vertices[i] - same.vertices[i]).norm() == 0.0);
}

TEST_CASE("flexible icosahedron geometry") {
    const CatalogEntry e = builtin("jessen-icosahedron");
    REQUIRE(e.vertices.size() == 12);
    REQUIRE(e.boundary_tris.size() == 20);
    REQUIRE(surface_embedded(e.vertices, e.boundary_tris));
    REQUIRE(vertices_in_convex_position(e.vertices));

    double vol = 0.0;
    for (const auto& f : e.boundary_tris)
        vol += e.vertices[f[0]].dot(e.vertices[f[1]].cross(e.vertices[f[2]])) / 6.0;
    REQUIRE(vol == Approx(20.0).epsilon(1e-12));

    SECTION("edge lengths split into short and long") {
        const Framework fw = framework_from_surface(e.vertices, e.boundary_tris);
        REQUIRE(fw.edges.size() == 30);
        int shorts = 0, longs = 0;
        for (const auto& ed : fw.edges) {
            const double l = (e.vertices[ed[0]] - e.vertices[ed[1]]).norm();
            if (std::abs(l - std::sqrt(6.0)) < 1e-12)
                ++shorts;
            else if (std::abs(l - 4.0) < 1e-12)
                ++longs;
        }
        REQUIRE(shorts == 24);
        REQUIRE(longs == 6);
    }
    SECTION("every dihedral angle is a right angle") {
        std::map<std::pair<int, int>, int> third;
        for (const auto& f : e.boundary_tris)
            for (int k = 0; k < 3; ++k) third[{f[k], f[(k + 1) % 3]}] = f[(k + 2) % 3];
        int reflex = 0, convex = 0;
        for (const auto& [d, c] : third) {
            if (d.first > d.second) continue;
            const int dd = third.at({d.second, d.first});
            const double ang = surface_interior_dihedral(
                e.vertices[d.first], e.vertices[d.second], e.vertices[c], e.vertices[dd]);
            const double l = (e.vertices[d.first] - e.vertices[d.second]).norm();
            if (ang > kPi) {
                REQUIRE(ang == Approx(3.0 * kPi / 2.0).epsilon(1e-12));
                ++reflex;
                // The six long hinges between isoceles face pairs fold inward.
                REQUIRE(l == Approx(4.0).epsilon(1e-12));
            } else {
                REQUIRE(ang == Approx(kPi / 2.0).epsilon(1e-12));
                ++convex;
                REQUIRE(l == Approx(std::sqrt(6.0)).epsilon(1e-12));
            }
        }
        REQUIRE(reflex == 6);
        REQUIRE(convex == 24);
    }
}

TEST_CASE("slab inequality classification") {
    SECTION("mixed splits satisfy the quartic bound") {
        const std::array<Vec3, 4> three_up{Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 1, 1),
                                           Vec3(0, 0, -1)};
        const SlabReport rep = codecomposability_inequality_check({three_up});
        REQUIRE(rep.per_tet.size() == 1);
        REQUIRE(rep.per_tet[0].upper == 3);
        REQUIRE(rep.per_tet[0].lower == 1);
        REQUIRE(rep.per_tet[0].a_top == Approx(0.5).epsilon(1e-12));
        REQUIRE(rep.per_tet[0].a_bottom == Approx(0.0).margin(1e-12));
        REQUIRE(rep.per_tet[0].a_mid == Approx(0.125).epsilon(1e-12));
        REQUIRE(rep.per_tet[0].ok);
        REQUIRE(rep.per_tet_ok);
        REQUIRE(rep.aggregate_ok);
    }
    SECTION("two up two down sharpens to the quadratic bound") {
        const std::array<Vec3, 4> split{Vec3(1, 0, 1), Vec3(-1, 0, 1), Vec3(0, 1, -1),
                                        Vec3(0, -1, -1)};
        const SlabReport rep = codecomposability_inequality_check({split});
        REQUIRE(rep.per_tet[0].upper == 2);
        REQUIRE(rep.per_tet[0].lower == 2);
        REQUIRE(rep.per_tet[0].a_mid == Approx(1.0).epsilon(1e-12));
        REQUIRE(rep.per_tet[0].a_top == Approx(0.0).margin(1e-12));
        REQUIRE(rep.per_tet[0].ok);
        REQUIRE(rep.per_tet[0].ok_quadratic);
    }
    SECTION("vertices inside the slab are rejected") {
        const std::array<Vec3, 4> bad{Vec3(0, 0, 0.5), Vec3(1, 0, 1), Vec3(0, 1, 1),
                                      Vec3(0, 0, -1)};
        REQUIRE_THROWS_AS(codecomposability_inequality_check({bad}), CaseUnclassifiable);
    }
}

TEST_CASE("surface embedding detector") {
    // Two separated triangles: embedded.
    std::vector<Vec3> verts = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                               Vec3(0, 0, 5), Vec3(1, 0, 5), Vec3(0, 1, 5)};
    std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {3, 4, 5}};
    REQUIRE(surface_embedded(verts, tris));

    // Move the second triangle so it pierces the first.
    verts[3] = Vec3(0.2, 0.2, -1);
    verts[4] = Vec3(0.3, 0.2, 1);
    verts[5] = Vec3(0.2, 0.3, 1);
    REQUIRE_FALSE(surface_embedded(verts, tris));

    // Sharing a vertex exempts the pair.
    tris = {{0, 1, 2}, {0, 4, 5}};
    REQUIRE(surface_embedded(verts, tris));
}
