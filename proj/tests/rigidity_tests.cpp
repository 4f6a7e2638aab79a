#include <catch_amalgamated.hpp>

#include <regge/catalog.hpp>
#include <regge/rigidity.hpp>

#include "support/generators.hpp"

using namespace regge;
using Catch::Approx;

TEST_CASE("rigidity matrix annihilates rigid motions") {
    const CatalogEntry e = builtin("jessen-icosahedron");
    const Framework f = framework_from_surface(e.vertices, e.boundary_tris);
    REQUIRE(f.edges.size() == 30);
    const Eigen::MatrixXd R = rigidity_matrix(f);
    REQUIRE(R.rows() == 30);
    REQUIRE(R.cols() == 3 * 12);
    const Eigen::MatrixXd B = trivial_motion_basis(f.points);
    REQUIRE(numeric_rank(B) == 6);
    REQUIRE((R * B).cwiseAbs().maxCoeff() < 1e-12 * R.cwiseAbs().maxCoeff());
}

TEST_CASE("convex catalog surfaces are rigid") {
    for (const char* name :
         {"regular-tetrahedron", "cube-6tet", "octahedron-cone", "oct-theta(0)"}) {
        const CatalogEntry e = builtin(name);
        CAPTURE(name);
        REQUIRE(is_infinitesimally_rigid(e.vertices, e.boundary_tris));
        const FlexSpace fs = flex_space(framework_from_surface(e.vertices, e.boundary_tris));
        REQUIRE(fs.trivial_dim == 6);
        REQUIRE(fs.nontrivial_dim == 0);
        REQUIRE(fs.basis.cols() == 6);
        REQUIRE(fs.gap_ratio >= 1e3);
    }
}

TEST_CASE("flexible surfaces have a one dimensional flex") {
    for (const char* name : {"jessen-icosahedron", "wunderlich-octahedron"}) {
        const CatalogEntry e = builtin(name);
        CAPTURE(name);
        REQUIRE_FALSE(is_infinitesimally_rigid(e.vertices, e.boundary_tris));
        const FlexSpace fs = flex_space(framework_from_surface(e.vertices, e.boundary_tris));
        REQUIRE(fs.nontrivial_dim == 1);
        REQUIRE(fs.basis.cols() == *e.expected.flex_dim);
        REQUIRE(fs.nontrivial_basis.cols() == 1);

        // The flex is genuinely orthogonal to the edge directions.
        const Framework f = framework_from_surface(e.vertices, e.boundary_tris);
        const Eigen::MatrixXd R = rigidity_matrix(f);
        const Eigen::VectorXd q = fs.nontrivial_basis.col(0);
        REQUIRE((R * q).norm() < 1e-9 * R.norm());
    }
}

TEST_CASE("twisted octahedron rigidity across the family") {
    REQUIRE(*builtin("oct-theta(0)").expected.rigid);
    for (double theta : {0.4, -0.7, 1.2}) {
        const CatalogEntry e = oct_theta(theta);
        CAPTURE(theta);
        REQUIRE(is_infinitesimally_rigid(e.vertices, e.boundary_tris));
    }
    const CatalogEntry w = builtin("wunderlich-octahedron");
    REQUIRE_FALSE(is_infinitesimally_rigid(w.vertices, w.boundary_tris));
    // Both signs of the critical twist flex.
    const CatalogEntry wneg = oct_theta(-kPi / 2.0);
    REQUIRE_FALSE(is_infinitesimally_rigid(wneg.vertices, wneg.boundary_tris));
}

TEST_CASE("flat vertices enlarge the flex space by their normals") {
    const CatalogEntry e = builtin("flat-vertex-sphere");
    const DehnReport rep = dehn_decomposition_check(e.vertices, e.boundary_tris);
    REQUIRE(rep.flat_count == 1);
    REQUIRE(rep.expected_dim == 7);
    REQUIRE(rep.flex_dim == 7);
    REQUIRE(rep.worst_support_residual < 1e-7);
    REQUIRE(rep.ok);

    // The same check is meaningless on a non-convex surface and fails.
    const CatalogEntry j = builtin("jessen-icosahedron");
    REQUIRE_FALSE(dehn_decomposition_check(j.vertices, j.boundary_tris).ok);
}

TEST_CASE("degenerate frameworks are rejected") {
    Framework f;
    f.points = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
    f.edges = {{0, 1}};
    REQUIRE_THROWS_AS(flex_space(f), DegenerateConfiguration);

    Framework g;
    g.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
    g.edges = {{0, 1}, {1, 2}, {2, 3}};
    REQUIRE_THROWS_AS(flex_space(g), DegenerateConfiguration);

    // A surface that never references one of the listed vertices.
    const CatalogEntry e = builtin("octahedron-cone");
    std::vector<std::array<int, 3>> partial;
    for (const auto& t : e.boundary_tris)
        if (t[0] != 5 && t[1] != 5 && t[2] != 5) partial.push_back(t);
    REQUIRE(partial.size() == 4);
    REQUIRE_THROWS_AS(is_infinitesimally_rigid(e.vertices, partial), DegenerateInput);
}

TEST_CASE("random convex spheres are rigid") {
    testgen::Rng rng(21);
    for (int i = 0; i < 5; ++i) {
        const testgen::Surface s = testgen::random_convex_surface(rng);
        REQUIRE(is_infinitesimally_rigid(s.verts, s.tris));
        const FlexSpace fs = flex_space(framework_from_surface(s.verts, s.tris));
        REQUIRE(fs.gap_ratio >= 1e3);
        const DehnReport rep = dehn_decomposition_check(s.verts, s.tris);
        REQUIRE(rep.flat_count == 0);
        REQUIRE(rep.ok);
    }
}

TEST_CASE("full skeleton of a cone triangulation is rigid") {
    testgen::Rng rng(22);
    const Triangulation3 T = testgen::random_cone_triangulation(rng);
    const FlexSpace fs = flex_space(framework_from_triangulation(T));
    REQUIRE(fs.nontrivial_dim == 0);
}
