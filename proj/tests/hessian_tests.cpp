#include <catch_amalgamated.hpp>

#include <regge/catalog.hpp>
#include <regge/hessian.hpp>
#include <regge/moves.hpp>
#include <regge/rigidity.hpp>

#include "support/generators.hpp"

using namespace regge;
using Catch::Approx;

TEST_CASE("angle state at realized lengths") {
    const Triangulation3 T = *builtin("cube-6tet").tets;
    const Census c = census(T);
    const AngleState st = angle_state(T, c, realized_lengths(T, c));
    REQUIRE(st.omega.size() == 1);
    REQUIRE(st.omega[0] == Approx(2.0 * kPi).epsilon(1e-12));
    REQUIRE(st.kappa[0] == Approx(0.0).margin(1e-12));
    REQUIRE(st.boundary_alphas.size() == c.edge.boundary_edges.size());

    // Boundary dihedral angles of a cube: pi/2 along the edges, pi across
    // the face diagonals introduced by the triangulation.
    for (size_t j = 0; j < c.edge.boundary_edges.size(); ++j) {
        const auto e = c.edge.edges[c.edge.boundary_edges[j]];
        const double len = (T.vertices()[e[0]] - T.vertices()[e[1]]).norm();
        const double expect = len > 1.2 ? kPi : kPi / 2.0;
        REQUIRE(st.boundary_alphas[j] == Approx(expect).epsilon(1e-12));
    }

    EdgeLengthVector l = realized_lengths(T, c);
    l[0] = 10.0;
    REQUIRE_THROWS_AS(angle_state(T, c, l), DomainViolation);
}

TEST_CASE("total angle gradient matches curvature") {
    testgen::Rng rng(7);
    for (const char* name : {"cube-6tet", "octahedron-cone"}) {
        const Triangulation3 T = *builtin(name).tets;
        const Census c = census(T);
        for (int trial = 0; trial < 5; ++trial) {
            const EdgeLengthVector l = testgen::perturbed_lengths(T, c, rng);
            REQUIRE(gradient_check(T, c, l) < 1e-6);
        }
    }
}

TEST_CASE("single interior edge gives a 1x1 positive matrix") {
    const Triangulation3 T = *builtin("cube-6tet").tets;
    const HessianReport rep = hessian(T);
    REQUIRE(rep.n == 1);
    REQUIRE(rep.M(0, 0) > 0.0);
    REQUIRE(rep.signature.negative == 0);
    REQUIRE(rep.signature.zero == 0);
    REQUIRE(rep.signature.positive == 1);
    REQUIRE(rep.max_asymmetry == 0.0);
    REQUIRE(rep.gap_ratio >= 1e3);
}

TEST_CASE("interior vertex contributes a rank-3 kernel") {
    Triangulation3 T = *builtin("regular-tetrahedron").tets;
    T = pachner_1_4(T, 0).tri;
    const Census c = census(T);
    REQUIRE(c.m() == 1);
    REQUIRE(c.n() == 4);

    const HessianReport rep = hessian(T, c);
    REQUIRE(rep.signature.negative == 1);
    REQUIRE(rep.signature.zero == 3);
    REQUIRE(rep.signature.positive == 0);
    REQUIRE(rep.max_asymmetry < 1e-6 * rep.M.cwiseAbs().maxCoeff());
    REQUIRE(rep.gap_ratio >= 1e3);

    SECTION("kernel vectors from interior displacements") {
        const auto basis = admissible_displacement_basis(T, c);
        REQUIRE(basis.size() == 3);
        Eigen::MatrixXd K(c.n(), static_cast<int>(basis.size()));
        for (size_t b = 0; b < basis.size(); ++b) {
            const Eigen::VectorXd ell = kernel_vector_from_displacement(T, c, basis[b]);
            const double denom = rep.M.norm() * std::max(ell.norm(), 1e-300);
            REQUIRE((rep.M * ell).norm() < 1e-6 * denom);
            K.col(static_cast<int>(b)) = ell;
        }
        REQUIRE(numeric_rank(K, 1e-9) == 3);
    }
    SECTION("inadmissible displacements are rejected") {
        VertexDisplacement Q(T.num_vertices(), Vec3::Zero());
        Q[0] = Vec3(1, 0, 0);  // non-flat boundary vertex
        REQUIRE_THROWS_AS(kernel_vector_from_displacement(T, c, Q), InadmissibleDisplacement);
        REQUIRE_THROWS_AS(kernel_vector_from_displacement(T, c, VertexDisplacement{}),
                          IndexMismatch);
    }
}

TEST_CASE("flat vertex contributes a rank-1 kernel") {
    const CatalogEntry e = builtin("flat-vertex-sphere");
    const Triangulation3& T = *e.tets;
    const Census c = census(T);
    REQUIRE(kernel_dimension_predicted(c) == 1);

    const HessianReport rep = hessian(T, c);
    REQUIRE(rep.signature.negative == e.expected.signature->negative);
    REQUIRE(rep.signature.zero == e.expected.signature->zero);
    REQUIRE(rep.signature.positive == e.expected.signature->positive);

    const auto basis = admissible_displacement_basis(T, c);
    REQUIRE(basis.size() == 1);
    const Eigen::VectorXd ell = kernel_vector_from_displacement(T, c, basis[0]);
    REQUIRE(ell.norm() > 0.0);
    REQUIRE((rep.M * ell).norm() < 1e-6 * rep.M.norm() * ell.norm());

    VertexDisplacement Q(T.num_vertices(), Vec3::Zero());
    Q[6] = Vec3(1, 0, 0);  // tangential at the flat vertex
    REQUIRE_THROWS_AS(kernel_vector_from_displacement(T, c, Q), InadmissibleDisplacement);
}

TEST_CASE("hilbert einstein functional is stationary in curvature form") {
    // d S = sum kappa_i d l_i, so at a flat realization S's gradient is 0.
    const Triangulation3 T = *builtin("octahedron-cone").tets;
    const Census c = census(T);
    const EdgeLengthVector l0 = realized_lengths(T, c);
    const AngleState st = angle_state(T, c, l0);
    for (double k : st.kappa) REQUIRE(k == Approx(0.0).margin(1e-12));

    const double h = 1e-6 * l0[0];
    EdgeLengthVector lp = l0, lm = l0;
    lp[0] += h;
    lm[0] -= h;
    const double grad =
        (hilbert_einstein(T, c, lp) - hilbert_einstein(T, c, lm)) / (2 * h);
    REQUIRE(grad == Approx(0.0).margin(1e-8));
}

TEST_CASE("deformation identity on complexes") {
    testgen::Rng rng(11);
    for (const char* name : {"cube-6tet", "cube-5tet", "octahedron-cone"}) {
        const Triangulation3 T = *builtin(name).tets;
        double lsum = 0.0;
        for (int e = 0; e < static_cast<int>(T.edges().size()); ++e)
            lsum += T.edge_length(e);
        for (int trial = 0; trial < 10; ++trial) {
            const auto vel = testgen::random_velocity(rng, T.num_vertices());
            REQUIRE(schlafli_residual(T, vel) < 1e-12 * lsum);
        }
    }
}

TEST_CASE("deformation identity on closed surfaces") {
    testgen::Rng rng(12);
    for (const char* name : {"jessen-icosahedron", "oct-theta(0.9)"}) {
        const CatalogEntry e = builtin(name);
        double lsum = 0.0;
        const Framework f = framework_from_surface(e.vertices, e.boundary_tris);
        for (const auto& ed : f.edges) lsum += (e.vertices[ed[0]] - e.vertices[ed[1]]).norm();
        for (int trial = 0; trial < 10; ++trial) {
            const auto vel =
                testgen::random_velocity(rng, static_cast<int>(e.vertices.size()));
            REQUIRE(surface_schlafli_residual(e.vertices, e.boundary_tris, vel) <
                    1e-12 * lsum);
        }
    }
}

TEST_CASE("random refinements keep the matrix symmetric and consistent") {
    testgen::Rng rng(13);
    Triangulation3 T = *builtin("octahedron-cone").tets;
    T = testgen::refine_randomly(T, rng, 12);
    const Census c = census(T);
    const HessianReport rep = hessian(T, c);

    REQUIRE(rep.max_asymmetry < 1e-6 * std::max(1.0, rep.M.cwiseAbs().maxCoeff()));
    const auto pred = kernel_dimension_predicted(c);
    REQUIRE(rep.signature.zero == pred);
    REQUIRE(rep.signature.negative == c.m());
    REQUIRE(rep.signature.positive == c.n() - 4 * c.m() - c.k());

    // Every admissible displacement maps into the kernel.
    for (const auto& Q : admissible_displacement_basis(T, c)) {
        const Eigen::VectorXd ell = kernel_vector_from_displacement(T, c, Q);
        REQUIRE((rep.M * ell).norm() <= 1e-6 * rep.M.norm() * std::max(ell.norm(), 1e-300));
    }
}
