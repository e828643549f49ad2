#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "liectrl/algebra.hpp"
#include "test_support.hpp"

using namespace liectrl;

TEST_CASE("numerical_rank on the identity") {
    const auto res = numerical_rank(Eigen::MatrixXd::Identity(3, 3), 1e-10);
    CHECK(res.rank == 3);
    CHECK(res.column_basis.dimension() == 3);
}

TEST_CASE("numerical_rank of the SL2 Kalman matrix is 3") {
    const auto res = numerical_rank(golden::sl2_kalman());
    CHECK(res.rank == 3);
    CHECK(oracle::echelon_rank(golden::sl2_kalman()) == 3);
}

TEST_CASE("numerical_rank of the zero matrix") {
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(4, 4)).rank == 0);
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(4, 4)).column_basis.dimension() == 0);
}

TEST_CASE("numerical_rank rejects bad input") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Ones(2, 2);
    M(1, 1) = std::nan("");
    CHECK_THROWS_AS(numerical_rank(M), InvalidMatrix);
    CHECK_THROWS_AS(numerical_rank(Eigen::MatrixXd(0, 0)), InvalidMatrix);
    CHECK_THROWS_AS(numerical_rank(Eigen::MatrixXd::Ones(2, 2), 2.0), std::invalid_argument);
}

TEST_CASE("rank is invariant under column permutation and scaling") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int r = rng.uniform_int(1, 3);
        const Eigen::MatrixXd M =
            oracle::random_matrix(rng, 5, r) * oracle::random_matrix(rng, r, 4);
        const int base = numerical_rank(M).rank;
        CHECK(base == oracle::echelon_rank(M));

        Eigen::MatrixXd scrambled(5, 4);
        std::vector<int> perm{0, 1, 2, 3};
        for (int i = 3; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        for (int j = 0; j < 4; ++j) {
            double s = rng.uniform(0.2, 3.0) * (rng.unit() < 0.5 ? -1.0 : 1.0);
            scrambled.col(j) = s * M.col(perm[j]);
        }
        CHECK(numerical_rank(scrambled).rank == base);
    }
}

TEST_CASE("span_union is idempotent") {
    Eigen::MatrixXd v(3, 1);
    v << 1, 0, 0;
    const AlgebraBasis b = span_of_columns(v);
    CHECK(span_union({b, b}).dimension() == 1);
    CHECK(spans_equal(span_union({b, b}), b));
}

TEST_CASE("span_union of the Aff2 control derivatives has dimension 2") {
    Eigen::MatrixXd cols(2, 2);
    cols.col(0) << 1.0, 0.0;
    cols.col(1) << 1.0, 2.0 * std::exp(-1.0);
    CHECK(span_of_columns(cols).dimension() == 2);
}

TEST_CASE("span_union of many vectors drawn from a fixed 2-plane of R^4") {
    Rng rng(11);
    const Eigen::MatrixXd plane = oracle::random_matrix(rng, 4, 2);
    Eigen::MatrixXd cols(4, 50);
    for (int j = 0; j < 50; ++j) cols.col(j) = plane * oracle::random_matrix(rng, 2, 1);
    const AlgebraBasis b = span_of_columns(cols);
    CHECK(b.dimension() == 2);
    CHECK(spans_equal(b, oracle::gs_basis(plane)));
}

TEST_CASE("span_union rejects mismatched ambient dimensions") {
    const AlgebraBasis a = span_of_columns(Eigen::MatrixXd::Identity(3, 1));
    const AlgebraBasis b = span_of_columns(Eigen::MatrixXd::Identity(4, 1));
    CHECK_THROWS_AS(span_union({a, b}), DimensionMismatch);
}

TEST_CASE("psi_invariant_hull reproduces the SL2 Kalman span") {
    Eigen::MatrixXd v(4, 1);
    v << 1, -1, 1, -1;
    const AlgebraBasis hull = psi_invariant_hull(span_of_columns(v), golden::sl2_psi(), 3);
    CHECK(hull.dimension() == 3);
    CHECK(spans_equal(hull, oracle::gs_basis(golden::sl2_kalman())));
}

TEST_CASE("psi_invariant_hull with psi = I returns the span unchanged") {
    Rng rng(3);
    const AlgebraBasis b = span_of_columns(oracle::random_matrix(rng, 4, 2));
    const AlgebraBasis hull = psi_invariant_hull(b, Eigen::MatrixXd::Identity(4, 4), 4);
    CHECK(spans_equal(hull, b));
}

TEST_CASE("psi_invariant_hull equals the brute-force power span") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const int N = rng.uniform_int(2, 5);
        const Eigen::MatrixXd psi = oracle::random_invertible(rng, N);
        const int k = rng.uniform_int(1, 2);
        const AlgebraBasis B = span_of_columns(oracle::random_matrix(rng, N, k));

        const AlgebraBasis hull = psi_invariant_hull(B, psi, N);

        Eigen::MatrixXd powers(N, N * B.dimension());
        Eigen::MatrixXd block = B.vectors;
        for (int p = 0; p < N; ++p) {
            powers.middleCols(p * B.dimension(), B.dimension()) = block;
            block = psi * block;
        }
        CHECK(spans_equal(hull, oracle::gs_basis(powers)));

        // Contains span(B), idempotent, fixed by psi.
        for (int j = 0; j < B.dimension(); ++j) CHECK(hull.contains(B.vectors.col(j)));
        CHECK(spans_equal(psi_invariant_hull(hull, psi, N), hull));
        CHECK(spans_equal(span_of_columns(psi * hull.vectors), hull, 1e-6));
    }
}

TEST_CASE("psi_invariant_hull rejects singular psi") {
    const AlgebraBasis b = span_of_columns(Eigen::MatrixXd::Identity(3, 1));
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(3, 3);
    psi(0, 0) = 1.0;
    CHECK_THROWS_AS(psi_invariant_hull(b, psi, 3), SingularAutomorphism);
}

TEST_CASE("bracket on Aff2 matches the structure constants") {
    const LieGroupModel m = make_aff2();
    Eigen::Vector2d x(1, 0), y(0, 1);
    const AlgebraVector r = bracket(m, x, y);
    CHECK(r(0) == doctest::Approx(0.0));
    CHECK(r(1) == doctest::Approx(1.0));
}

TEST_CASE("bracket of a vector with itself vanishes") {
    Rng rng(13);
    for (const LieGroupModel& m : {make_heisenberg(), make_aff2(), make_sl2(), make_rn(4)}) {
        const Eigen::VectorXd x =
            m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
        CHECK(bracket(m, x, x).norm() <= 1e-12);
    }
}

TEST_CASE("Heisenberg bracket agrees with the 3x3 matrix commutator") {
    const LieGroupModel m = make_heisenberg();
    Eigen::Vector3d a(0, 1, 0), b(0, 0, 1);
    const AlgebraVector r = bracket(m, a, b);
    CHECK((r - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-15);

    // Oracle: embed (x1,x2,x3) as [[0,x2,x1],[0,0,x3],[0,0,0]] and commute.
    auto embed = [](const Eigen::Vector3d& v) {
        Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
        M(0, 1) = v(1);
        M(0, 2) = v(0);
        M(1, 2) = v(2);
        return M;
    };
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Vector3d x = oracle::random_matrix(rng, 3, 1);
        const Eigen::Vector3d y = oracle::random_matrix(rng, 3, 1);
        const Eigen::Matrix3d C = embed(x) * embed(y) - embed(y) * embed(x);
        const AlgebraVector got = bracket(m, x, y);
        CHECK((got - Eigen::Vector3d(C(0, 2), C(0, 1), C(1, 2))).norm() <= 1e-12);
    }
}

TEST_CASE("bracket rejects vectors outside the algebra") {
    const LieGroupModel m = make_sl2();
    Eigen::Vector4d not_traceless(1, 0, 0, 1);
    Eigen::Vector4d traceless(1, 0, 0, -1);
    CHECK_THROWS_AS(bracket(m, not_traceless, traceless), NotInAlgebra);
    CHECK_THROWS_AS(bracket(m, traceless, not_traceless), NotInAlgebra);
}

TEST_CASE("bracket is antisymmetric and bilinear") {
    Rng rng(19);
    for (const LieGroupModel& m : {make_heisenberg(), make_aff2(), make_sl2()}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd x = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const Eigen::VectorXd y = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const Eigen::VectorXd z = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const double a = rng.uniform(-2, 2);
            CHECK((bracket(m, x, y) + bracket(m, y, x)).norm() <= 1e-12);
            CHECK((bracket(m, a * x + y, z) - a * bracket(m, x, z) - bracket(m, y, z)).norm() <=
                  1e-10);
        }
    }
}

TEST_CASE("Jacobi identity residual stays below 1e-9 relative") {
    Rng rng(23);
    for (const LieGroupModel& m : {make_heisenberg(), make_aff2(), make_sl2(), make_rn(3)}) {
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd x = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const Eigen::VectorXd y = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const Eigen::VectorXd z = m.algebra_basis * oracle::random_matrix(rng, m.group_dim, 1);
            const double res = (bracket(m, x, bracket(m, y, z)) +
                                bracket(m, y, bracket(m, z, x)) +
                                bracket(m, z, bracket(m, x, y)))
                                   .norm();
            CHECK(res <= 1e-9 * std::max(1e-30, x.norm() * y.norm() * z.norm()));
        }
    }
}

TEST_CASE("subalgebra_closure on an abelian model returns the generators' span") {
    Rng rng(29);
    const LieGroupModel m = make_rn(4);
    const AlgebraBasis gen = span_of_columns(oracle::random_matrix(rng, 4, 2));
    CHECK(spans_equal(subalgebra_closure(m, gen), gen));
}

TEST_CASE("subalgebra_closure generates the full Heisenberg algebra") {
    const LieGroupModel m = make_heisenberg();
    Eigen::MatrixXd gen(3, 2);
    gen.col(0) << 0, 1, 0;
    gen.col(1) << 0, 0, 1;
    CHECK(subalgebra_closure(m, span_of_columns(gen)).dimension() == 3);
}

TEST_CASE("subalgebra_closure generates the full Aff2 algebra") {
    const LieGroupModel m = make_aff2();
    Eigen::MatrixXd gen(2, 2);
    gen.col(0) << 1, 0;
    gen.col(1) << 1, 2;
    CHECK(subalgebra_closure(m, span_of_columns(gen)).dimension() == 2);
}

TEST_CASE("subalgebra_closure output is bracket-closed and idempotent") {
    Rng rng(31);
    for (const LieGroupModel& m : {make_heisenberg(), make_aff2(), make_sl2()}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int k = rng.uniform_int(1, m.group_dim);
            const AlgebraBasis gen =
                span_of_columns(m.algebra_basis * oracle::random_matrix(rng, m.group_dim, k));
            const AlgebraBasis S = subalgebra_closure(m, gen);

            for (int j = 0; j < gen.dimension(); ++j) CHECK(S.contains(gen.vectors.col(j)));
            for (int i = 0; i < S.dimension(); ++i)
                for (int j = i + 1; j < S.dimension(); ++j)
                    CHECK(S.contains(bracket(m, S.vectors.col(i), S.vectors.col(j))));
            CHECK(spans_equal(subalgebra_closure(m, S), S));
        }
    }
}
