#include <doctest.h>

#include "epkit/blockrep.hpp"
#include "helpers.hpp"

using namespace epkit;
using namespace epkit::testing;

TEST_SUITE("blockrep") {

TEST_CASE("orthodecompose of the example2 fixture") {
    Tolerance tol;

    // float: orthonormal singular-vector basis; T1 = [1], D = [2], |T2| = 1
    FloatMatrix ft = to_float(fixture_matrix("example2"));
    BlockRep<FloatScalar> frep = orthodecompose(ft, tol);
    REQUIRE(frep.rank == 1);
    CHECK(std::abs(frep.t1(0, 0) - FloatScalar(1.0)) < 1e-12);
    CHECK(std::abs(frep.d(0, 0) - FloatScalar(2.0)) < 1e-12);
    CHECK(std::norm(frep.t2(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(frep.gram_corange(0, 0) - FloatScalar(1.0)) < 1e-12);

    // exact: unnormalized basis (1,1) / (-1,1) with Gram diag(2), diag(2)
    ExactMatrix t = fixture_matrix("example2");
    BlockRep<ExactScalar> rep = orthodecompose(t, tol);
    REQUIRE(rep.rank == 1);
    CHECK(rep.t1(0, 0) == ei(1));
    CHECK(rep.d(0, 0) == ei(2));
    CHECK(rep.gram_corange(0, 0) == ei(2));
    CHECK(rep.gram_kernel(0, 0) == ei(2));
    CHECK(rep.t2(0, 0) * rep.t2(0, 0).conj() == ei(1));
}

TEST_CASE("orthodecompose of an invertible matrix") {
    Tolerance tol;
    ExactMatrix t = exact_mat({{1, 2}, {3, 4}});
    BlockRep<ExactScalar> rep = orthodecompose(t, tol);
    CHECK(rep.rank == 2);
    CHECK(rep.kernel_basis.empty());
    CHECK(rep.t2.rows() == 0);
    // with no kernel block, D = T1~ T1
    ExactMatrix t1s = ExactMatrix(adjoint(rep.t1));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            t1s(i, j) = t1s(i, j) * rep.gram_corange(j, j) / rep.gram_corange(i, i);
    CHECK(rep.d == t1s * rep.t1);
}

TEST_CASE("orthodecompose of the zero matrix") {
    Tolerance tol;
    BlockRep<ExactScalar> rep = orthodecompose(ExactMatrix(3, 3), tol);
    CHECK(rep.rank == 0);
    CHECK(rep.corange_basis.empty());
    CHECK(rep.kernel_basis.size() == 3);
    CHECK(rep.d.rows() == 0);
    CHECK(pinv_from_blocks(rep).is_zero());
}

TEST_CASE("the block coordinates reproduce T in the ambient space") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 12; ++s) {
        const std::size_t dim = 2 + s % 4;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 2100 + s);
        BlockRep<ExactScalar> rep = orthodecompose(t, tol);

        ExactMatrix coord(dim, dim);
        for (std::size_t i = 0; i < rep.rank; ++i)
            for (std::size_t j = 0; j < rep.rank; ++j) coord(i, j) = rep.t1(i, j);
        for (std::size_t i = 0; i < dim - rep.rank; ++i)
            for (std::size_t j = 0; j < rep.rank; ++j) coord(rep.rank + i, j) = rep.t2(i, j);
        CHECK(ambient_from_blocks(rep, coord) == t);
    }
}

TEST_CASE("pinv_from_blocks matches moore_penrose") {
    Tolerance tol;
    // Paper examples first.
    ExactMatrix t2 = fixture_matrix("example2");
    ExactMatrix expected(2, 2);
    expected(0, 0) = frac(1, 2);
    expected(1, 0) = frac(1, 2);
    CHECK(pinv_from_blocks(orthodecompose(t2, tol)) == expected);

    CHECK(pinv_from_blocks(orthodecompose(ExactMatrix::identity(3), tol)) ==
          ExactMatrix::identity(3));

    ExactMatrix t1 = fixture_matrix("example1");
    CHECK(pinv_from_blocks(orthodecompose(t1, tol)) == example1_pinv());
    FloatMatrix ft1 = to_float(t1);
    CHECK(frobenius(pinv_from_blocks(orthodecompose(ft1, tol)) - moore_penrose(ft1, tol)) <
          1e-10);

    // Exact equality holds on the whole seeded corpus (the unnormalized
    // Gram-Schmidt never leaves the rationals).
    for (std::uint64_t s = 0; s < 15; ++s) {
        const std::size_t dim = 2 + s % 4;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 2200 + s);
        CHECK(pinv_from_blocks(orthodecompose(t, tol)) == moore_penrose(t, tol));

        FloatMatrix f = to_float(t);
        CHECK(frobenius(pinv_from_blocks(orthodecompose(f, tol)) - moore_penrose(f, tol)) <=
              tol.residual_rel * (1.0 + frobenius(f)));
    }
}

TEST_CASE("q_reduce") {
    CHECK(q_reduce(fixture_poly("example1_poly")) == ExactPoly({ei(0), ei(-1), ei(1)}));
    CHECK(q_reduce(fixture_poly("example2_poly")) ==
          ExactPoly({ei(-1, -4), ei(0, 4), ei(1)}));
    CHECK(q_reduce(ExactPoly({ei(5)})).is_zero());
    CHECK(q_reduce(ExactPoly()).is_zero());
}

TEST_CASE("rep_criterion on the paper fixtures") {
    Tolerance tol;

    // q(T1) = q(1) = 0 for the example2 polynomial
    auto rc2 = rep_criterion(fixture_matrix("example2"), fixture_poly("example2_poly"), tol);
    CHECK(rc2.block_zero);
    CHECK(rc2.block_residual == 0.0);
    CHECK(rc2.defining);

    // p = t: q = 1, T2 != 0
    auto rct = rep_criterion(fixture_matrix("example2"), ExactPoly::t_power(1), tol);
    CHECK_FALSE(rct.block_zero);
    CHECK_FALSE(rct.defining);
    CHECK(rct.agree);

    auto rc1 = rep_criterion(fixture_matrix("example1"), fixture_poly("example1_poly"), tol);
    CHECK(rc1.block_zero);
    CHECK(rc1.equi_ii);
    CHECK(rc1.equi_iii);
    CHECK(rc1.agree);

    // float mode: q(T1) vanishes within 1e-12
    auto rcf = rep_criterion(to_float(fixture_matrix("example2")),
                             to_float(fixture_poly("example2_poly")), tol);
    CHECK(rcf.block_residual <= 1e-12);
    CHECK(rcf.block_zero);
}

TEST_CASE("rep criterion matches the defining commutation on a seeded corpus") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const std::size_t dim = 2 + s % 4;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 2300 + s, 2);
        ExactPoly p = seeded_poly(2400 + s); // p(0) = 0
        auto rc = rep_criterion(t, p, tol);
        CHECK(rc.agree);
        CHECK(rc.block_zero == phep_defining(t, p, tol));
        CHECK(rc.equi_ii == rc.equi_iii);
    }
}

TEST_CASE("equi identities specialized to p = t^n match n-hypo-EP") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 15; ++s) {
        const std::size_t dim = 2 + s % 3;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 2600 + s, 2);
        ExactMatrix ts = adjoint(t);
        ExactMatrix tp = moore_penrose(t, tol);
        for (unsigned n = 1; n <= 3; ++n) {
            bool nhep = require_consensus(is_n_hypo_EP(t, n, tol));
            auto rc = rep_criterion(t, ExactPoly::t_power(n), tol);
            CHECK(rc.agree);
            CHECK(rc.block_zero == nhep);
            // the specialized ambient identities, written out directly
            ExactMatrix tn = matrix_power(t, n);
            CHECK((tp * tn * t * ts * t == tn * ts * t) == nhep);
            CHECK((tp * tn * t * ts == tn * ts) == nhep);
        }
    }
}

TEST_CASE("D is invertible whenever rank >= 1") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 12; ++s) {
        const std::size_t dim = 2 + s % 4;
        ExactMatrix t = seeded_random<ExactScalar>(dim, 1 + s % dim, 2500 + s);
        BlockRep<ExactScalar> rep = orthodecompose(t, tol);
        REQUIRE(rep.rank >= 1);
        CHECK_NOTHROW(gauss_inverse(rep.d));
    }
}

TEST_CASE("block_form_of_poly") {
    Tolerance tol;

    auto [pt1, a0] = block_form_of_poly(fixture_matrix("example2"),
                                        fixture_poly("example2_poly"), tol);
    CHECK(pt1 == ExactMatrix{{ei(2)}});
    CHECK(a0 == ExactMatrix{{ei(2)}});

    auto [pt1b, a0b] = block_form_of_poly(fixture_matrix("example1"),
                                          fixture_poly("example1_poly"), tol);
    CHECK(a0b.is_zero()); // a_0 = 0
    CHECK(a0b.rows() == 1);

    auto [pt1c, a0c] =
        block_form_of_poly(ExactMatrix::identity(2), ExactPoly::t_power(1), tol);
    CHECK(pt1c == ExactMatrix::identity(2));
    CHECK(a0c.rows() == 0); // no kernel block

    CHECK_THROWS_AS(
        block_form_of_poly(fixture_matrix("nilpotent2"), ExactPoly::t_power(1), tol),
        std::invalid_argument);
}

} // TEST_SUITE
