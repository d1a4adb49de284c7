#include <doctest.h>

#include "epkit/pinv.hpp"
#include "epkit/ranges.hpp"
#include "helpers.hpp"

using namespace epkit;
using namespace epkit::testing;

TEST_SUITE("pinv") {

TEST_CASE("full rank factorization") {
    Tolerance tol;
    auto frf = full_rank_factorization(fixture_matrix("example2"), tol);
    CHECK(frf.rank == 1);
    CHECK(frf.f == exact_mat({{1}, {0}}));
    CHECK(frf.g == exact_mat({{1, 1}}));

    auto id = full_rank_factorization(ExactMatrix::identity(3), tol);
    CHECK(id.rank == 3);
    CHECK(id.f == ExactMatrix::identity(3));
    CHECK(id.g == ExactMatrix::identity(3));

    auto zero = full_rank_factorization(ExactMatrix(2, 2), tol);
    CHECK(zero.rank == 0);
    CHECK(zero.f.cols() == 0);
    CHECK(zero.g.rows() == 0);

    // F*G reproduces the input (both backends).
    for (std::uint64_t s = 0; s < 10; ++s) {
        ExactMatrix m = seeded_random<ExactScalar>(2 + s % 4, s % 4, 100 + s);
        auto f = full_rank_factorization(m, tol);
        CHECK(f.f * f.g == m);
        FloatMatrix mf = to_float(m);
        auto ff = full_rank_factorization(mf, tol);
        CHECK(frobenius(ff.f * ff.g - mf) <= tol.residual_rel * (1.0 + frobenius(mf)));
    }
}

TEST_CASE("moore_penrose reproduces the paper inverses") {
    Tolerance tol;
    CHECK(moore_penrose(fixture_matrix("example1"), tol) == example1_pinv());

    ExactMatrix tp2 = moore_penrose(fixture_matrix("example2"), tol);
    ExactMatrix expected(2, 2);
    expected(0, 0) = frac(1, 2);
    expected(1, 0) = frac(1, 2);
    CHECK(tp2 == expected);

    ExactMatrix z = moore_penrose(ExactMatrix(2, 3), tol);
    CHECK(z.rows() == 3);
    CHECK(z.cols() == 2);
    CHECK(z.is_zero());
}

TEST_CASE("penrose residuals") {
    Tolerance tol;
    ExactMatrix t = fixture_matrix("example1");
    auto res = penrose_residuals(t, example1_pinv());
    for (double r : res) CHECK(r == 0.0);

    auto res_id = penrose_residuals(ExactMatrix::identity(3), ExactMatrix::identity(3));
    for (double r : res_id) CHECK(r == 0.0);

    auto res_zero = penrose_residuals(t, ExactMatrix(4, 4));
    CHECK(res_zero[0] == doctest::Approx(frobenius(t)));

    CHECK_THROWS_AS(penrose_residuals(t, ExactMatrix(3, 3)), std::invalid_argument);
}

TEST_CASE("projectors") {
    Tolerance tol;
    ExactMatrix t1 = fixture_matrix("example1");
    ExactMatrix expected_rp(4, 4);
    expected_rp(0, 0) = ei(1);
    expected_rp(1, 1) = ei(1);
    expected_rp(2, 2) = ei(1);
    CHECK(range_projector(t1, tol) == expected_rp);

    ExactMatrix t2 = fixture_matrix("example2");
    ExactMatrix expected_cp(2, 2);
    expected_cp(0, 0) = frac(1, 2);
    expected_cp(0, 1) = frac(1, 2);
    expected_cp(1, 0) = frac(1, 2);
    expected_cp(1, 1) = frac(1, 2);
    CHECK(corange_projector(t2, tol) == expected_cp);

    CHECK(range_projector(ExactMatrix::identity(3), tol) == ExactMatrix::identity(3));
}

TEST_CASE("cauchy dual") {
    Tolerance tol;
    ExactMatrix t = fixture_matrix("example2");
    ExactMatrix expected(2, 2);
    expected(0, 0) = frac(1, 2);
    expected(0, 1) = frac(1, 2);
    CHECK(cauchy_dual(t, tol) == expected);

    ExactMatrix u = permutation_phase_unitary(4, 7);
    CHECK(cauchy_dual(u, tol) == u);

    CHECK(cauchy_dual(ExactMatrix(3, 3), tol).is_zero());
}

TEST_CASE("exact pinv properties on seeded matrices") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const std::size_t dim = 2 + s % 7; // up to 8
        ExactMatrix m = seeded_random<ExactScalar>(dim, s % (dim + 1), 200 + s);
        ExactMatrix mp = moore_penrose(m, tol);

        auto res = penrose_residuals(m, mp);
        for (double r : res) CHECK(r == 0.0);

        CHECK(moore_penrose(mp, tol) == m);
        CHECK(moore_penrose(adjoint(m), tol) == adjoint(mp));
        CHECK(cauchy_dual(m, tol) == adjoint(mp));

        ExactMatrix rp = range_projector(m, tol);
        ExactMatrix cp = corange_projector(m, tol);
        CHECK(rp == adjoint(rp));
        CHECK(cp == adjoint(cp));
        CHECK(rp * rp == rp);
        CHECK(cp * cp == cp);
    }
}

TEST_CASE("float pinv properties on seeded matrices") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const std::size_t dim = 2 + s % 7;
        FloatMatrix m = to_float(seeded_random<ExactScalar>(dim, s % (dim + 1), 300 + s));
        FloatMatrix mp = moore_penrose(m, tol);

        const double bound = tol.residual_rel * (1.0 + frobenius(m));
        auto res = penrose_residuals(m, mp);
        for (double r : res) CHECK(r <= bound);

        CHECK(frobenius(cauchy_dual(m, tol) - adjoint(mp)) <= bound);

        FloatMatrix rp = range_projector(m, tol);
        CHECK(frobenius(rp - adjoint(rp)) <= tol.residual_rel * (1.0 + frobenius(rp)));
        CHECK(frobenius(rp * rp - rp) <= tol.residual_rel * (1.0 + frobenius(rp)));
    }
}

TEST_CASE("kernel of T+ equals kernel of T*") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const std::size_t dim = 2 + s % 4;
        ExactMatrix m = seeded_random<ExactScalar>(dim, s % (dim + 1), 400 + s);
        ExactMatrix mp = moore_penrose(m, tol);

        auto k1 = kernel_basis(mp, tol);
        auto k2 = kernel_basis(adjoint(m), tol);
        CHECK(k1.size() == k2.size());
        ExactMatrix b1 = columns_to_matrix(k1, mp.cols());
        ExactMatrix b2 = columns_to_matrix(k2, dim);
        CHECK(range_included(b1, b2, tol).holds);
        CHECK(range_included(b2, b1, tol).holds);
    }
}

} // TEST_SUITE
