#include <doctest.h>

#include "epkit/classes.hpp"
#include "epkit/float_backend.hpp"
#include "helpers.hpp"

using namespace epkit;
using namespace epkit::testing;

TEST_SUITE("classes") {

TEST_CASE("is_EP") {
    Tolerance tol;
    auto id = is_EP(ExactMatrix::identity(3), tol);
    CHECK(id.consensus());
    CHECK(id.verdict());

    auto nil = is_EP(fixture_matrix("nilpotent2"), tol);
    CHECK(nil.consensus());
    CHECK_FALSE(nil.verdict());

    auto ex1 = is_EP(fixture_matrix("example1"), tol);
    CHECK(ex1.consensus());
    CHECK_FALSE(ex1.verdict());
    CHECK(ex1.checks.size() == 3);

    ExactMatrix rect(2, 3);
    CHECK_THROWS_AS(is_EP(rect, tol), std::invalid_argument);
}

TEST_CASE("is_hypo_EP matches the paper examples") {
    Tolerance tol;
    auto ex1 = is_hypo_EP(fixture_matrix("example1"), tol);
    CHECK(ex1.consensus());
    CHECK_FALSE(ex1.verdict());

    auto ex2 = is_hypo_EP(fixture_matrix("example2"), tol);
    CHECK(ex2.consensus());
    CHECK_FALSE(ex2.verdict());

    auto herm = is_hypo_EP(exact_mat({{2, 1}, {1, -1}}), tol);
    CHECK(herm.consensus());
    CHECK(herm.verdict());
}

TEST_CASE("is_SD") {
    Tolerance tol;
    CHECK(is_SD(exact_mat({{1, 0}, {0, 0}}), tol));
    CHECK(is_SD(fixture_matrix("example2"), tol));
    // frozen by direct multiplication of the fixture's T* and T+
    CHECK_FALSE(is_SD(fixture_matrix("example1"), tol));
}

TEST_CASE("is_p_normal") {
    Tolerance tol;
    ExactPoly t2_minus_t({ei(0), ei(-1), ei(1)});
    auto a = is_p_normal(fixture_matrix("example2"), t2_minus_t, tol);
    CHECK(a.consensus());
    CHECK(a.verdict()); // p(T) = T^2 - T = 0

    auto b = is_p_normal(fixture_matrix("nilpotent2"), ExactPoly::t_power(1), tol);
    CHECK(b.consensus());
    CHECK_FALSE(b.verdict());

    auto c = is_p_normal(permutation_phase_unitary(3, 5), ExactPoly::t_power(1), tol);
    CHECK(c.consensus());
    CHECK(c.verdict());
}

TEST_CASE("is_n_EP and is_n_hypo_EP") {
    Tolerance tol;
    ExactMatrix nil = fixture_matrix("nilpotent2");
    CHECK(is_n_EP(nil, 2, tol));
    auto nh2 = is_n_hypo_EP(nil, 2, tol);
    CHECK(nh2.consensus());
    CHECK(nh2.verdict());
    CHECK(nh2.checks.size() == 4);

    CHECK_FALSE(is_n_EP(nil, 1, tol));
    auto nh1 = is_n_hypo_EP(nil, 1, tol);
    CHECK(nh1.consensus());
    CHECK_FALSE(nh1.verdict());

    CHECK(is_n_EP(ExactMatrix::identity(3), 5, tol));
    CHECK(is_n_hypo_EP(ExactMatrix::identity(3), 5, tol).verdict());

    CHECK_THROWS_AS(is_n_EP(nil, 0, tol), std::invalid_argument);
    CHECK_THROWS_AS(is_n_hypo_EP(nil, 0, tol), std::invalid_argument);
}

TEST_CASE("is_p_EP") {
    Tolerance tol;
    ExactMatrix nil = fixture_matrix("nilpotent2");

    auto sq = is_p_EP(nil, ExactPoly::t_power(2), tol);
    CHECK(sq.consensus());
    CHECK(sq.verdict()); // p(T) = 0

    auto lin = is_p_EP(nil, ExactPoly::t_power(1), tol);
    CHECK(lin.consensus());
    CHECK_FALSE(lin.verdict());

    // p(0) != 0: only the defining commutation is evaluated
    auto ex2 = is_p_EP(fixture_matrix("example2"), fixture_poly("example2_poly"), tol);
    CHECK(ex2.consensus());
    CHECK(ex2.verdict()); // p(T) = 2I commutes with everything
    int skipped = 0;
    for (const auto& c : ex2.checks) skipped += c.skipped ? 1 : 0;
    CHECK(skipped == 3);
}

TEST_CASE("is_p_hypo_EP") {
    Tolerance tol;
    auto ex1 = is_p_hypo_EP(fixture_matrix("example1"), fixture_poly("example1_poly"), tol);
    CHECK(ex1.checks.size() == 11);
    CHECK(ex1.consensus());
    CHECK(ex1.verdict());
    for (const auto& c : ex1.checks) {
        CHECK_FALSE(c.skipped);
        CHECK(c.verdict);
        CHECK(c.residual == 0.0);
    }

    auto ex2 = is_p_hypo_EP(fixture_matrix("example2"), fixture_poly("example2_poly"), tol);
    CHECK(ex2.consensus());
    CHECK(ex2.verdict());
    int evaluated = 0;
    for (const auto& c : ex2.checks) evaluated += c.skipped ? 0 : 1;
    CHECK(evaluated == 1); // p(0) = 2: the ten equivalents are skipped

    auto nil = is_p_hypo_EP(fixture_matrix("nilpotent2"), ExactPoly::t_power(1), tol);
    CHECK(nil.consensus());
    CHECK_FALSE(nil.verdict());
}

TEST_CASE("classify aggregates the expected classes") {
    Tolerance tol;
    auto report = classify(fixture_matrix("example1"),
                           std::optional<ExactPoly>(fixture_poly("example1_poly")), 1, tol);
    CHECK(report.classes.size() == 9);
    CHECK(report.all_consensus());
    CHECK(report.find("p-hypo-EP")->verdict());
    CHECK_FALSE(report.find("hypo-EP")->verdict());
    CHECK_FALSE(report.find("EP")->verdict());

    auto no_poly = classify(fixture_matrix("example2"), std::optional<ExactPoly>(), 1, tol);
    CHECK(no_poly.classes.size() == 6);
    CHECK(no_poly.find("p-EP") == nullptr);
}

TEST_CASE("implication audit on the paper fixtures") {
    Tolerance tol;
    auto ex1 = implication_audit(fixture_matrix("example1"), fixture_poly("example1_poly"), 1, tol);
    CHECK(ex1.ok);
    CHECK_FALSE(ex1.aborted);
    bool saw_vacuous_hep = false, saw_pk = false;
    for (const auto& row : ex1.rows) {
        if (row.rule == "hep=>phep") {
            CHECK(row.vacuous); // example1 is not hypo-EP
            saw_vacuous_hep = true;
        }
        if (row.rule.rfind("pk(", 0) == 0) {
            CHECK(row.hypothesis); // example1 is p-HEP, so every p_k row is live
            CHECK(row.pass);
            saw_pk = true;
        }
    }
    CHECK(saw_vacuous_hep);
    CHECK(saw_pk);

    // hermitian matrices are EP, so every implication row passes
    auto herm = implication_audit(exact_mat({{2, 1}, {1, -1}}), seeded_poly(77), 2, tol);
    CHECK(herm.ok);

    // croi: T is 2-EP and p = t^3 + t^2 has lowest live exponent 2
    ExactPoly p_croi({ei(0), ei(0), ei(1), ei(1)});
    auto croi = implication_audit(fixture_matrix("nilpotent2"), p_croi, 2, tol);
    CHECK(croi.ok);
    bool saw_croi = false;
    for (const auto& row : croi.rows) {
        if (row.rule == "croi(m=2)") {
            CHECK(row.hypothesis);
            CHECK(row.conclusion);
            saw_croi = true;
        }
    }
    CHECK(saw_croi);
}

TEST_CASE("audit and consensus over a seeded corpus") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const std::size_t dim = 2 + s % 3;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 8000 + s, 2);
        ExactPoly p = seeded_poly(8100 + s);

        auto report = classify(t, std::optional<ExactPoly>(p), 1 + s % 3, tol);
        CHECK(report.all_consensus());

        auto audit = implication_audit(t, p, 1 + s % 3, tol);
        CHECK(audit.ok);
    }
}

TEST_CASE("hypo-EP forces p-hypo-EP for arbitrary polynomials") {
    Tolerance tol;
    // hermitian, hence hypo-EP; includes p with p(0) != 0
    ExactMatrix h = exact_mat({{1, 2, 0}, {2, -1, 1}, {0, 1, 3}});
    REQUIRE(require_consensus(is_hypo_EP(h, tol)));
    for (std::uint64_t s = 0; s < 20; ++s) {
        ExactPoly base = seeded_poly(8200 + s);
        std::vector<ExactScalar> c = base.coeffs();
        c[0] = ExactScalar(static_cast<long>(s % 5), static_cast<long>(s % 3));
        ExactPoly p(std::move(c));
        CHECK(phep_defining(h, p, tol));
    }
}

TEST_CASE("EP equivalence with the hypo-EP pair") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const std::size_t dim = 2 + s % 3;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 8300 + s, 2);
        bool ep = require_consensus(is_EP(t, tol));
        bool pair = require_consensus(is_hypo_EP(t, tol)) &&
                    require_consensus(is_hypo_EP(adjoint(t), tol));
        CHECK(ep == pair);
    }
}

TEST_CASE("p-EP equivalence with the p-hypo-EP pair") {
    Tolerance tol;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t dim = 2 + s % 3;
        ExactMatrix t = seeded_random<ExactScalar>(dim, s % (dim + 1), 8400 + s, 2);
        ExactPoly p = seeded_poly(8500 + s);
        bool pep = require_consensus(is_p_EP(t, p, tol));
        bool pair = require_consensus(is_p_hypo_EP(t, p, tol)) &&
                    require_consensus(is_p_hypo_EP(adjoint(t), poly_conjugate(p), tol));
        CHECK(pep == pair);
    }
}

TEST_CASE("unitary conjugation preserves the p-hypo-EP verdicts") {
    Tolerance tol;
    ExactMatrix t = fixture_matrix("example1");
    ExactPoly p = fixture_poly("example1_poly");

    CHECK(unitary_conjugation_check(t, p, permutation_phase_unitary(4, 11), tol));
    // plain phase diagonal
    ExactMatrix phase(4, 4);
    phase(0, 0) = ei(0, 1);
    phase(1, 1) = ei(1);
    phase(2, 2) = ei(-1);
    phase(3, 3) = ei(0, -1);
    CHECK(unitary_conjugation_check(t, p, phase, tol));

    FloatMatrix ft = to_float(t);
    FloatPoly fp = to_float(p);
    CHECK(unitary_conjugation_check(ft, fp, random_unitary(4, 99), tol));

    // right shape but not unitary
    ExactMatrix shear = ExactMatrix::identity(4);
    shear(0, 1) = ei(1);
    CHECK_THROWS_AS(unitary_conjugation_check(t, p, shear, tol), std::invalid_argument);
    // shape mismatch
    CHECK_THROWS_AS(unitary_conjugation_check(t, p, permutation_phase_unitary(3, 1), tol),
                    std::invalid_argument);
}

} // TEST_SUITE
