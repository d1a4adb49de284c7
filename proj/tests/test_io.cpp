#include <doctest.h>

#include "epkit/io.hpp"
#include "helpers.hpp"

using namespace epkit;
using namespace epkit::testing;

namespace {

Json example2_file() {
    return Json{{"rows", 2},
                {"cols", 2},
                {"backend", "exact"},
                {"entries", Json::array({Json::array({"1", "1"}), Json::array({"0", "0"})})}};
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("matrix files round-trip in both backends") {
    MatrixValue v = matrix_from_json(example2_file(), std::nullopt, std::nullopt);
    REQUIRE(std::holds_alternative<ExactMatrix>(v));
    const ExactMatrix& m = std::get<ExactMatrix>(v);
    CHECK(m == fixture_matrix("example2"));

    // to_json -> from_json is the identity
    MatrixValue again = matrix_from_json(matrix_to_json(m), std::nullopt, std::nullopt);
    CHECK(std::get<ExactMatrix>(again) == m);

    FloatMatrix f(2, 2);
    f(0, 0) = FloatScalar(0.5, -1.25);
    f(1, 1) = FloatScalar(3.0, 0.0);
    MatrixValue fv = matrix_from_json(matrix_to_json(f), std::nullopt, std::nullopt);
    REQUIRE(std::holds_alternative<FloatMatrix>(fv));
    CHECK(std::get<FloatMatrix>(fv) == f);
}

TEST_CASE("backend resolution precedence") {
    Json file = example2_file();

    // forced float converts exact entries
    MatrixValue forced = matrix_from_json(file, Backend::fp64, std::nullopt);
    CHECK(std::holds_alternative<FloatMatrix>(forced));

    // file hint wins over env default
    MatrixValue hinted = matrix_from_json(file, std::nullopt, Backend::fp64);
    CHECK(std::holds_alternative<ExactMatrix>(hinted));

    // without hint, env default applies to neutral integer entries
    file.erase("backend");
    MatrixValue env = matrix_from_json(file, std::nullopt, Backend::fp64);
    CHECK(std::holds_alternative<FloatMatrix>(env));
    MatrixValue plain = matrix_from_json(file, std::nullopt, std::nullopt);
    CHECK(std::holds_alternative<ExactMatrix>(plain));

    // decimal entries force the float backend
    Json dec = Json{{"rows", 1}, {"cols", 1}, {"entries", Json::array({Json::array({"0.5"})})}};
    CHECK(std::holds_alternative<FloatMatrix>(matrix_from_json(dec, std::nullopt, std::nullopt)));

    // ... and cannot be forced exact
    CHECK_THROWS_AS(matrix_from_json(dec, Backend::exact, std::nullopt), FileFormatError);
    Json dec_hint = dec;
    dec_hint["backend"] = "exact";
    CHECK_THROWS_AS(matrix_from_json(dec_hint, std::nullopt, std::nullopt), FileFormatError);
}

TEST_CASE("matrix file validation errors") {
    CHECK_THROWS_AS(matrix_from_json(Json::array(), std::nullopt, std::nullopt), FileFormatError);
    CHECK_THROWS_AS(matrix_from_json(Json{{"rows", 1}, {"cols", 1}}, std::nullopt, std::nullopt),
                    FileFormatError);

    Json zero_rows{{"rows", 0}, {"cols", 1}, {"entries", Json::array()}};
    CHECK_THROWS_AS(matrix_from_json(zero_rows, std::nullopt, std::nullopt), FileFormatError);

    Json ragged{{"rows", 2},
                {"cols", 2},
                {"entries", Json::array({Json::array({"1", "2"}), Json::array({"3"})})}};
    CHECK_THROWS_AS(matrix_from_json(ragged, std::nullopt, std::nullopt), FileFormatError);

    Json nonstring{{"rows", 1}, {"cols", 1}, {"entries", Json::array({Json::array({1})})}};
    CHECK_THROWS_AS(matrix_from_json(nonstring, std::nullopt, std::nullopt), FileFormatError);

    Json badscalar{{"rows", 1}, {"cols", 1}, {"entries", Json::array({Json::array({"1+"})})}};
    CHECK_THROWS_AS(matrix_from_json(badscalar, std::nullopt, std::nullopt), FileFormatError);

    Json badbackend = example2_file();
    badbackend["backend"] = "quantum";
    CHECK_THROWS_AS(matrix_from_json(badbackend, std::nullopt, std::nullopt), FileFormatError);
}

TEST_CASE("reports serialize deterministically") {
    Tolerance tol;
    ExactMatrix t = fixture_matrix("example1");
    ExactPoly p = fixture_poly("example1_poly");

    auto build = [&]() {
        Json rep = report_envelope("classify", Backend::exact, tol);
        rep["input"] = Json{{"matrix", matrix_to_json(t)}, {"poly", render_polynomial(p)}};
        rep["classes"] = class_report_to_json(classify(t, std::optional<ExactPoly>(p), 1, tol));
        return dump_report(rep);
    };
    const std::string a = build();
    const std::string b = build();
    CHECK(a == b);
    CHECK(a.find("\"tool\": \"epkit\"") != std::string::npos);
    CHECK(a.find("\"version\"") != std::string::npos);
    CHECK(a.find("\"tolerances\"") != std::string::npos);

    // key order is insertion order, so the envelope starts the report
    CHECK(a.rfind("{\n  \"tool\"", 0) == 0);
}

TEST_CASE("report fragments carry the documented fields") {
    Tolerance tol;
    Json v = verdicts_to_json(is_hypo_EP(fixture_matrix("example2"), tol));
    CHECK(v["class"] == "hypo-EP");
    CHECK(v["consensus"] == true);
    CHECK(v["verdict"] == false);
    CHECK(v["characterizations"].size() == 3);
    for (const auto& c : v["characterizations"]) {
        CHECK(c.contains("id"));
        CHECK(c.contains("residual"));
    }

    Json a = audit_to_json(
        implication_audit(fixture_matrix("example2"), fixture_poly("example2_poly"), 1, tol));
    CHECK(a["ok"] == true);
    CHECK(a["rows"].is_array());

    auto incl = range_included(fixture_matrix("nilpotent2"),
                               adjoint(fixture_matrix("nilpotent2")), tol);
    Json ij = inclusion_to_json(incl);
    CHECK(ij["holds"] == false);
    CHECK(ij["witness"]["column"] == 1);

    Json br = blockrep_to_json(orthodecompose(fixture_matrix("example2"), tol));
    CHECK(br["rank"] == 1);
    CHECK(br["t1"]["entries"][0][0] == "1");
    CHECK(br["d"]["entries"][0][0] == "2");

    // exact values render as fraction strings
    Json pj = matrix_to_json(moore_penrose(fixture_matrix("example2"), tol));
    CHECK(pj["entries"][0][0] == "1/2");
}

} // TEST_SUITE
