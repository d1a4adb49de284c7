#include "epkit/io.hpp"
#include "epkit/witness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

namespace {

using namespace epkit;

struct CommonOpts {
    std::string matrix_path;
    std::string backend_flag;
    std::string out_path;
    Tolerance tol;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_matrix = true) {
    if (with_matrix) {
        cmd->add_option("matrix", o.matrix_path, "matrix JSON file, or a directory of them")
            ->required();
    }
    cmd->add_option("--backend", o.backend_flag, "computation backend")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--tol-rank", o.tol.rank_rel, "relative rank threshold");
    cmd->add_option("--tol-residual", o.tol.residual_rel, "relative residual threshold");
    cmd->add_option("--tol-psd", o.tol.psd_rel, "relative PSD eigenvalue floor");
    cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
}

std::optional<Backend> flag_backend(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s == "exact" ? Backend::exact : Backend::fp64;
}

std::optional<Backend> env_default_backend() {
    const char* v = std::getenv("EPKIT_DEFAULT_BACKEND");
    if (!v || !*v) return std::nullopt;
    std::string s(v);
    if (s == "exact") return Backend::exact;
    if (s == "float") return Backend::fp64;
    throw FileFormatError("EPKIT_DEFAULT_BACKEND must be \"exact\" or \"float\", got \"" + s + "\"");
}

void emit(const Json& report, const std::string& out_path) {
    const std::string text = dump_report(report);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw FileFormatError("cannot open output file: " + out_path);
    f << text;
}

template <class S>
Polynomial<S> coerce_poly(const PolyValue& pv) {
    if constexpr (scalar_traits<S>::is_exact) {
        if (!std::holds_alternative<ExactPoly>(pv)) {
            throw FileFormatError("a decimal polynomial cannot be used with the exact backend");
        }
        return std::get<ExactPoly>(pv);
    } else {
        if (std::holds_alternative<FloatPoly>(pv)) return std::get<FloatPoly>(pv);
        return to_float(std::get<ExactPoly>(pv));
    }
}

// Each command builds a (report, exit code) pair for one matrix; a driver
// handles single-file versus directory batches and emission.
using Built = std::pair<Json, int>;

template <class S>
Built build_pinv(const Matrix<S>& t, const CommonOpts& o) {
    Matrix<S> tp = moore_penrose(t, o.tol);
    auto res = penrose_residuals(t, tp);
    Json rep = report_envelope("pinv", scalar_traits<S>::backend, o.tol);
    rep["input"] = Json{{"matrix", matrix_to_json(t)}};
    rep["pinv"] = matrix_to_json(tp);
    Json jres = Json::array();
    for (double r : res) jres.push_back(render_residual(r));
    rep["penrose_residuals"] = std::move(jres);
    return {std::move(rep), 0};
}

template <class S>
Built build_classify(const Matrix<S>& t, const std::optional<PolyValue>& pv, unsigned n,
                     const CommonOpts& o) {
    std::optional<Polynomial<S>> p;
    if (pv) p = coerce_poly<S>(*pv);
    ClassReport<S> report = classify(t, p, n, o.tol);
    Json rep = report_envelope("classify", scalar_traits<S>::backend, o.tol);
    Json input;
    input["matrix"] = matrix_to_json(t);
    if (p) input["poly"] = render_polynomial(*p);
    input["n"] = n;
    rep["input"] = std::move(input);
    rep["classes"] = class_report_to_json(report);
    rep["consensus"] = report.all_consensus();
    return {std::move(rep), report.all_consensus() ? 0 : 2};
}

template <class S>
Built build_blockrep(const Matrix<S>& t, const PolyValue& pv, const CommonOpts& o) {
    Polynomial<S> p = coerce_poly<S>(pv);
    BlockRep<S> rep = orthodecompose(t, o.tol);
    RepCriterion rc = rep_criterion(t, p, o.tol);
    Matrix<S> assembled = pinv_from_blocks(rep);
    Matrix<S> direct = moore_penrose(t, o.tol);

    Json out = report_envelope("blockrep", scalar_traits<S>::backend, o.tol);
    out["input"] = Json{{"matrix", matrix_to_json(t)}, {"poly", render_polynomial(p)}};
    out["blockrep"] = blockrep_to_json(rep);
    Json jc;
    jc["q"] = render_polynomial(q_reduce(p));
    jc["block_zero"] = rc.block_zero;
    jc["block_residual"] = render_residual(rc.block_residual);
    jc["equi_ii"] = rc.equi_ii;
    jc["equi_ii_residual"] = render_residual(rc.equi_ii_residual);
    jc["equi_iii"] = rc.equi_iii;
    jc["equi_iii_residual"] = render_residual(rc.equi_iii_residual);
    jc["defining"] = rc.defining;
    jc["agree"] = rc.agree;
    out["rep_criterion"] = std::move(jc);
    out["pinv_reconstruction_residual"] = render_residual(residual_of(assembled, direct));

    const bool p0_zero = scalar_traits<S>::is_zero(p.constant_term());
    return {std::move(out), (p0_zero && !rc.agree) ? 2 : 0};
}

template <class S>
Built build_verify(const Matrix<S>& t, const PolyValue& pv, unsigned n, const CommonOpts& o) {
    Polynomial<S> p = coerce_poly<S>(pv);
    ClassReport<S> report = classify(t, std::optional<Polynomial<S>>(p), n, o.tol);
    RepCriterion rc = rep_criterion(t, p, o.tol);
    AuditReport audit = implication_audit(t, p, n, o.tol);
    auto inclusion = range_included(poly_eval(p, t), adjoint(t), o.tol);

    const bool p0_zero = scalar_traits<S>::is_zero(p.constant_term());
    const bool rep_ok = p0_zero ? rc.agree : true;
    const bool ok = report.all_consensus() && rep_ok && audit.ok;

    Json out = report_envelope("verify", scalar_traits<S>::backend, o.tol);
    out["input"] = Json{{"matrix", matrix_to_json(t)}, {"poly", render_polynomial(p)}, {"n", n}};
    out["classes"] = class_report_to_json(report);
    out["consensus"] = report.all_consensus();
    out["rep_criterion_agrees"] = rc.agree;
    out["range_inclusion"] = inclusion_to_json(inclusion); // R(p(T)) in R(T*)
    out["audit"] = audit_to_json(audit);
    out["ok"] = ok;
    return {std::move(out), ok ? 0 : 2};
}

template <class S>
Built build_witness(const SeparationQuery& q, const PolyValue& pv, const std::string& seed_text,
                    unsigned threads, const CommonOpts& o) {
    Polynomial<S> p = coerce_poly<S>(pv);
    auto result = search_separation(q, p, o.tol, threads);

    Json out = report_envelope("witness", scalar_traits<S>::backend, o.tol);
    Json input;
    input["query"] = q.must_hold;
    Json dims = Json::array();
    for (std::size_t d : q.dims) dims.push_back(d);
    input["dims"] = std::move(dims);
    input["budget"] = q.budget;
    input["seed"] = seed_text;
    input["n"] = q.n;
    input["entry_bound"] = q.entry_bound;
    input["include_fixtures"] = q.include_fixtures;
    input["poly"] = render_polynomial(p);
    out["input"] = std::move(input);
    out["found"] = result.has_value();
    if (result) {
        out["candidate_index"] = result->candidate_index;
        out["from_fixture"] = result->from_fixture;
        out["witness"] = matrix_to_json(result->witness);
        out["classes"] = class_report_to_json(result->report);
    } else {
        out["message"] = "not found";
    }
    return {std::move(out), 0};
}

// Apply `build` to one matrix file or, in batch mode, to every *.json in a
// directory (sorted by name). The batch report wraps the per-file reports;
// the exit code is the worst per-file code.
template <class Build>
int drive(const CommonOpts& o, const std::optional<Backend>& env_default, Build&& build) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(o.matrix_path)) {
        MatrixValue m = load_matrix_file(o.matrix_path, flag_backend(o.backend_flag), env_default);
        Built built = std::visit([&](const auto& t) { return build(t); }, m);
        emit(built.first, o.out_path);
        return built.second;
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(o.matrix_path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw FileFormatError("no .json matrix files in " + o.matrix_path);

    int worst = 0;
    Json batch;
    batch["tool"] = "epkit";
    batch["version"] = kVersion;
    batch["batch"] = true;
    Json reports = Json::array();
    for (const auto& file : files) {
        MatrixValue m = load_matrix_file(file.string(), flag_backend(o.backend_flag), env_default);
        Built built = std::visit([&](const auto& t) { return build(t); }, m);
        worst = std::max(worst, built.second);
        Json item;
        item["file"] = file.filename().string();
        item["report"] = std::move(built.first);
        reports.push_back(std::move(item));
    }
    batch["reports"] = std::move(reports);
    emit(batch, o.out_path);
    return worst;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"epkit: Moore-Penrose inverses and EP-type operator classification"};
    app.require_subcommand(1);

    CommonOpts pinv_o, classify_o, blockrep_o, verify_o, witness_o;
    std::string classify_poly, blockrep_poly, verify_poly, witness_poly, witness_query;
    unsigned classify_n = 1, verify_n = 1, witness_n = 1;
    std::vector<std::size_t> witness_dims{3, 4};
    std::size_t witness_budget = 1000;
    std::string witness_seed = "0";
    long witness_bound = 3;
    unsigned witness_threads = 0;

    CLI::App* c_pinv = app.add_subcommand("pinv", "Moore-Penrose inverse and Penrose residuals");
    add_common(c_pinv, pinv_o);

    CLI::App* c_classify = app.add_subcommand("classify", "operator class report");
    add_common(c_classify, classify_o);
    c_classify->add_option("--poly", classify_poly, "polynomial p(t)");
    c_classify->add_option("--n", classify_n, "power for the n-EP / n-hypo-EP classes");

    CLI::App* c_blockrep = app.add_subcommand("blockrep", "orthogonal-decomposition blocks");
    add_common(c_blockrep, blockrep_o);
    c_blockrep->add_option("--poly", blockrep_poly, "polynomial p(t)")->required();

    CLI::App* c_verify =
        app.add_subcommand("verify", "characterization agreement and implication audit");
    add_common(c_verify, verify_o);
    c_verify->add_option("--poly", verify_poly, "polynomial p(t)")->required();
    c_verify->add_option("--n", verify_n, "power for the n-EP / n-hypo-EP classes");

    CLI::App* c_witness =
        app.add_subcommand("witness", "seeded search for a class-separating matrix");
    add_common(c_witness, witness_o, /*with_matrix=*/false);
    c_witness->add_option("--query", witness_query, "conjunction of class atoms, e.g. \"pHEP&!HEP\"")
        ->required();
    c_witness->add_option("--dims", witness_dims, "candidate dimensions")->delimiter(',');
    c_witness->add_option("--budget", witness_budget, "number of candidates");
    c_witness->add_option("--seed", witness_seed, "64-bit seed, or \"fixture\" to inject fixtures");
    c_witness->add_option("--poly", witness_poly, "polynomial p(t) for pEP/pHEP atoms");
    c_witness->add_option("--n", witness_n, "power for nEP/nHEP atoms");
    c_witness->add_option("--entry-bound", witness_bound, "integer entry bound of the generator");
    c_witness->add_option("--threads", witness_threads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::optional<Backend> env_default = env_default_backend();
    auto parse_poly_opt = [](const std::string& text) -> std::optional<PolyValue> {
        if (text.empty()) return std::nullopt;
        return parse_polynomial(text);
    };

    if (c_pinv->parsed()) {
        pinv_o.tol.validate();
        return drive(pinv_o, env_default, [&](const auto& t) { return build_pinv(t, pinv_o); });
    }
    if (c_classify->parsed()) {
        classify_o.tol.validate();
        auto pv = parse_poly_opt(classify_poly);
        return drive(classify_o, env_default,
                     [&](const auto& t) { return build_classify(t, pv, classify_n, classify_o); });
    }
    if (c_blockrep->parsed()) {
        blockrep_o.tol.validate();
        PolyValue pv = parse_polynomial(blockrep_poly);
        return drive(blockrep_o, env_default,
                     [&](const auto& t) { return build_blockrep(t, pv, blockrep_o); });
    }
    if (c_verify->parsed()) {
        verify_o.tol.validate();
        PolyValue pv = parse_polynomial(verify_poly);
        return drive(verify_o, env_default,
                     [&](const auto& t) { return build_verify(t, pv, verify_n, verify_o); });
    }

    // witness
    witness_o.tol.validate();
    SeparationQuery q;
    q.must_hold = witness_query;
    q.dims = witness_dims;
    q.budget = witness_budget;
    q.n = witness_n;
    q.entry_bound = witness_bound;
    if (witness_seed == "fixture") {
        q.include_fixtures = true;
        q.seed = 0;
    } else {
        auto [ptr, ec] =
            std::from_chars(witness_seed.data(), witness_seed.data() + witness_seed.size(), q.seed);
        if (ec != std::errc{} || ptr != witness_seed.data() + witness_seed.size()) {
            throw FileFormatError("--seed must be a 64-bit unsigned integer or \"fixture\"");
        }
    }

    std::vector<QueryTerm> terms = parse_query(q.must_hold); // validate before searching
    bool needs_poly = false;
    for (const QueryTerm& t : terms) {
        needs_poly = needs_poly || t.atom == ClassAtom::PEP || t.atom == ClassAtom::PHEP;
    }
    if (needs_poly && witness_poly.empty()) {
        throw FileFormatError("--poly is required when the query references pEP or pHEP");
    }
    PolyValue pv =
        witness_poly.empty() ? PolyValue(ExactPoly::t_power(1)) : parse_polynomial(witness_poly);

    const Backend backend =
        flag_backend(witness_o.backend_flag).value_or(env_default.value_or(Backend::exact));
    Built built = backend == Backend::exact
                      ? build_witness<ExactScalar>(q, pv, witness_seed, witness_threads, witness_o)
                      : build_witness<FloatScalar>(q, pv, witness_seed, witness_threads, witness_o);
    emit(built.first, witness_o.out_path);
    return built.second;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const epkit::ConsensusError& e) {
        std::cerr << "epkit: consensus failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "epkit: error: " << e.what() << "\n";
        return 1;
    }
}
