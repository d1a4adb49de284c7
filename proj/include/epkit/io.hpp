#pragma once

#include "epkit/blockrep.hpp"
#include "epkit/classes.hpp"
#include "epkit/matrix.hpp"
#include "epkit/parser.hpp"
#include "epkit/ranges.hpp"
#include "epkit/tolerance.hpp"
#include "epkit/version.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>

namespace epkit {

// Insertion-ordered JSON keeps reports byte-identical across runs.
using Json = nlohmann::ordered_json;

class FileFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using MatrixValue = std::variant<ExactMatrix, FloatMatrix>;

inline Backend backend_of(const MatrixValue& v) {
    return std::holds_alternative<ExactMatrix>(v) ? Backend::exact : Backend::fp64;
}

// Parse a MatrixFile JSON object: rows, cols, entries (nested arrays of
// scalar strings), optional "backend" hint. Backend precedence: the forced
// flag, then the file hint, then float when any entry is a decimal literal,
// then env_default, then exact. Decimal entries cannot be coerced to exact.
MatrixValue matrix_from_json(const Json& file, std::optional<Backend> forced,
                             std::optional<Backend> env_default);

MatrixValue load_matrix_file(const std::string& path, std::optional<Backend> forced,
                             std::optional<Backend> env_default);

template <class S>
Json matrix_to_json(const Matrix<S>& m) {
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(render_scalar(m(i, j)));
        entries.push_back(std::move(row));
    }
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["backend"] = backend_name(scalar_traits<S>::backend);
    out["entries"] = std::move(entries);
    return out;
}

Json tolerance_to_json(const Tolerance& tol);

// Common envelope: tool, version, command, backend, tolerances.
Json report_envelope(const std::string& command, Backend backend, const Tolerance& tol);

Json verdicts_to_json(const ClassVerdicts& v);

template <class S>
Json class_report_to_json(const ClassReport<S>& report) {
    Json out = Json::array();
    for (const auto& v : report.classes) out.push_back(verdicts_to_json(v));
    return out;
}

Json audit_to_json(const AuditReport& audit);

template <class S>
Json vector_to_json(const std::vector<S>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(render_scalar(x));
    return out;
}

template <class S>
Json inclusion_to_json(const InclusionVerdict<S>& v) {
    Json out;
    out["holds"] = v.holds;
    if (v.constant) out["constant"] = render_residual(*v.constant);
    if (v.witness) {
        Json w;
        w["column"] = v.witness->column;
        w["residual"] = vector_to_json(v.witness->residual);
        w["residual_norm"] = render_residual(v.witness->residual_norm);
        out["witness"] = std::move(w);
    }
    return out;
}

template <class S>
Json blockrep_to_json(const BlockRep<S>& rep) {
    Json out;
    out["dim"] = rep.dim;
    out["rank"] = rep.rank;
    Json corange = Json::array();
    for (const auto& v : rep.corange_basis) corange.push_back(vector_to_json(v));
    out["corange_basis"] = std::move(corange);
    Json kernel = Json::array();
    for (const auto& v : rep.kernel_basis) kernel.push_back(vector_to_json(v));
    out["kernel_basis"] = std::move(kernel);
    Json gc = Json::array();
    for (std::size_t i = 0; i < rep.rank; ++i) gc.push_back(render_scalar(rep.gram_corange(i, i)));
    out["gram_corange"] = std::move(gc);
    Json gk = Json::array();
    for (std::size_t i = 0; i + rep.rank < rep.dim; ++i)
        gk.push_back(render_scalar(rep.gram_kernel(i, i)));
    out["gram_kernel"] = std::move(gk);
    out["t1"] = matrix_to_json(rep.t1);
    out["t2"] = matrix_to_json(rep.t2);
    out["d"] = matrix_to_json(rep.d);
    return out;
}

// Deterministic rendering of a finished report.
std::string dump_report(const Json& j);

} // namespace epkit
