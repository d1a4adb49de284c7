#include "epkit/io.hpp"

#include <fstream>
#include <sstream>

namespace epkit {

namespace {

Backend parse_backend_name(const std::string& name) {
    if (name == "exact") return Backend::exact;
    if (name == "float") return Backend::fp64;
    throw FileFormatError("unknown backend '" + name + "' (expected \"exact\" or \"float\")");
}

} // namespace

MatrixValue matrix_from_json(const Json& file, std::optional<Backend> forced,
                             std::optional<Backend> env_default) {
    if (!file.is_object()) throw FileFormatError("matrix file: expected a JSON object");
    if (!file.contains("rows") || !file.contains("cols") || !file.contains("entries")) {
        throw FileFormatError("matrix file: required keys are rows, cols, entries");
    }
    const auto rows = file.at("rows").get<std::int64_t>();
    const auto cols = file.at("cols").get<std::int64_t>();
    if (rows < 1 || cols < 1) throw FileFormatError("matrix file: rows and cols must be >= 1");

    const Json& entries = file.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows)) {
        throw FileFormatError("matrix file: entries must be an array of `rows` rows");
    }

    // Parse every entry once; scalars report their own backend.
    std::vector<std::vector<ScalarValue>> parsed(static_cast<std::size_t>(rows));
    bool any_decimal = false;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        const Json& row = entries.at(i);
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
            throw FileFormatError("matrix file: row " + std::to_string(i) + " must have `cols` entries");
        }
        parsed[i].reserve(static_cast<std::size_t>(cols));
        for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j) {
            const Json& cell = row.at(j);
            if (!cell.is_string()) {
                throw FileFormatError("matrix file: entries must be scalar strings");
            }
            try {
                parsed[i].push_back(parse_scalar(cell.get<std::string>()));
            } catch (const ParseError& e) {
                throw FileFormatError("matrix file: entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + "): " + e.what());
            }
            if (backend_of(parsed[i].back()) == Backend::fp64) any_decimal = true;
        }
    }

    Backend backend;
    if (forced) {
        backend = *forced;
    } else if (file.contains("backend")) {
        backend = parse_backend_name(file.at("backend").get<std::string>());
    } else if (any_decimal) {
        backend = Backend::fp64;
    } else if (env_default) {
        backend = *env_default;
    } else {
        backend = Backend::exact;
    }

    if (backend == Backend::exact && any_decimal) {
        throw FileFormatError("matrix file: decimal entries cannot be read into the exact backend");
    }

    if (backend == Backend::exact) {
        ExactMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) = std::get<ExactScalar>(parsed[i][j]);
        return m;
    }
    FloatMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const ScalarValue& v = parsed[i][j];
            m(i, j) = std::holds_alternative<FloatScalar>(v) ? std::get<FloatScalar>(v)
                                                             : to_float(std::get<ExactScalar>(v));
        }
    }
    return m;
}

MatrixValue load_matrix_file(const std::string& path, std::optional<Backend> forced,
                             std::optional<Backend> env_default) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open matrix file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError("invalid JSON in " + path + ": " + e.what());
    }
    return matrix_from_json(j, forced, env_default);
}

Json tolerance_to_json(const Tolerance& tol) {
    Json out;
    out["rank_rel"] = render_residual(tol.rank_rel);
    out["residual_rel"] = render_residual(tol.residual_rel);
    out["psd_rel"] = render_residual(tol.psd_rel);
    return out;
}

Json report_envelope(const std::string& command, Backend backend, const Tolerance& tol) {
    Json out;
    out["tool"] = "epkit";
    out["version"] = kVersion;
    out["command"] = command;
    out["backend"] = backend_name(backend);
    out["tolerances"] = tolerance_to_json(tol);
    return out;
}

Json verdicts_to_json(const ClassVerdicts& v) {
    Json out;
    out["class"] = v.class_name;
    out["consensus"] = v.consensus();
    out["verdict"] = v.verdict();
    Json checks = Json::array();
    for (const auto& c : v.checks) {
        Json jc;
        jc["id"] = c.id;
        if (c.skipped) {
            jc["skipped"] = true;
            jc["note"] = c.note;
        } else {
            jc["verdict"] = c.verdict;
            jc["residual"] = render_residual(c.residual);
            if (!c.note.empty()) jc["note"] = c.note;
        }
        checks.push_back(std::move(jc));
    }
    out["characterizations"] = std::move(checks);
    return out;
}

Json audit_to_json(const AuditReport& audit) {
    Json out;
    out["ok"] = audit.ok;
    out["aborted"] = audit.aborted;
    if (!audit.detail.empty()) out["detail"] = audit.detail;
    Json rows = Json::array();
    for (const auto& r : audit.rows) {
        Json jr;
        jr["rule"] = r.rule;
        jr["hypothesis"] = r.hypothesis;
        jr["conclusion"] = r.conclusion;
        jr["vacuous"] = r.vacuous;
        jr["pass"] = r.pass;
        rows.push_back(std::move(jr));
    }
    out["rows"] = std::move(rows);
    return out;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

} // namespace epkit
