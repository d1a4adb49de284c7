#pragma once

#include "epkit/blockrep.hpp"
#include "epkit/core.hpp"
#include "epkit/pinv.hpp"
#include "epkit/polynomial.hpp"
#include "epkit/ranges.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epkit {

// One independently computed characterization of an operator class.
struct Characterization {
    std::string id;
    bool verdict = false;
    double residual = 0.0;
    bool skipped = false;
    std::string note;
};

struct ClassVerdicts {
    std::string class_name;
    std::vector<Characterization> checks;

    // True when every evaluated characterization returned the same verdict.
    bool consensus() const {
        std::optional<bool> first;
        for (const auto& c : checks) {
            if (c.skipped) continue;
            if (!first) {
                first = c.verdict;
            } else if (*first != c.verdict) {
                return false;
            }
        }
        return first.has_value();
    }

    bool verdict() const {
        for (const auto& c : checks)
            if (!c.skipped) return c.verdict;
        return false;
    }
};

// A characterization disagreement: either a library bug or a counterexample
// to a published equivalence. The strongest error the toolkit can raise.
class ConsensusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool require_consensus(const ClassVerdicts& v) {
    if (!v.consensus()) {
        throw ConsensusError("characterization disagreement in class " + v.class_name);
    }
    return v.verdict();
}

namespace detail {

template <class S>
void add_equality(ClassVerdicts& out, std::string id, const Matrix<S>& lhs, const Matrix<S>& rhs,
                  const Tolerance& tol) {
    Characterization c;
    c.id = std::move(id);
    c.verdict = matrices_equal(lhs, rhs, tol);
    c.residual = residual_of(lhs, rhs);
    out.checks.push_back(std::move(c));
}

template <class S>
void add_inclusion(ClassVerdicts& out, std::string id, const Matrix<S>& a, const Matrix<S>& b,
                   const Tolerance& tol) {
    InclusionVerdict<S> v = range_included(a, b, tol);
    Characterization c;
    c.id = std::move(id);
    c.verdict = v.holds;
    c.residual = v.witness ? v.witness->residual_norm : 0.0;
    out.checks.push_back(std::move(c));
}

inline void add_skipped(ClassVerdicts& out, std::string id) {
    Characterization c;
    c.id = std::move(id);
    c.skipped = true;
    c.note = "requires p(0)=0";
    out.checks.push_back(std::move(c));
}

} // namespace detail

// Defining identities, used directly where a published implication is about
// membership itself rather than about any particular characterization.
template <class S>
bool phep_defining(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    Matrix<S> proj = corange_projector(t, tol);
    Matrix<S> pt = poly_eval(p, t);
    return matrices_equal(proj * pt, pt * proj, tol);
}

template <class S>
bool pep_defining(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    Matrix<S> tp = moore_penrose(t, tol);
    Matrix<S> pt = poly_eval(p, t);
    return matrices_equal(pt * tp, tp * pt, tol);
}

// EP: R(T) = R(T*); equivalently T commutes with T+.
template <class S>
ClassVerdicts is_EP(const Matrix<S>& t, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_EP: non-square matrix");
    ClassVerdicts out;
    out.class_name = "EP";

    Matrix<S> ts = adjoint(t);
    {
        InclusionVerdict<S> fwd = range_included(t, ts, tol);
        InclusionVerdict<S> bwd = range_included(ts, t, tol);
        Characterization c;
        c.id = "range-equality";
        c.verdict = fwd.holds && bwd.holds;
        c.residual = std::max(fwd.witness ? fwd.witness->residual_norm : 0.0,
                              bwd.witness ? bwd.witness->residual_norm : 0.0);
        out.checks.push_back(std::move(c));
    }
    Matrix<S> tp = moore_penrose(t, tol);
    detail::add_equality(out, "commutator", commutator(tp, t), Matrix<S>(t.rows(), t.cols()), tol);
    detail::add_equality(out, "projectors", range_projector(t, tol), corange_projector(t, tol), tol);
    return out;
}

// hypo-EP: [T+, T] >= 0; equivalently T = T+ T^2, or R(T) inside R(T*).
template <class S>
ClassVerdicts is_hypo_EP(const Matrix<S>& t, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_hypo_EP: non-square matrix");
    ClassVerdicts out;
    out.class_name = "hypo-EP";

    Matrix<S> tp = moore_penrose(t, tol);
    {
        Matrix<S> comm = tp * t - t * tp;
        Characterization c;
        c.id = "psd-commutator";
        c.verdict = is_psd(comm, tol);
        c.residual = c.verdict ? 0.0 : psd_violation(comm, tol);
        out.checks.push_back(std::move(c));
    }
    detail::add_equality(out, "factor-identity", t, tp * t * t, tol);
    detail::add_inclusion(out, "range-inclusion", t, adjoint(t), tol);
    return out;
}

// SD (star-dagger): T* T+ = T+ T*.
template <class S>
bool is_SD(const Matrix<S>& t, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_SD: non-square matrix");
    Matrix<S> tp = moore_penrose(t, tol);
    Matrix<S> ts = adjoint(t);
    return matrices_equal(ts * tp, tp * ts, tol);
}

template <class S>
bool is_normal(const Matrix<S>& t, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_normal: non-square matrix");
    return matrices_equal(adjoint(t) * t, t * adjoint(t), tol);
}

// p-normal: [p(T), T*] = 0; equivalently p(T) is normal.
template <class S>
ClassVerdicts is_p_normal(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_p_normal: non-square matrix");
    ClassVerdicts out;
    out.class_name = "p-normal";
    Matrix<S> pt = poly_eval(p, t);
    Matrix<S> zero(t.rows(), t.cols());
    detail::add_equality(out, "adjoint-commutation", commutator(pt, adjoint(t)), zero, tol);
    detail::add_equality(out, "p-of-T-normal", commutator(adjoint(pt), pt), zero, tol);
    return out;
}

// n-EP: T^n T+ = T+ T^n.
template <class S>
bool is_n_EP(const Matrix<S>& t, unsigned n, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_n_EP: non-square matrix");
    if (n == 0) throw std::invalid_argument("is_n_EP: n must be >= 1");
    Matrix<S> tn = matrix_power(t, n);
    Matrix<S> tp = moore_penrose(t, tol);
    return matrices_equal(tn * tp, tp * tn, tol);
}

// n-hypo-EP, through four routes: the range inclusion R(T^n) inside R(T*),
// the sandwich identity, the symmetrized identity, and the p(t) = t^n
// instance of the p-hypo-EP commutation.
template <class S>
ClassVerdicts is_n_hypo_EP(const Matrix<S>& t, unsigned n, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_n_hypo_EP: non-square matrix");
    if (n == 0) throw std::invalid_argument("is_n_hypo_EP: n must be >= 1");
    ClassVerdicts out;
    out.class_name = "n-hypo-EP";

    Matrix<S> tn = matrix_power(t, n);
    Matrix<S> tp = moore_penrose(t, tol);
    detail::add_inclusion(out, "range-inclusion", tn, adjoint(t), tol);
    detail::add_equality(out, "sandwich", tp * tn * t * tp, tn * tp, tol);
    {
        Matrix<S> lhs = tp * tn * t;
        detail::add_equality(out, "symmetrized", lhs + adjoint(lhs), tn + adjoint(tn), tol);
    }
    {
        Characterization c;
        c.id = "poly-instance";
        c.verdict = phep_defining(t, Polynomial<S>::t_power(n), tol);
        c.residual = 0.0;
        Matrix<S> proj = tp * t;
        c.residual = residual_of(proj * tn, tn * proj);
        out.checks.push_back(std::move(c));
    }
    return out;
}

// p-EP: p(T) T+ = T+ p(T), plus the equivalent identities that hold under
// p(0) = 0 (skipped with a note otherwise).
template <class S>
ClassVerdicts is_p_EP(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_p_EP: non-square matrix");
    ClassVerdicts out;
    out.class_name = "p-EP";

    Matrix<S> tp = moore_penrose(t, tol);
    Matrix<S> pt = poly_eval(p, t);
    detail::add_equality(out, "defining", pt * tp, tp * pt, tol);

    const bool p0_zero = scalar_traits<S>::is_zero(p.constant_term());
    if (!p0_zero) {
        detail::add_skipped(out, "equivEP-2");
        detail::add_skipped(out, "equivEP-3");
        detail::add_skipped(out, "dual-range");
        return out;
    }

    Matrix<S> ts = adjoint(t);
    Matrix<S> range_proj = t * tp;    // TT+
    Matrix<S> corange_proj = tp * t;  // T+T
    Matrix<S> pbar_ts = poly_eval(poly_conjugate(p), ts);

    {
        // equivEP (2): TT+ (T+ p(T))* = (T+ p(T))* and T+ T p(T) T+ = p(T) T+.
        Matrix<S> w = adjoint(tp * pt);
        bool first = matrices_equal(range_proj * w, w, tol);
        bool second = matrices_equal(corange_proj * pt * tp, pt * tp, tol);
        Characterization c;
        c.id = "equivEP-2";
        c.verdict = first && second;
        c.residual = std::max(residual_of(range_proj * w, w),
                              residual_of(corange_proj * pt * tp, pt * tp));
        out.checks.push_back(std::move(c));
    }
    {
        // equivEP (3): both symmetrized identities equal p(T) + conj(p)(T*).
        Matrix<S> rhs = pt + pbar_ts;
        Matrix<S> lhs1 = pt * range_proj;
        lhs1 = lhs1 + adjoint(lhs1);
        Matrix<S> lhs2 = tp * pt * t;
        lhs2 = lhs2 + adjoint(lhs2);
        Characterization c;
        c.id = "equivEP-3";
        c.verdict = matrices_equal(lhs1, rhs, tol) && matrices_equal(lhs2, rhs, tol);
        c.residual = std::max(residual_of(lhs1, rhs), residual_of(lhs2, rhs));
        out.checks.push_back(std::move(c));
    }
    {
        // Dual range pair: R(p(T)) in R(T*) and R(conj(p)(T*)) in R(T).
        InclusionVerdict<S> fwd = range_included(pt, ts, tol);
        InclusionVerdict<S> bwd = range_included(pbar_ts, t, tol);
        Characterization c;
        c.id = "dual-range";
        c.verdict = fwd.holds && bwd.holds;
        c.residual = std::max(fwd.witness ? fwd.witness->residual_norm : 0.0,
                              bwd.witness ? bwd.witness->residual_norm : 0.0);
        out.checks.push_back(std::move(c));
    }
    return out;
}

// p-hypo-EP: the defining commutation T+ T p(T) = p(T) T+ T is always
// evaluated. Under p(0) = 0 the ten equivalent characterizations are
// evaluated as well and must agree; otherwise they are flagged skipped.
template <class S>
ClassVerdicts is_p_hypo_EP(const Matrix<S>& t, const Polynomial<S>& p, const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("is_p_hypo_EP: non-square matrix");
    ClassVerdicts out;
    out.class_name = "p-hypo-EP";

    Matrix<S> tp = moore_penrose(t, tol);
    Matrix<S> pt = poly_eval(p, t);
    Matrix<S> proj = tp * t; // T+T
    detail::add_equality(out, "defining", proj * pt, pt * proj, tol);

    const bool p0_zero = scalar_traits<S>::is_zero(p.constant_term());
    if (!p0_zero) {
        for (const char* id : {"phep-ii", "phep-iii", "phep-iv", "phep-v", "eqhep-ii",
                               "eqhep-iii", "eqhep-iv", "equi-ii", "equi-iii", "rep-ii"}) {
            detail::add_skipped(out, id);
        }
        return out;
    }

    Matrix<S> ts = adjoint(t);
    detail::add_equality(out, "phep-ii", pt, proj * pt, tol);
    detail::add_inclusion(out, "phep-iii", pt, ts, tol);
    detail::add_equality(out, "phep-iv", proj * pt * tp, pt * tp, tol);
    {
        Matrix<S> lhs = proj * pt;
        detail::add_equality(out, "phep-v", lhs + adjoint(lhs), pt + adjoint(pt), tol);
    }
    detail::add_equality(out, "eqhep-ii", adjoint(pt), adjoint(pt) * proj, tol);
    {
        std::optional<double> k = douglas_constant(t, p, tol);
        Characterization c;
        c.id = "eqhep-iii";
        c.verdict = k.has_value();
        c.residual = 0.0;
        if (k) c.note = "k=" + std::to_string(*k);
        out.checks.push_back(std::move(c));
    }
    {
        std::optional<double> k = douglas_constant_dual(t, p, tol);
        Characterization c;
        c.id = "eqhep-iv";
        c.verdict = k.has_value();
        c.residual = 0.0;
        if (k) c.note = "k=" + std::to_string(*k);
        out.checks.push_back(std::move(c));
    }
    detail::add_equality(out, "equi-ii", proj * pt * ts * t, pt * ts * t, tol);
    detail::add_equality(out, "equi-iii", proj * pt * ts, pt * ts, tol);
    {
        RepCriterion rc = rep_criterion(t, p, tol);
        Characterization c;
        c.id = "rep-ii";
        c.verdict = rc.block_zero;
        c.residual = rc.block_residual;
        out.checks.push_back(std::move(c));
    }
    return out;
}

// Aggregated classification of one operator.
template <class S>
struct ClassReport {
    std::vector<ClassVerdicts> classes;
    unsigned n = 1;
    std::optional<Polynomial<S>> p;
    Tolerance tol;

    const ClassVerdicts* find(std::string_view name) const {
        for (const auto& c : classes)
            if (c.class_name == name) return &c;
        return nullptr;
    }

    bool all_consensus() const {
        for (const auto& c : classes)
            if (!c.consensus()) return false;
        return true;
    }
};

template <class S>
ClassVerdicts single_check(std::string class_name, std::string id, bool verdict) {
    ClassVerdicts v;
    v.class_name = std::move(class_name);
    Characterization c;
    c.id = std::move(id);
    c.verdict = verdict;
    v.checks.push_back(std::move(c));
    return v;
}

template <class S>
ClassReport<S> classify(const Matrix<S>& t, const std::optional<Polynomial<S>>& p, unsigned n,
                        const Tolerance& tol) {
    ClassReport<S> report;
    report.n = n;
    report.p = p;
    report.tol = tol;
    report.classes.push_back(is_EP(t, tol));
    report.classes.push_back(is_hypo_EP(t, tol));
    report.classes.push_back(single_check<S>("SD", "star-dagger-commutation", is_SD(t, tol)));
    report.classes.push_back(single_check<S>("normal", "self-commutator", is_normal(t, tol)));
    report.classes.push_back(single_check<S>("n-EP", "power-commutation", is_n_EP(t, n, tol)));
    {
        ClassVerdicts v = is_n_hypo_EP(t, n, tol);
        v.class_name = "n-hypo-EP";
        report.classes.push_back(std::move(v));
    }
    if (p) {
        report.classes.push_back(is_p_normal(t, *p, tol));
        report.classes.push_back(is_p_EP(t, *p, tol));
        report.classes.push_back(is_p_hypo_EP(t, *p, tol));
    }
    return report;
}

struct AuditRow {
    std::string rule;
    bool hypothesis = false;
    bool conclusion = false;
    bool vacuous = false;
    bool pass = false;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    bool ok = true;
    bool aborted = false;
    std::string detail;
};

namespace detail {

inline void audit_implication(AuditReport& rep, std::string rule, bool hyp, bool concl) {
    if (rep.aborted) return;
    AuditRow row;
    row.rule = std::move(rule);
    row.hypothesis = hyp;
    row.conclusion = concl;
    row.vacuous = !hyp;
    row.pass = !hyp || concl;
    if (!row.pass) {
        rep.ok = false;
        rep.aborted = true;
        rep.detail = "violated: " + row.rule;
    }
    rep.rows.push_back(std::move(row));
}

inline void audit_equivalence(AuditReport& rep, std::string rule, bool lhs, bool rhs) {
    if (rep.aborted) return;
    AuditRow row;
    row.rule = std::move(rule);
    row.hypothesis = lhs;
    row.conclusion = rhs;
    row.vacuous = false;
    row.pass = lhs == rhs;
    if (!row.pass) {
        rep.ok = false;
        rep.aborted = true;
        rep.detail = "violated: " + row.rule;
    }
    rep.rows.push_back(std::move(row));
}

} // namespace detail

// Evaluate the known implications between the classes on one (T, p, n)
// input. Whenever a hypothesis side holds, the conclusion is asserted; a
// failing row aborts the audit (it would be either a library defect or a
// counterexample to a published result).
template <class S>
AuditReport implication_audit(const Matrix<S>& t, const Polynomial<S>& p, unsigned n,
                              const Tolerance& tol) {
    if (!t.is_square()) throw std::invalid_argument("implication_audit: non-square matrix");
    AuditReport rep;
    const bool p0_zero = scalar_traits<S>::is_zero(p.constant_term());

    // m-EP with m <= min{j >= 1 : a_j != 0} forces p-EP.
    if (p0_zero) {
        std::size_t k = 0;
        for (std::size_t j = 1; j < p.coeffs().size(); ++j) {
            if (!scalar_traits<S>::is_zero(p.coeff(j))) {
                k = j;
                break;
            }
        }
        for (std::size_t m = 1; m <= k && !rep.aborted; ++m) {
            bool hyp = is_n_EP(t, static_cast<unsigned>(m), tol);
            bool concl = hyp ? require_consensus(is_p_EP(t, p, tol)) : false;
            detail::audit_implication(rep, "croi(m=" + std::to_string(m) + ")", hyp, concl);
        }
    }

    // hypo-EP forces p-hypo-EP for arbitrary p.
    {
        bool hyp = require_consensus(is_hypo_EP(t, tol));
        bool concl = hyp ? phep_defining(t, p, tol) : false;
        detail::audit_implication(rep, "hep=>phep", hyp, concl);
    }

    // p-HEP forces p_k-HEP with p_k(t) = t^k (p(t) - p(0)).
    {
        bool hyp = phep_defining(t, p, tol);
        for (unsigned k = 1; k <= 4 && !rep.aborted; ++k) {
            bool concl = hyp ? phep_defining(t, poly_shift_drop_constant(p, k), tol) : false;
            detail::audit_implication(rep, "pk(k=" + std::to_string(k) + ")", hyp, concl);
        }
    }

    // (n-HEP) is contained in (n+k-HEP).
    {
        unsigned max_n = std::max(3u, n);
        for (unsigned base = 1; base <= max_n && !rep.aborted; ++base) {
            bool hyp = require_consensus(is_n_hypo_EP(t, base, tol));
            for (unsigned k = 1; k <= 3 && !rep.aborted; ++k) {
                bool concl = hyp ? require_consensus(is_n_hypo_EP(t, base + k, tol)) : false;
                detail::audit_implication(
                    rep, "nhep-monotone(n=" + std::to_string(base) + ",k=" + std::to_string(k) + ")",
                    hyp, concl);
            }
        }
    }

    if (p0_zero && !rep.aborted) {
        Matrix<S> tp = moore_penrose(t, tol);
        Matrix<S> pt = poly_eval(p, t);
        Matrix<S> ts = adjoint(t);
        Matrix<S> corange_proj = tp * t;
        Matrix<S> range_proj = t * tp;
        Matrix<S> zero(t.rows(), t.cols());
        bool phep = phep_defining(t, p, tol);
        bool pep = pep_defining(t, p, tol);

        // Commutation conditions forcing p-HEP.
        detail::audit_implication(rep, "prop7-1",
                                  matrices_equal(commutator(corange_proj, pt + tp), zero, tol),
                                  phep);
        detail::audit_implication(rep, "prop7-2",
                                  matrices_equal(commutator(corange_proj, pt + ts), zero, tol),
                                  phep);

        // p-HEP plus a commutation condition forcing p-EP.
        detail::audit_implication(
            rep, "prop8-1", phep && matrices_equal(commutator(t, pt * tp), zero, tol), pep);
        detail::audit_implication(
            rep, "prop8-2", phep && matrices_equal(commutator(range_proj, pt + tp), zero, tol),
            pep);
        detail::audit_implication(
            rep, "prop8-3", phep && matrices_equal(commutator(range_proj, pt + ts), zero, tol),
            pep);

        // p(T) EP forces p-EP; for SD operators the converse holds as well.
        if (!rep.aborted) {
            bool pt_ep = require_consensus(is_EP(pt, tol));
            detail::audit_implication(rep, "rest-1", pt_ep,
                                      pt_ep ? require_consensus(is_p_EP(t, p, tol)) : false);
            bool sd = is_SD(t, tol);
            if (sd) {
                detail::audit_equivalence(rep, "rest-2",
                                          require_consensus(is_p_EP(t, p, tol)), pt_ep);
            } else {
                detail::audit_implication(rep, "rest-2", false, false);
            }
        }
    }

    // EP holds exactly when both T and T* are hypo-EP.
    if (!rep.aborted) {
        bool ep = require_consensus(is_EP(t, tol));
        bool both = require_consensus(is_hypo_EP(t, tol)) &&
                    require_consensus(is_hypo_EP(adjoint(t), tol));
        detail::audit_equivalence(rep, "ep<=>hep-pair", ep, both);
    }

    // p-EP holds exactly when T is p-HEP and T* is conj(p)-HEP.
    if (p0_zero && !rep.aborted) {
        bool pep = require_consensus(is_p_EP(t, p, tol));
        bool both = require_consensus(is_p_hypo_EP(t, p, tol)) &&
                    require_consensus(is_p_hypo_EP(adjoint(t), poly_conjugate(p), tol));
        detail::audit_equivalence(rep, "pep<=>phep-pair", pep, both);
    }

    return rep;
}

// Classification of U T U* must match the classification of T.
template <class S>
bool unitary_conjugation_check(const Matrix<S>& t, const Polynomial<S>& p, const Matrix<S>& u,
                               const Tolerance& tol) {
    if (!u.is_square() || u.rows() != t.rows()) {
        throw std::invalid_argument("unitary_conjugation_check: U must be square, same size as T");
    }
    if (!matrices_equal(adjoint(u) * u, Matrix<S>::identity(u.rows()), tol)) {
        throw std::invalid_argument("unitary_conjugation_check: U is not unitary");
    }
    Matrix<S> s = u * t * adjoint(u);
    ClassVerdicts a = is_p_hypo_EP(t, p, tol);
    ClassVerdicts b = is_p_hypo_EP(s, p, tol);
    if (a.checks.size() != b.checks.size()) return false;
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        if (a.checks[i].skipped != b.checks[i].skipped) return false;
        if (!a.checks[i].skipped && a.checks[i].verdict != b.checks[i].verdict) return false;
    }
    return true;
}

} // namespace epkit
