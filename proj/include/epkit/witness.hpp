#pragma once

#include "epkit/classes.hpp"
#include "epkit/matrix.hpp"
#include "epkit/polynomial.hpp"
#include "epkit/prng.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace epkit {

// Seeded rank-controlled generator spec. Entries of the two factors are
// integers in [-entry_bound, entry_bound] (real and imaginary part), so the
// product has rank at most `rank`; generation retries until the rank is
// exactly met.
struct GenSpec {
    std::size_t dim = 2;
    std::size_t rank = 1;
    long entry_bound = 3;
    Backend backend = Backend::exact;
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic given the spec: the draw order is left factor then right
// factor, row-major, real part before imaginary part. Retries keep drawing
// from the same stream; after 64 failures the spec is considered
// pathological and generation throws.
template <class S>
Matrix<S> random_matrix(const GenSpec& spec) {
    spec.validate();
    if (spec.backend != scalar_traits<S>::backend) {
        throw std::invalid_argument("random_matrix: spec backend does not match scalar type");
    }
    if (spec.rank == 0) return Matrix<S>(spec.dim, spec.dim);
    SplitMix64 rng(mix64(spec.seed));
    const Tolerance tol{};
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix<S> left(spec.dim, spec.rank);
        Matrix<S> right(spec.rank, spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i)
            for (std::size_t j = 0; j < spec.rank; ++j)
                left(i, j) = scalar_traits<S>::from_int(rng.next_int(spec.entry_bound),
                                                        rng.next_int(spec.entry_bound));
        for (std::size_t i = 0; i < spec.rank; ++i)
            for (std::size_t j = 0; j < spec.dim; ++j)
                right(i, j) = scalar_traits<S>::from_int(rng.next_int(spec.entry_bound),
                                                         rng.next_int(spec.entry_bound));
        Matrix<S> m = left * right;
        if (rank_of(m, tol) == spec.rank) return m;
    }
    throw std::runtime_error("random_matrix: retry budget exhausted (pathological spec)");
}

enum class ClassAtom { EP, HEP, NEP, NHEP, PEP, PHEP };

struct QueryTerm {
    ClassAtom atom;
    bool negated = false;
};

// Conjunction of possibly negated class atoms: "pHEP & !HEP". Hyphens are
// ignored and matching is case-insensitive, so "p-HEP" works too.
std::vector<QueryTerm> parse_query(std::string_view text);

struct SeparationQuery {
    std::string must_hold;
    std::vector<std::size_t> dims;
    std::size_t budget = 1;
    std::uint64_t seed = 0;
    unsigned n = 1;
    long entry_bound = 3;
    // Prepend the paper fixtures (dim-filtered) to the candidate stream.
    // They count against the budget and occupy the lowest indices.
    bool include_fixtures = false;

    void validate() const;
};

template <class S>
struct SeparationResult {
    Matrix<S> witness;
    ClassReport<S> report;
    std::size_t candidate_index = 0;
    bool from_fixture = false;
};

using FixtureValue = std::variant<ExactMatrix, ExactPoly>;

// Paper fixtures by name: example1, example2, example1_poly, example2_poly,
// nilpotent2. Throws std::invalid_argument for unknown names.
FixtureValue fixture(std::string_view name);
ExactMatrix fixture_matrix(std::string_view name);
ExactPoly fixture_poly(std::string_view name);

// Exact unitary: permutation composed with a diagonal of fourth roots of
// unity. Stays inside the Gaussian rationals.
ExactMatrix permutation_phase_unitary(std::size_t dim, std::uint64_t seed);

namespace detail {

template <class S>
bool eval_atom(ClassAtom atom, const Matrix<S>& m, const Polynomial<S>& p, unsigned n,
               const Tolerance& tol) {
    switch (atom) {
    case ClassAtom::EP:
        return require_consensus(is_EP(m, tol));
    case ClassAtom::HEP:
        return require_consensus(is_hypo_EP(m, tol));
    case ClassAtom::NEP:
        return is_n_EP(m, n, tol);
    case ClassAtom::NHEP:
        return require_consensus(is_n_hypo_EP(m, n, tol));
    case ClassAtom::PEP:
        return scalar_traits<S>::is_zero(p.constant_term())
                   ? require_consensus(is_p_EP(m, p, tol))
                   : pep_defining(m, p, tol);
    case ClassAtom::PHEP:
        return scalar_traits<S>::is_zero(p.constant_term())
                   ? require_consensus(is_p_hypo_EP(m, p, tol))
                   : phep_defining(m, p, tol);
    }
    return false;
}

template <class S>
bool satisfies_query(const std::vector<QueryTerm>& terms, const Matrix<S>& m,
                     const Polynomial<S>& p, unsigned n, const Tolerance& tol) {
    for (const QueryTerm& term : terms) {
        bool v = eval_atom(term.atom, m, p, n, tol);
        if (term.negated) v = !v;
        if (!v) return false;
    }
    return true;
}

} // namespace detail

// Scan seeded candidates for a matrix satisfying the query. Candidate k is
// generated from the independent stream mix64(seed ^ mix64(k)), so workers
// share nothing and the lowest satisfying index wins regardless of thread
// count. The winner is re-classified from scratch before being returned.
template <class S>
std::optional<SeparationResult<S>> search_separation(const SeparationQuery& q,
                                                     const Polynomial<S>& p, const Tolerance& tol,
                                                     unsigned threads = 0) {
    q.validate();
    const std::vector<QueryTerm> terms = parse_query(q.must_hold);

    std::vector<Matrix<S>> fixtures;
    if (q.include_fixtures) {
        for (const char* name : {"example1", "example2", "nilpotent2"}) {
            ExactMatrix fm = fixture_matrix(name);
            bool dim_ok = false;
            for (std::size_t d : q.dims) dim_ok = dim_ok || d == fm.rows();
            if (!dim_ok) continue;
            if constexpr (scalar_traits<S>::is_exact) {
                fixtures.push_back(fm);
            } else {
                fixtures.push_back(to_float(fm));
            }
        }
    }

    auto make_candidate = [&](std::size_t idx) -> Matrix<S> {
        if (idx < fixtures.size()) return fixtures[idx];
        const std::size_t j = idx - fixtures.size();
        SplitMix64 rng(stream_seed(q.seed, j));
        const std::size_t dim = q.dims[j % q.dims.size()];
        GenSpec spec;
        spec.dim = dim;
        spec.rank = rng.next() % (dim + 1);
        spec.entry_bound = q.entry_bound;
        spec.backend = scalar_traits<S>::backend;
        spec.seed = rng.next();
        return random_matrix<S>(spec);
    };

    unsigned nthreads = threads;
    if (nthreads == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        nthreads = hw == 0 ? 1 : std::min(hw, 8u);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{q.budget};
    std::mutex found_mutex;
    std::map<std::size_t, Matrix<S>> found;
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= q.budget || idx > best.load()) return;
            try {
                Matrix<S> m = make_candidate(idx);
                if (detail::satisfies_query(terms, m, p, q.n, tol)) {
                    std::size_t cur = best.load();
                    while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
                    }
                    std::lock_guard<std::mutex> lock(found_mutex);
                    found.emplace(idx, std::move(m));
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                best.store(0);
                return;
            }
        }
    };

    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    if (found.empty()) return std::nullopt;

    const auto& [idx, m] = *found.begin();
    // Double evaluation: the reported witness must satisfy the query on a
    // fresh classification.
    if (!detail::satisfies_query(terms, m, p, q.n, tol)) {
        throw std::logic_error("search_separation: witness failed re-verification");
    }
    SeparationResult<S> out;
    out.witness = m;
    out.report = classify(m, std::optional<Polynomial<S>>(p), q.n, tol);
    out.candidate_index = idx;
    out.from_fixture = idx < fixtures.size();
    return out;
}

} // namespace epkit
