#pragma once

#include "epkit/witness.hpp"

#include <vector>

namespace epkit::testing {

inline ExactScalar ei(long re, long im = 0) { return ExactScalar(re, im); }
inline ExactScalar frac(long num, long den) { return ExactScalar(Rational(num, den)); }

inline ExactMatrix exact_mat(std::initializer_list<std::initializer_list<long>> rows) {
    ExactMatrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long v : r) m(i, j++) = ExactScalar(v);
        ++i;
    }
    return m;
}

// The paper's displayed pseudoinverse of the example1 fixture.
inline ExactMatrix example1_pinv() {
    ExactMatrix m(4, 4);
    m(0, 0) = frac(1, 5);
    m(0, 2) = frac(-1, 5);
    m(1, 1) = frac(1, 2);
    m(2, 0) = frac(2, 5);
    m(2, 2) = frac(-2, 5);
    m(3, 2) = frac(1, 3);
    return m;
}

template <class S>
Matrix<S> seeded_random(std::size_t dim, std::size_t rank, std::uint64_t seed, long bound = 3) {
    GenSpec spec;
    spec.dim = dim;
    spec.rank = rank;
    spec.entry_bound = bound;
    spec.backend = scalar_traits<S>::backend;
    spec.seed = seed;
    return random_matrix<S>(spec);
}

// Random exact polynomial with p(0) = 0, degree <= max_deg, Gaussian
// integer coefficients bounded by 3. May degenerate to the zero polynomial.
inline ExactPoly seeded_poly(std::uint64_t seed, unsigned max_deg = 4) {
    SplitMix64 rng(mix64(seed));
    const unsigned deg = 1 + static_cast<unsigned>(rng.next() % max_deg);
    std::vector<ExactScalar> coeffs(deg + 1);
    for (unsigned k = 1; k <= deg; ++k) {
        coeffs[k] = ExactScalar(rng.next_int(3), rng.next_int(3));
    }
    return ExactPoly(std::move(coeffs));
}

} // namespace epkit::testing
