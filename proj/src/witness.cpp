#include "epkit/witness.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace epkit {

void GenSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("GenSpec: dim must be >= 1");
    if (rank > dim) throw std::invalid_argument("GenSpec: rank must be <= dim");
    if (entry_bound < 1) throw std::invalid_argument("GenSpec: entry_bound must be >= 1");
}

void SeparationQuery::validate() const {
    if (budget < 1) throw std::invalid_argument("SeparationQuery: budget must be >= 1");
    if (dims.empty()) throw std::invalid_argument("SeparationQuery: dims must be nonempty");
    for (std::size_t d : dims)
        if (d < 1) throw std::invalid_argument("SeparationQuery: dims must be >= 1");
    if (entry_bound < 1) throw std::invalid_argument("SeparationQuery: entry_bound must be >= 1");
}

std::vector<QueryTerm> parse_query(std::string_view text) {
    std::vector<QueryTerm> terms;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t amp = text.find('&', pos);
        std::string_view piece = text.substr(pos, amp == std::string_view::npos ? amp : amp - pos);

        std::string token;
        bool negated = false;
        for (char ch : piece) {
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == '-') continue;
            if (ch == '!') {
                if (!token.empty()) throw std::invalid_argument("query: '!' must precede the atom");
                negated = !negated;
                continue;
            }
            token.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
        }
        if (token.empty()) throw std::invalid_argument("query: empty term");

        ClassAtom atom;
        if (token == "EP")
            atom = ClassAtom::EP;
        else if (token == "HEP")
            atom = ClassAtom::HEP;
        else if (token == "NEP")
            atom = ClassAtom::NEP;
        else if (token == "NHEP")
            atom = ClassAtom::NHEP;
        else if (token == "PEP")
            atom = ClassAtom::PEP;
        else if (token == "PHEP")
            atom = ClassAtom::PHEP;
        else
            throw std::invalid_argument("query: unknown class atom '" + token + "'");
        terms.push_back({atom, negated});

        if (amp == std::string_view::npos) break;
        pos = amp + 1;
    }
    if (terms.empty()) throw std::invalid_argument("query: no terms");
    return terms;
}

namespace {

ExactMatrix make_example1() {
    auto e = [](long v) { return ExactScalar(v); };
    return ExactMatrix{{e(1), e(0), e(2), e(3)},
                       {e(0), e(2), e(0), e(0)},
                       {e(0), e(0), e(0), e(3)},
                       {e(0), e(0), e(0), e(0)}};
}

ExactMatrix make_example2() {
    auto e = [](long v) { return ExactScalar(v); };
    return ExactMatrix{{e(1), e(1)}, {e(0), e(0)}};
}

ExactMatrix make_nilpotent2() {
    auto e = [](long v) { return ExactScalar(v); };
    return ExactMatrix{{e(0), e(1)}, {e(0), e(0)}};
}

// p(t) = t^3 - t^2
ExactPoly make_example1_poly() {
    return ExactPoly({ExactScalar(0), ExactScalar(0), ExactScalar(-1), ExactScalar(1)});
}

// p(t) = t^3 + 4i t^2 - (1+4i) t + 2
ExactPoly make_example2_poly() {
    return ExactPoly({ExactScalar(2), ExactScalar(-1, -4), ExactScalar(0, 4), ExactScalar(1)});
}

} // namespace

FixtureValue fixture(std::string_view name) {
    if (name == "example1") return make_example1();
    if (name == "example2") return make_example2();
    if (name == "nilpotent2") return make_nilpotent2();
    if (name == "example1_poly") return make_example1_poly();
    if (name == "example2_poly") return make_example2_poly();
    throw std::invalid_argument("fixture: unknown name '" + std::string(name) + "'");
}

ExactMatrix fixture_matrix(std::string_view name) {
    return std::get<ExactMatrix>(fixture(name));
}

ExactPoly fixture_poly(std::string_view name) {
    return std::get<ExactPoly>(fixture(name));
}

ExactMatrix permutation_phase_unitary(std::size_t dim, std::uint64_t seed) {
    SplitMix64 rng(mix64(seed));
    std::vector<std::size_t> perm(dim);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = dim; i > 1; --i) {
        std::size_t j = rng.next() % i;
        std::swap(perm[i - 1], perm[j]);
    }
    ExactMatrix u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        ExactScalar phase;
        switch (rng.next() % 4) {
        case 0: phase = ExactScalar(1); break;
        case 1: phase = ExactScalar(-1); break;
        case 2: phase = ExactScalar(0, 1); break;
        default: phase = ExactScalar(0, -1); break;
        }
        u(perm[col], col) = phase;
    }
    return u;
}

} // namespace epkit
