#pragma once

#include "epkit/matrix.hpp"

#include <cstdint>
#include <vector>

namespace epkit {

// Full SVD M = U diag(sigma) V*, singular values descending. U is m x m,
// V is n x n.
struct SvdResult {
    FloatMatrix u;
    std::vector<double> sigma;
    FloatMatrix v;
};

SvdResult svd_decompose(const FloatMatrix& m);

// Eigenvalues of a hermitian matrix, ascending. The input is symmetrized
// as (M + M*)/2 before factorization.
std::vector<double> hermitian_eigenvalues(const FloatMatrix& m);

double spectral_norm_svd(const FloatMatrix& m);

// Unitary Q factor of a seeded random complex matrix (Householder QR).
FloatMatrix random_unitary(std::size_t dim, std::uint64_t seed);

} // namespace epkit
