#include "epkit/float_backend.hpp"

#include "epkit/prng.hpp"

#include <Eigen/Dense>

namespace epkit {

namespace {

Eigen::MatrixXcd to_eigen(const FloatMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

FloatMatrix from_eigen(const Eigen::MatrixXcd& e) {
    FloatMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

} // namespace

SvdResult svd_decompose(const FloatMatrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult r;
    r.u = from_eigen(svd.matrixU());
    r.v = from_eigen(svd.matrixV());
    const auto& s = svd.singularValues();
    r.sigma.assign(s.data(), s.data() + s.size());
    return r;
}

std::vector<double> hermitian_eigenvalues(const FloatMatrix& m) {
    Eigen::MatrixXcd e = to_eigen(m);
    Eigen::MatrixXcd sym = 0.5 * (e + e.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double spectral_norm_svd(const FloatMatrix& m) {
    if (m.empty()) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

FloatMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    SplitMix64 rng(mix64(seed));
    Eigen::MatrixXcd a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::complex<double>(2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    return from_eigen(q);
}

} // namespace epkit
