#include "dspp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cstdlib>
#include <string>

#include "dspp/config.hpp"
#include "dspp/errors.hpp"

namespace dspp {

int dense_cap() {
    if (const char* env = std::getenv("DSPP_DENSE_CAP")) {
        const int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return 4000;
}

void ensure_dense_ok(long long dim, const std::string& what) {
    if (dim > dense_cap())
        throw TooLarge(what + ": dimension " + std::to_string(dim) + " exceeds dense cap " +
                       std::to_string(dense_cap()));
}

namespace {

bool nearly_symmetric(const DenseMatrix& m) {
    const double scale = m.norm();
    if (scale == 0.0) return true;
    return (m - m.transpose()).norm() <= 1e-12 * scale;
}

}  // namespace

std::vector<Complex> dense_eigenvalues(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eigenvalues of a non-square matrix");
    ensure_dense_ok(m.rows(), "dense_eigenvalues");
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    if (nearly_symmetric(m)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NoConvergence("symmetric eigensolver failed");
        for (Index i = 0; i < m.rows(); ++i) out.emplace_back(es.eigenvalues()[i], 0.0);
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NoConvergence("QR eigensolver failed");
    for (Index i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

std::pair<double, double> singular_value_extremes(const DenseMatrix& m) {
    ensure_dense_ok(std::max(m.rows(), m.cols()), "singular values");
    Eigen::BDCSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) throw DimensionMismatch("singular values of an empty matrix");
    return {sv[0], sv[sv.size() - 1]};
}

double two_norm_condition(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("condition number of a non-square matrix");
    const auto [smax, smin] = singular_value_extremes(m);
    if (smin < 1e-14 * smax) throw Singular("two_norm_condition: matrix numerically singular");
    return smax / smin;
}

double spectral_radius(const DenseMatrix& m) {
    double rho = 0.0;
    for (const Complex& ev : dense_eigenvalues(m)) rho = std::max(rho, std::abs(ev));
    return rho;
}

Vector generalized_symmetric_eigenvalues(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionMismatch("generalized eigenproblem shape mismatch");
    ensure_dense_ok(a.rows(), "generalized eigenvalues");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(a), Eigen::MatrixXd(b), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw NotSpd("generalized eigenproblem: right matrix not SPD");
    return es.eigenvalues();
}

}  // namespace dspp
