#include "dspp/spd_factor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include "dspp/errors.hpp"

namespace dspp {

namespace {
// Below this dimension a dense LLT beats building the sparse symbolic
// structure for the matrices this library sees.
constexpr Index kDenseThreshold = 192;
}  // namespace

struct SpdFactor::Impl {
    Index dim = 0;
    bool dense = true;
    Eigen::LLT<Eigen::MatrixXd> dense_llt;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> sparse_llt;
};

SpdFactor SpdFactor::factorize(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("spd_factorize: non-square input");
    const double asym = m.relative_asymmetry();
    if (asym > 1e-12)
        warn("spd_factorize: input asymmetry " + std::to_string(asym) + " symmetrized away");
    const SparseMatrix sym = SparseMatrix::add(0.5, m, 0.5, m.transposed());

    auto impl = std::make_shared<Impl>();
    impl->dim = sym.rows();
    if (sym.rows() <= kDenseThreshold) {
        impl->dense = true;
        impl->dense_llt.compute(Eigen::MatrixXd(sym.to_dense()));
        if (impl->dense_llt.info() != Eigen::Success)
            throw NotSpd("spd_factorize: nonpositive pivot (matrix not SPD)");
    } else {
        impl->dense = false;
        impl->sparse_llt.compute(sym.to_eigen());
        if (impl->sparse_llt.info() != Eigen::Success)
            throw NotSpd("spd_factorize: nonpositive pivot (matrix not SPD)");
    }
    SpdFactor out;
    out.impl_ = std::move(impl);
    return out;
}

SpdFactor SpdFactor::factorize_dense(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("spd_factorize: non-square input");
    auto impl = std::make_shared<Impl>();
    impl->dim = m.rows();
    impl->dense = true;
    impl->dense_llt.compute(Eigen::MatrixXd(0.5 * (m + m.transpose())));
    if (impl->dense_llt.info() != Eigen::Success)
        throw NotSpd("spd_factorize: nonpositive pivot (matrix not SPD)");
    SpdFactor out;
    out.impl_ = std::move(impl);
    return out;
}

Index SpdFactor::dimension() const { return impl_ ? impl_->dim : 0; }

Vector SpdFactor::solve(const Vector& b) const {
    if (!impl_) throw Error("spd_solve: empty factor");
    if (b.size() != impl_->dim) throw DimensionMismatch("spd_solve: right-hand side length mismatch");
    if (impl_->dense) return impl_->dense_llt.solve(b);
    return impl_->sparse_llt.solve(b);
}

DenseMatrix SpdFactor::solve(const DenseMatrix& b) const {
    if (!impl_) throw Error("spd_solve: empty factor");
    if (b.rows() != impl_->dim) throw DimensionMismatch("spd_solve: right-hand side rows mismatch");
    if (impl_->dense) return impl_->dense_llt.solve(Eigen::MatrixXd(b));
    return DenseMatrix(impl_->sparse_llt.solve(Eigen::MatrixXd(b)));
}

DenseMatrix SpdFactor::lower_dense() const {
    if (!impl_) throw Error("lower_dense: empty factor");
    if (impl_->dense) return DenseMatrix(impl_->dense_llt.matrixL());
    // Simplicial LLT stores P^T L L^T P; undo the fill-reducing permutation so
    // L L^T reproduces the original matrix.
    const auto& P = impl_->sparse_llt.permutationPinv();
    Eigen::MatrixXd l = P * Eigen::MatrixXd(impl_->sparse_llt.matrixL());
    return DenseMatrix(l);
}

}  // namespace dspp
