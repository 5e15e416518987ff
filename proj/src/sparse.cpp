#include "dspp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dspp/errors.hpp"

namespace dspp {

void warn(const std::string& message) {
    std::fputs(("[dspp] warning: " + message + "\n").c_str(), stderr);
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::span<const Triplet> entries) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimensions");
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw DimensionMismatch("triplet outside matrix shape");
    }
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ta = entries[a];
        const auto& tb = entries[b];
        return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
    });

    SparseMatrix out;
    out.rows_ = rows;
    out.cols_ = cols;
    out.row_offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
    out.col_indices_.reserve(entries.size());
    out.values_.reserve(entries.size());

    std::size_t k = 0;
    for (Index r = 0; r < rows; ++r) {
        while (k < order.size() && entries[order[k]].row == r) {
            const Index c = entries[order[k]].col;
            double v = 0.0;
            while (k < order.size() && entries[order[k]].row == r && entries[order[k]].col == c) {
                v += entries[order[k]].value;
                ++k;
            }
            if (v != 0.0) {
                out.col_indices_.push_back(c);
                out.values_.push_back(v);
            }
        }
        out.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<Index>(out.values_.size());
    }
    return out;
}

SparseMatrix SparseMatrix::identity(Index n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, t);
}

SparseMatrix SparseMatrix::diagonal(const Vector& d) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(d.size()));
    for (Index i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return from_triplets(d.size(), d.size(), t);
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
    std::vector<Triplet> t;
    for (Index i = 0; i < dense.rows(); ++i)
        for (Index j = 0; j < dense.cols(); ++j)
            if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
    return from_triplets(dense.rows(), dense.cols(), t);
}

SparseMatrix SparseMatrix::from_eigen(const Eigen::SparseMatrix<double>& m) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            t.push_back({static_cast<Index>(it.row()), static_cast<Index>(it.col()), it.value()});
    return from_triplets(m.rows(), m.cols(), t);
}

double SparseMatrix::coeff(Index i, Index j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionMismatch("coeff out of range");
    const auto begin = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(i)];
    const auto end = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

Vector SparseMatrix::multiply(const Vector& x) const {
    if (x.size() != cols_) throw DimensionMismatch("matvec size mismatch");
    Vector y = Vector::Zero(rows_);
    for (Index i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            acc += values_[static_cast<std::size_t>(k)] * x[col_indices_[static_cast<std::size_t>(k)]];
        y[i] = acc;
    }
    return y;
}

Vector SparseMatrix::multiply_transposed(const Vector& x) const {
    if (x.size() != rows_) throw DimensionMismatch("matvec size mismatch");
    Vector y = Vector::Zero(cols_);
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            y[col_indices_[static_cast<std::size_t>(k)]] += values_[static_cast<std::size_t>(k)] * x[i];
    return y;
}

DenseMatrix SparseMatrix::multiply(const DenseMatrix& x) const {
    if (x.rows() != cols_) throw DimensionMismatch("matmul size mismatch");
    DenseMatrix y = DenseMatrix::Zero(rows_, x.cols());
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            y.row(i) += values_[static_cast<std::size_t>(k)] * x.row(col_indices_[static_cast<std::size_t>(k)]);
    return y;
}

DenseMatrix SparseMatrix::multiply_transposed(const DenseMatrix& x) const {
    if (x.rows() != rows_) throw DimensionMismatch("matmul size mismatch");
    DenseMatrix y = DenseMatrix::Zero(cols_, x.cols());
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            y.row(col_indices_[static_cast<std::size_t>(k)]) += values_[static_cast<std::size_t>(k)] * x.row(i);
    return y;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            t.push_back({col_indices_[static_cast<std::size_t>(k)], i, values_[static_cast<std::size_t>(k)]});
    return from_triplets(cols_, rows_, t);
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            t.push_back({i, col_indices_[static_cast<std::size_t>(k)],
                         factor * values_[static_cast<std::size_t>(k)]});
    return from_triplets(rows_, cols_, t);
}

SparseMatrix SparseMatrix::add(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionMismatch("add shape mismatch");
    std::vector<Triplet> t;
    t.reserve(A.values_.size() + B.values_.size());
    for (Index i = 0; i < A.rows_; ++i)
        for (Index k = A.row_offsets_[i]; k < A.row_offsets_[i + 1]; ++k)
            t.push_back({i, A.col_indices_[static_cast<std::size_t>(k)],
                         a * A.values_[static_cast<std::size_t>(k)]});
    for (Index i = 0; i < B.rows_; ++i)
        for (Index k = B.row_offsets_[i]; k < B.row_offsets_[i + 1]; ++k)
            t.push_back({i, B.col_indices_[static_cast<std::size_t>(k)],
                         b * B.values_[static_cast<std::size_t>(k)]});
    return from_triplets(A.rows_, A.cols_, t);
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& A, const SparseMatrix& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch("product shape mismatch");
    Eigen::SparseMatrix<double> prod = (A.to_eigen() * B.to_eigen()).pruned(0.0);
    return from_eigen(prod);
}

SparseMatrix SparseMatrix::kron(const SparseMatrix& A, const SparseMatrix& B) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(A.nnz()) * static_cast<std::size_t>(B.nnz()));
    for (Index ia = 0; ia < A.rows_; ++ia)
        for (Index ka = A.row_offsets_[ia]; ka < A.row_offsets_[ia + 1]; ++ka) {
            const Index ja = A.col_indices_[static_cast<std::size_t>(ka)];
            const double va = A.values_[static_cast<std::size_t>(ka)];
            for (Index ib = 0; ib < B.rows_; ++ib)
                for (Index kb = B.row_offsets_[ib]; kb < B.row_offsets_[ib + 1]; ++kb)
                    t.push_back({ia * B.rows_ + ib,
                                 ja * B.cols_ + B.col_indices_[static_cast<std::size_t>(kb)],
                                 va * B.values_[static_cast<std::size_t>(kb)]});
        }
    return from_triplets(A.rows_ * B.rows_, A.cols_ * B.cols_, t);
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            d(i, col_indices_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    return d;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(values_.size());
    for (Index i = 0; i < rows_; ++i)
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            t.emplace_back(static_cast<int>(i), static_cast<int>(col_indices_[static_cast<std::size_t>(k)]),
                           values_[static_cast<std::size_t>(k)]);
    Eigen::SparseMatrix<double> m(static_cast<int>(rows_), static_cast<int>(cols_));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

double SparseMatrix::frobenius_norm_sq() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return acc;
}

double SparseMatrix::relative_asymmetry() const {
    if (rows_ != cols_) throw DimensionMismatch("asymmetry of a non-square matrix");
    const SparseMatrix diff = add(1.0, *this, -1.0, transposed());
    const double denom = std::sqrt(frobenius_norm_sq());
    if (denom == 0.0) return 0.0;
    return std::sqrt(diff.frobenius_norm_sq()) / denom;
}

double trace_product(const SparseMatrix& P, const SparseMatrix& A) {
    if (P.rows() != P.cols() || A.rows() != A.cols() || P.rows() != A.rows())
        throw DimensionMismatch("trace_product needs equal square matrices");
    double acc = 0.0;
    const auto& offsets = P.row_offsets();
    const auto& cols = P.col_indices();
    const auto& vals = P.values();
    for (Index i = 0; i < P.rows(); ++i)
        for (Index k = offsets[static_cast<std::size_t>(i)]; k < offsets[static_cast<std::size_t>(i) + 1]; ++k)
            acc += vals[static_cast<std::size_t>(k)] * A.coeff(cols[static_cast<std::size_t>(k)], i);
    return acc;
}

double frobenius_norm_sq(const SparseMatrix& m) { return m.frobenius_norm_sq(); }

double symmetric_spectral_norm_estimate(const SparseMatrix& m, int iterations) {
    if (m.rows() != m.cols()) throw DimensionMismatch("spectral norm of a non-square matrix");
    if (m.rows() == 0 || m.nnz() == 0) return 0.0;
    Vector v = Vector::Ones(m.rows());
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector w = m.multiply(v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        lambda = norm;
        v = w / norm;
    }
    return lambda;
}

}  // namespace dspp
