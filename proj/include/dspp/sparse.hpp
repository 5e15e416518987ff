#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <span>
#include <vector>

namespace dspp {

using Index = std::int64_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Triplet {
    Index row = 0;
    Index col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; duplicate triplets are summed at construction and exact
/// zeros are pruned. Immutable after construction.
class SparseMatrix {
  public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries);
    static SparseMatrix identity(Index n);
    static SparseMatrix diagonal(const Vector& d);
    static SparseMatrix from_dense(const DenseMatrix& dense);
    static SparseMatrix from_eigen(const Eigen::SparseMatrix<double>& m);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& row_offsets() const { return row_offsets_; }
    const std::vector<Index>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    /// Stored value at (i, j), 0 for entries outside the pattern.
    double coeff(Index i, Index j) const;

    Vector multiply(const Vector& x) const;             // A x
    Vector multiply_transposed(const Vector& x) const;  // A^T x
    DenseMatrix multiply(const DenseMatrix& x) const;
    DenseMatrix multiply_transposed(const DenseMatrix& x) const;

    SparseMatrix transposed() const;
    SparseMatrix scaled(double factor) const;

    /// a*A + b*B with exact-zero pruning.
    static SparseMatrix add(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

    /// Sparse-sparse product.
    static SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);

    /// Kronecker product.
    static SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B);

    DenseMatrix to_dense() const;
    Eigen::SparseMatrix<double> to_eigen() const;

    double frobenius_norm_sq() const;

    /// Relative asymmetry ||A - A^T||_F / ||A||_F (0 for the zero matrix).
    double relative_asymmetry() const;
    bool is_symmetric(double rel_tol) const { return relative_asymmetry() <= rel_tol; }

    bool operator==(const SparseMatrix& other) const = default;

  private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<Index> row_offsets_ = {0};
    std::vector<Index> col_indices_;
    std::vector<double> values_;
};

/// tr(P A) over the stored pattern of P; requires P, A square of equal size.
double trace_product(const SparseMatrix& P, const SparseMatrix& A);

/// ||M||_F^2 as an exact sum over stored entries.
double frobenius_norm_sq(const SparseMatrix& m);

/// Largest-magnitude eigenvalue estimate of a symmetric sparse matrix
/// (power iteration; used to size ridge terms).
double symmetric_spectral_norm_estimate(const SparseMatrix& m, int iterations = 128);

}  // namespace dspp
