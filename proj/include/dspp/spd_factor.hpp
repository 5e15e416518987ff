#pragma once

#include <memory>

#include "dspp/sparse.hpp"

namespace dspp {

/// Cached Cholesky factorization of an SPD matrix. Small matrices are
/// factored densely, large ones by sparse simplicial Cholesky; the choice is
/// an implementation detail. Read-only after construction and safe to share
/// across concurrent solves.
class SpdFactor {
  public:
    SpdFactor() = default;

    /// Symmetrizes the input as (M + M^T)/2 before factoring; warns when the
    /// relative asymmetry exceeds 1e-12. Throws NotSpd on a nonpositive pivot.
    static SpdFactor factorize(const SparseMatrix& m);

    /// Dense-path factorization for already-dense matrices (Schur blocks).
    static SpdFactor factorize_dense(const DenseMatrix& m);

    Index dimension() const;

    Vector solve(const Vector& b) const;
    DenseMatrix solve(const DenseMatrix& b) const;

    /// Dense lower-triangular factor L with L L^T = input.
    DenseMatrix lower_dense() const;

    bool valid() const { return impl_ != nullptr; }

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace dspp
