#pragma once

#include <filesystem>
#include <optional>

#include "dspp/sparse.hpp"

namespace dspp {

/// The four blocks of the double saddle point operator
///
///     [  A   0   B^T ] [x]   [p]
///     [  0   D   C   ] [y] = [q]
///     [ -B  -C^T  0  ] [z]   [r]
///
/// with A (n x n) SPD, B (m x n) full row rank, C (l x m), D (l x l)
/// symmetric positive (semi)definite. Unknowns are stored [x; y; z] with
/// sizes n, l, m. Immutable after construction.
struct DsppBlocks {
    SparseMatrix A, B, C, D;
    Index n = 0, l = 0, m = 0;

    /// Checks dimensional consistency and symmetry of A and D; warns (does
    /// not throw) when n >= m >= l fails, since the theory is unaffected.
    static DsppBlocks create(SparseMatrix A, SparseMatrix B, SparseMatrix C, SparseMatrix D);

    Index order() const { return n + l + m; }
};

struct Rhs {
    Vector p, q, r;

    Vector concat() const;
    static Rhs split(const DsppBlocks& blocks, const Vector& b);
};

enum class RankFlag { True, False, Skipped };

struct ValidationReport {
    bool a_spd = false;
    bool d_spd = false;
    bool d_sps = false;
    RankFlag b_full_row_rank = RankFlag::Skipped;
    RankFlag c_full_row_rank = RankFlag::Skipped;
    std::optional<double> nonsingular_estimate;  // sigma_min of the assembled operator
    bool size_ordering_ok = true;                // n >= m >= l

    bool all_hypotheses_hold() const {
        return a_spd && d_sps && b_full_row_rank == RankFlag::True &&
               c_full_row_rank == RankFlag::True;
    }
};

/// Assembles the order-(n+l+m) operator. nnz equals
/// nnz(A) + nnz(D) + 2 nnz(B) + 2 nnz(C).
SparseMatrix assemble_full(const DsppBlocks& blocks);

/// SPD flags via factorization attempts, rank flags via singular values above
/// 1e-10 * sigma_max (skipped above desk scale), sigma_min of the assembled
/// operator when the total order fits the dense cap. Never throws; every
/// failure is reported in the flags.
ValidationReport validate(const DsppBlocks& blocks);

/// RES := ||B u - b||_2 / ||b||_2. Throws ZeroRhs when ||b|| = 0.
double residual(const DsppBlocks& blocks, const Vector& u, const Vector& b);

/// Matrix-free action of the assembled operator.
Vector apply_operator(const DsppBlocks& blocks, const Vector& u);

/// Block bundle on disk: A.mtx, B.mtx, C.mtx, D.mtx, meta.json {n,l,m} and
/// optionally b.vec.
void save_bundle(const std::filesystem::path& dir, const DsppBlocks& blocks,
                 const std::optional<Rhs>& rhs = std::nullopt);
std::pair<DsppBlocks, std::optional<Rhs>> load_bundle(const std::filesystem::path& dir);

}  // namespace dspp
