#include "dspp/model.hpp"

#include <fstream>

#include <json.hpp>

#include "dspp/config.hpp"
#include "dspp/errors.hpp"
#include "dspp/linalg.hpp"
#include "dspp/matrix_market.hpp"
#include "dspp/spd_factor.hpp"

namespace dspp {

DsppBlocks DsppBlocks::create(SparseMatrix A, SparseMatrix B, SparseMatrix C, SparseMatrix D) {
    DsppBlocks blocks;
    blocks.n = A.rows();
    blocks.l = D.rows();
    blocks.m = B.rows();
    if (A.rows() != A.cols()) throw DimensionMismatch("A must be square");
    if (D.rows() != D.cols()) throw DimensionMismatch("D must be square");
    if (B.cols() != blocks.n) throw DimensionMismatch("B must be m x n");
    if (C.rows() != blocks.l || C.cols() != blocks.m) throw DimensionMismatch("C must be l x m");
    if (!A.is_symmetric(1e-12)) throw DimensionMismatch("A must be symmetric");
    if (!D.is_symmetric(1e-12)) throw DimensionMismatch("D must be symmetric");
    if (!(blocks.n >= blocks.m && blocks.m >= blocks.l))
        warn("block sizes violate n >= m >= l (n=" + std::to_string(blocks.n) +
             ", m=" + std::to_string(blocks.m) + ", l=" + std::to_string(blocks.l) + ")");
    blocks.A = std::move(A);
    blocks.B = std::move(B);
    blocks.C = std::move(C);
    blocks.D = std::move(D);
    return blocks;
}

Vector Rhs::concat() const {
    Vector b(p.size() + q.size() + r.size());
    b << p, q, r;
    return b;
}

Rhs Rhs::split(const DsppBlocks& blocks, const Vector& b) {
    if (b.size() != blocks.order()) throw DimensionMismatch("rhs length mismatch");
    Rhs rhs;
    rhs.p = b.segment(0, blocks.n);
    rhs.q = b.segment(blocks.n, blocks.l);
    rhs.r = b.segment(blocks.n + blocks.l, blocks.m);
    return rhs;
}

SparseMatrix assemble_full(const DsppBlocks& blocks) {
    const Index n = blocks.n, l = blocks.l, m = blocks.m;
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(blocks.A.nnz() + blocks.D.nnz() + 2 * blocks.B.nnz() +
                                       2 * blocks.C.nnz()));
    auto emit = [&t](const SparseMatrix& block, Index row0, Index col0, double scale, bool transpose) {
        const auto& offsets = block.row_offsets();
        const auto& cols = block.col_indices();
        const auto& vals = block.values();
        for (Index i = 0; i < block.rows(); ++i)
            for (Index k = offsets[static_cast<std::size_t>(i)];
                 k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
                const Index j = cols[static_cast<std::size_t>(k)];
                const double v = scale * vals[static_cast<std::size_t>(k)];
                if (transpose)
                    t.push_back({row0 + j, col0 + i, v});
                else
                    t.push_back({row0 + i, col0 + j, v});
            }
    };
    emit(blocks.A, 0, 0, 1.0, false);
    emit(blocks.B, 0, n + l, 1.0, true);    // B^T in block (1,3)
    emit(blocks.D, n, n, 1.0, false);
    emit(blocks.C, n, n + l, 1.0, false);   // C in block (2,3)
    emit(blocks.B, n + l, 0, -1.0, false);  // -B in block (3,1)
    emit(blocks.C, n + l, n, -1.0, true);   // -C^T in block (3,2)
    return SparseMatrix::from_triplets(n + l + m, n + l + m, t);
}

namespace {

bool spd_by_factorization(const SparseMatrix& m) {
    if (!m.is_symmetric(1e-12)) return false;
    try {
        (void)SpdFactor::factorize(m);
        return true;
    } catch (const NotSpd&) {
        return false;
    }
}

RankFlag full_row_rank_flag(const SparseMatrix& m) {
    if (std::min(m.rows(), m.cols()) > 2000) return RankFlag::Skipped;
    if (m.rows() > m.cols()) return RankFlag::False;
    Eigen::BDCSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m.to_dense())};
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return RankFlag::False;
    const double smax = sv[0];
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * smax) ++rank;
    return rank == m.rows() ? RankFlag::True : RankFlag::False;
}

}  // namespace

ValidationReport validate(const DsppBlocks& blocks) {
    ValidationReport report;
    report.size_ordering_ok = blocks.n >= blocks.m && blocks.m >= blocks.l;
    report.a_spd = spd_by_factorization(blocks.A);
    report.d_spd = spd_by_factorization(blocks.D);
    if (report.d_spd) {
        report.d_sps = true;
    } else if (blocks.l <= dense_cap()) {
        // smallest eigenvalue >= -1e-12 * ||D||_2 counts as semidefinite
        const auto evs = dense_eigenvalues(blocks.D.to_dense());
        double lo = 0.0, hi = 0.0;
        for (const auto& ev : evs) {
            lo = std::min(lo, ev.real());
            hi = std::max(hi, std::abs(ev));
        }
        report.d_sps = lo >= -1e-12 * hi;
    }
    try {
        report.b_full_row_rank = full_row_rank_flag(blocks.B);
        report.c_full_row_rank = full_row_rank_flag(blocks.C);
    } catch (const TooLarge&) {
        report.b_full_row_rank = RankFlag::Skipped;
        report.c_full_row_rank = RankFlag::Skipped;
    }
    if (blocks.order() <= dense_cap() && blocks.order() <= 4000) {
        const auto [smax, smin] = singular_value_extremes(assemble_full(blocks).to_dense());
        (void)smax;
        report.nonsingular_estimate = smin;
    }
    return report;
}

double residual(const DsppBlocks& blocks, const Vector& u, const Vector& b) {
    if (u.size() != blocks.order() || b.size() != blocks.order())
        throw DimensionMismatch("residual: vector length mismatch");
    const double bnorm = b.norm();
    if (bnorm == 0.0) throw ZeroRhs("residual: right-hand side is zero");
    return (apply_operator(blocks, u) - b).norm() / bnorm;
}

Vector apply_operator(const DsppBlocks& blocks, const Vector& u) {
    if (u.size() != blocks.order()) throw DimensionMismatch("apply_operator: length mismatch");
    const Index n = blocks.n, l = blocks.l, m = blocks.m;
    const Vector x = u.segment(0, n);
    const Vector y = u.segment(n, l);
    const Vector z = u.segment(n + l, m);
    Vector out(n + l + m);
    out.segment(0, n) = blocks.A.multiply(x) + blocks.B.multiply_transposed(z);
    out.segment(n, l) = blocks.D.multiply(y) + blocks.C.multiply(z);
    out.segment(n + l, m) = -blocks.B.multiply(x) - blocks.C.multiply_transposed(y);
    return out;
}

void save_bundle(const std::filesystem::path& dir, const DsppBlocks& blocks,
                 const std::optional<Rhs>& rhs) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir / "A.mtx", blocks.A, MmSymmetry::Symmetric);
    write_matrix_market(dir / "B.mtx", blocks.B, MmSymmetry::General);
    write_matrix_market(dir / "C.mtx", blocks.C, MmSymmetry::General);
    write_matrix_market(dir / "D.mtx", blocks.D, MmSymmetry::Symmetric);
    nlohmann::json meta;
    meta["n"] = blocks.n;
    meta["l"] = blocks.l;
    meta["m"] = blocks.m;
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << "\n";
    if (rhs) write_vector(dir / "b.vec", rhs->concat());
}

std::pair<DsppBlocks, std::optional<Rhs>> load_bundle(const std::filesystem::path& dir) {
    std::ifstream in(dir / "meta.json");
    if (!in) throw ParseError("load_bundle: missing meta.json in " + dir.string());
    nlohmann::json meta = nlohmann::json::parse(in);
    const Index n = meta.at("n").get<Index>();
    const Index l = meta.at("l").get<Index>();
    const Index m = meta.at("m").get<Index>();

    DsppBlocks blocks = DsppBlocks::create(
        read_matrix_market(dir / "A.mtx"), read_matrix_market(dir / "B.mtx"),
        read_matrix_market(dir / "C.mtx"), read_matrix_market(dir / "D.mtx"));
    if (blocks.n != n || blocks.l != l || blocks.m != m)
        throw ParseError("load_bundle: meta.json sizes disagree with matrix files");

    std::optional<Rhs> rhs;
    if (std::filesystem::exists(dir / "b.vec"))
        rhs = Rhs::split(blocks, read_vector(dir / "b.vec"));
    return {std::move(blocks), std::move(rhs)};
}

}  // namespace dspp
