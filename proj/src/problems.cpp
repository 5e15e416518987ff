#include "dspp/problems.hpp"

#include <cmath>

#include "dspp/errors.hpp"
#include "dspp/linalg.hpp"
#include "dspp/rng.hpp"

namespace dspp {

namespace {

SparseMatrix tridiag(Index n, double sub, double diag, double super) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(3 * n));
    for (Index i = 0; i < n; ++i) {
        if (i > 0) t.push_back({i, i - 1, sub});
        t.push_back({i, i, diag});
        if (i + 1 < n) t.push_back({i, i + 1, super});
    }
    return SparseMatrix::from_triplets(n, n, t);
}

}  // namespace

std::pair<DsppBlocks, Rhs> poisson_control(const PoissonControlSpec& spec) {
    if (spec.pow < 2) throw Error("poisson_control: pow must be at least 2");
    if (!(spec.reg_beta > 0.0 && spec.reg_beta <= 1.0))
        throw Error("poisson_control: reg_beta must lie in (0, 1]");
    const Index grid = (Index{1} << spec.pow) - 1;
    const double h = 1.0 / static_cast<double>(Index{1} << spec.pow);

    // 1D Q1 mass (1/6)[1 4 1] and stiffness [-1 2 -1] on the uniform mesh.
    const SparseMatrix mass1 = tridiag(grid, 1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0);
    const SparseMatrix stiff1 = tridiag(grid, -1.0, 2.0, -1.0);
    const SparseMatrix eye = SparseMatrix::identity(grid);

    const SparseMatrix M = SparseMatrix::kron(mass1, mass1).scaled(h * h);
    const SparseMatrix K = SparseMatrix::add(1.0, SparseMatrix::kron(stiff1, eye), 1.0,
                                             SparseMatrix::kron(eye, stiff1));

    const Index n = grid * grid;
    Vector uhat(n);
    for (Index ix = 0; ix < grid; ++ix) {
        const double x = static_cast<double>(ix + 1) * h;
        for (Index iy = 0; iy < grid; ++iy) {
            const double y = static_cast<double>(iy + 1) * h;
            double value;
            if (spec.desired == DesiredState::Sine) {
                value = std::sin(M_PI * x) * std::sin(M_PI * y);
            } else {
                value = (x <= 0.5 && y <= 0.5)
                            ? (2.0 * x - 1.0) * (2.0 * x - 1.0) * (2.0 * y - 1.0) * (2.0 * y - 1.0)
                            : 0.0;
            }
            uhat[ix * grid + iy] = value;
        }
    }

    DsppBlocks blocks = DsppBlocks::create(M.scaled(spec.reg_beta), K, M.scaled(-1.0), M);
    Rhs rhs;
    rhs.p = Vector::Zero(n);
    rhs.q = M.multiply(uhat);
    rhs.r = Vector::Zero(n);
    return {std::move(blocks), std::move(rhs)};
}

namespace {

SparseMatrix random_sparse(SplitMix64& rng, Index rows, Index cols, double density) {
    std::vector<Triplet> t;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (rng.uniform01() < density) t.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return SparseMatrix::from_triplets(rows, cols, t);
}

SparseMatrix random_spd(SplitMix64& rng, Index n, double density) {
    const SparseMatrix g = random_sparse(rng, n, n, density);
    const SparseMatrix ggt = SparseMatrix::multiply(g, g.transposed());
    return SparseMatrix::add(1.0, ggt, static_cast<double>(n), SparseMatrix::identity(n));
}

SparseMatrix random_full_row_rank(SplitMix64& rng, Index rows, Index cols, double density,
                                  const char* name) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        SparseMatrix candidate = random_sparse(rng, rows, cols, density);
        const auto [smax, smin] = singular_value_extremes(candidate.to_dense());
        if (smax > 0.0 && smin > 1e-8 * smax) return candidate;
    }
    throw RankDeficient(std::string("random_dspp: could not draw a full-row-rank ") + name +
                        " in 10 attempts");
}

}  // namespace

DsppBlocks random_dspp(Index n, Index l, Index m, std::uint64_t seed, double density) {
    if (!(n >= m && m >= l && l >= 1)) throw DimensionMismatch("random_dspp requires n >= m >= l >= 1");
    SplitMix64 rng(mix64(seed));
    SparseMatrix a = random_spd(rng, n, density);
    SparseMatrix d = random_spd(rng, l, density);
    SparseMatrix b = random_full_row_rank(rng, m, n, density, "B");
    SparseMatrix c = random_full_row_rank(rng, l, m, density, "C");
    return DsppBlocks::create(std::move(a), std::move(b), std::move(c), std::move(d));
}

std::pair<DsppBlocks, Rhs> toy_111() {
    auto scal = [](double v) {
        const Triplet t{0, 0, v};
        return SparseMatrix::from_triplets(1, 1, std::span<const Triplet>(&t, 1));
    };
    DsppBlocks blocks = DsppBlocks::create(scal(2.0), scal(1.0), scal(1.0), scal(3.0));
    Rhs rhs;
    rhs.p = Vector::Constant(1, 1.0);
    rhs.q = Vector::Zero(1);
    rhs.r = Vector::Zero(1);
    return {std::move(blocks), std::move(rhs)};
}

namespace {

double dense_population_std(const SparseMatrix& m) {
    const double count = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
    if (count == 0.0) return 0.0;
    double sum = 0.0, sum_sq = 0.0;
    for (double v : m.values()) {
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / count;
    const double variance = sum_sq / count - mean * mean;
    return variance > 0.0 ? std::sqrt(variance) : 0.0;
}

SparseMatrix add_gaussian_noise(const SparseMatrix& block, double scale, std::uint64_t seed,
                                std::uint64_t stream) {
    DenseMatrix dense = block.to_dense();
    for (Index i = 0; i < dense.rows(); ++i)
        for (Index j = 0; j < dense.cols(); ++j)
            dense(i, j) += scale * counter_gauss(seed, stream,
                                                 static_cast<std::uint64_t>(i * dense.cols() + j));
    return SparseMatrix::from_dense(dense);
}

}  // namespace

DsppBlocks perturb(const DsppBlocks& blocks, const PerturbationSpec& spec) {
    if (spec.noise_percent == 0.0 || spec.epsilon == 0.0) return blocks;
    const double scale_b = spec.epsilon * spec.noise_percent * dense_population_std(blocks.B);
    const double scale_c = spec.epsilon * spec.noise_percent * dense_population_std(blocks.C);
    SparseMatrix b = add_gaussian_noise(blocks.B, scale_b, spec.seed, /*stream=*/0);
    SparseMatrix c = add_gaussian_noise(blocks.C, scale_c, spec.seed, /*stream=*/1);
    return DsppBlocks::create(blocks.A, std::move(b), std::move(c), blocks.D);
}

}  // namespace dspp
