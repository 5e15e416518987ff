#pragma once

#include <cstdint>

#include "dspp/model.hpp"

namespace dspp {

enum class DesiredState {
    /// Piecewise target (2x-1)^2 (2y-1)^2 on [0, 1/2]^2, zero elsewhere.
    Bump,
    /// sin(pi x) sin(pi y). On the tensor grid this is a common eigenvector
    /// of the mass matrix and the discrete Laplacian, which collapses the
    /// Krylov space of the unpreconditioned system to dimension 3; use Bump
    /// for benchmarking.
    Sine,
};

/// Distributed Poisson control family: grid of (2^pow - 1)^2 interior nodes,
/// Q1 tensor mass matrix M (consistent, h^2-scaled), 5-point Laplacian K, and
/// blocks A = reg_beta*M, B = K, C = -M, D = M, so n = l = m.
struct PoissonControlSpec {
    int pow = 4;
    double reg_beta = 0.1;
    DesiredState desired = DesiredState::Bump;
};

std::pair<DsppBlocks, Rhs> poisson_control(const PoissonControlSpec& spec);

/// Seeded random instance satisfying the solvability hypotheses:
/// A = G G^T + n I, D = H H^T + l I, B and C resampled (at most 10 times)
/// until sigma_min > 1e-8 * sigma_max. Pure function of its arguments.
DsppBlocks random_dspp(Index n, Index l, Index m, std::uint64_t seed, double density = 0.6);

/// Hand-traceable 1x1x1 instance: A=[2], D=[3], B=[1], C=[1], b=[1,0,0].
std::pair<DsppBlocks, Rhs> toy_111();

/// Gaussian perturbation of B and C: Delta = epsilon * n_p * std(block) .* N(0,1),
/// std taken over the full dense shape (zeros included, population variance).
struct PerturbationSpec {
    double noise_percent = 0.0;  // n_p in [0, 100]
    double epsilon = 1e-6;
    std::uint64_t seed = 0;
};

DsppBlocks perturb(const DsppBlocks& blocks, const PerturbationSpec& spec);

}  // namespace dspp
