#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dspp/linalg.hpp"
#include "dspp/solvers.hpp"

namespace dspp {

struct BoundRecord {
    std::string name;
    bool pass = false;
    double value = 0.0;  // quantity checked
    double lower = 0.0;
    double upper = 0.0;
    double margin = 0.0;  // distance to the violated/nearest bound
};

/// Eigenvalues of a preconditioned operator together with the theorem checks
/// that apply to the preconditioner's kind: clustering radius for GSS,
/// 1/omega multiplicity and the Theorem-5.1 theta bounds for RGSS-I,
/// multiplicity n+l and the interval enclosure for RGSS-II, positive
/// stability for the raw operator.
struct SpectrumReport {
    Kind kind = Kind::None;
    double omega = 0.0;
    std::vector<Complex> eigenvalues;
    double cluster_radius = 0.0;          // max |lambda - 1|
    int one_over_omega_multiplicity = 0;  // |lambda - 1/w| <= 1e-6 * (1/w)
    std::vector<BoundRecord> bound_checks;

    bool all_pass() const {
        for (const auto& r : bound_checks)
            if (!r.pass) return false;
        return true;
    }
};

/// M^{-1} B formed explicitly, one preconditioner application per column.
DenseMatrix preconditioned_dense(const DsppBlocks& blocks, const PreparedPreconditioner& prep);

SpectrumReport preconditioned_spectrum(const DsppBlocks& blocks, const PreparedPreconditioner& prep);

/// Theorem-5.1 checks for an RGSS-I spectrum: maps each non-cluster
/// eigenvalue mu through theta = mu / (1 - w mu) and tests real-theta values
/// against [min{lmin(Q^-1 D)/beta, lmin(R^-1 S)/tau}, max{...}] and
/// complex-theta values against the half-sum bounds plus the sigma_max bound
/// on |Im(theta)|, all with inflation 1e-8.
std::vector<BoundRecord> rgss1_bound_check(const DsppBlocks& blocks, const GssParams& params,
                                           const std::vector<Complex>& spectrum);

/// Enclosure for the non-cluster RGSS-II eigenvalues, from the extreme
/// eigenvalues eta of R^{-1} B A^{-1} B^T and xi of R^{-1} C^T D^{-1} C:
///   [ (eta_min + xi_min) / (w eta_max + w xi_max + tau),
///     (eta_max + xi_max) / (w eta_min + w xi_min + tau) ].
std::pair<double, double> rgss2_interval(const DsppBlocks& blocks, const GssParams& params);

struct KrylovBoundCheck {
    int iterations = 0;
    int bound = 0;  // m + 1
    bool pass = false;
};

/// Runs RGSS-II preconditioned GMRES at tol 1e-12 and compares the iteration
/// count against the minimal-polynomial bound m + 1 (one extra iteration of
/// roundoff slack allowed).
KrylovBoundCheck krylov_bound_check(const DsppBlocks& blocks, const GssParams& params,
                                    const Vector& b);

/// kappa_2 of the explicitly formed M^{-1} B.
double preconditioned_condition_number(const DsppBlocks& blocks, const PreparedPreconditioner& prep);

/// Scatter export: "re,im,kind,omega" rows.
void write_scatter_csv(const std::filesystem::path& path, const SpectrumReport& report);

}  // namespace dspp
