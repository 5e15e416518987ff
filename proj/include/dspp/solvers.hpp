#pragma once

#include <filesystem>
#include <vector>

#include "dspp/precond.hpp"

namespace dspp {

enum class Side { Left, Right };

enum class SolveStatus { Converged, MaxIter, Breakdown };

struct SolverConfig {
    double tol = 1e-6;    // on the true relative residual RES
    int max_iter = 5000;
    Side side = Side::Left;
    bool record_history = true;
};

struct SolveReport {
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIter;
    int iterations = 0;
    std::vector<double> res_history;  // RES(u^(0)), RES after each step
    double setup_seconds = 0.0;
    double iterate_seconds = 0.0;
    double final_res = 1.0;
};

/// Full (unrestarted) GMRES with modified Gram-Schmidt plus one
/// reorthogonalization pass. Left preconditioning solves M^{-1} B u = M^{-1} b
/// but convergence is declared on the TRUE residual ||B u - b|| / ||b||,
/// evaluated every iteration from the current Arnoldi least-squares iterate.
/// Iterations count Arnoldi steps; the initial guess is zero. Arnoldi
/// breakdown below 1e-14 * ||first Krylov vector|| is reported (not thrown)
/// with the best iterate.
std::pair<Vector, SolveReport> gmres(const DsppBlocks& blocks, const Vector& b,
                                     const PreparedPreconditioner& prep, const SolverConfig& cfg);

/// Stationary GSS iteration u <- u + M^{-1}(b - B u) from u = 0, stopping on
/// RES < tol. Non-convergence within max_iter is reported via the status.
std::pair<Vector, SolveReport> stationary_gss(const DsppBlocks& blocks, const GssParams& params,
                                              const Vector& b, double tol = 1e-6,
                                              int max_iter = 5000);

/// rho(M_GSS^{-1} N_GSS) via dense eigenvalues of the explicitly formed
/// iteration matrix.
double iteration_matrix_spectral_radius(const DsppBlocks& blocks, const GssParams& params);

/// Solve result export: JSON {converged, iterations, res_history, timings}
/// and CSV residual history (iteration, RES).
void solve_report_to_json_file(const std::filesystem::path& path, const SolveReport& report);
void write_residual_csv(const std::filesystem::path& path, const SolveReport& report);

}  // namespace dspp
