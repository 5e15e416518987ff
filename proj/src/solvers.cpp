#include "dspp/solvers.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dspp/config.hpp"
#include "dspp/errors.hpp"
#include "dspp/linalg.hpp"

namespace dspp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::pair<Vector, SolveReport> gmres(const DsppBlocks& blocks, const Vector& b,
                                     const PreparedPreconditioner& prep, const SolverConfig& cfg) {
    const Index N = blocks.order();
    if (b.size() != N) throw DimensionMismatch("gmres: right-hand side length mismatch");
    if (cfg.max_iter < 1) throw Error("gmres: max_iter must be at least 1");
    const double bnorm = b.norm();
    if (bnorm == 0.0) throw ZeroRhs("gmres: right-hand side is zero");

    const auto t0 = Clock::now();
    SolveReport report;
    report.setup_seconds = prep.setup_seconds();

    const bool left = cfg.side == Side::Left;
    const Vector r0 = left ? prep.apply(b) : b;
    const double beta = r0.norm();
    Vector best = Vector::Zero(N);
    double best_res = 1.0;  // RES(0) = ||b|| / ||b||
    if (cfg.record_history) report.res_history.push_back(best_res);

    if (beta == 0.0) {
        // M^{-1} b = 0 can only stem from b = 0, excluded above.
        report.status = SolveStatus::Breakdown;
        report.final_res = best_res;
        report.iterate_seconds = seconds_since(t0);
        return {best, report};
    }
    const double breakdown_tol = 1e-14 * beta;

    std::vector<Vector> basis;
    basis.push_back(r0 / beta);
    // Hessenberg columns after Givens (upper triangular R), rotation pairs,
    // and the rotated right-hand side g.
    std::vector<std::vector<double>> r_cols;
    std::vector<double> givens_c, givens_s, g{beta};

    int k = 0;
    bool done = false;
    while (k < cfg.max_iter && !done) {
        // Arnoldi step with modified Gram-Schmidt and one reorthogonalization.
        Vector w = apply_operator(blocks, left ? basis[static_cast<std::size_t>(k)]
                                               : prep.apply(basis[static_cast<std::size_t>(k)]));
        if (left) w = prep.apply(w);
        std::vector<double> h(static_cast<std::size_t>(k) + 2, 0.0);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= k; ++i) {
                const double proj = basis[static_cast<std::size_t>(i)].dot(w);
                h[static_cast<std::size_t>(i)] += proj;
                w -= proj * basis[static_cast<std::size_t>(i)];
            }
        const double h_next = w.norm();
        h[static_cast<std::size_t>(k) + 1] = h_next;

        // Fold the new column through the accumulated rotations.
        for (int i = 0; i < k; ++i) {
            const double tmp = givens_c[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] +
                               givens_s[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i) + 1];
            h[static_cast<std::size_t>(i) + 1] =
                -givens_s[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] +
                givens_c[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i) + 1];
            h[static_cast<std::size_t>(i)] = tmp;
        }
        const double denom = std::hypot(h[static_cast<std::size_t>(k)], h_next);
        const double c = denom == 0.0 ? 1.0 : h[static_cast<std::size_t>(k)] / denom;
        const double s = denom == 0.0 ? 0.0 : h_next / denom;
        givens_c.push_back(c);
        givens_s.push_back(s);
        h[static_cast<std::size_t>(k)] = c * h[static_cast<std::size_t>(k)] + s * h_next;
        g.push_back(-s * g[static_cast<std::size_t>(k)]);
        g[static_cast<std::size_t>(k)] *= c;
        h.pop_back();
        r_cols.push_back(std::move(h));
        ++k;

        // Current least-squares iterate and its true residual.
        Vector y(k);
        for (int i = k - 1; i >= 0; --i) {
            double acc = g[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                acc -= r_cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * y[j];
            y[i] = acc / r_cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        Vector x = Vector::Zero(N);
        for (int i = 0; i < k; ++i) x += y[i] * basis[static_cast<std::size_t>(i)];
        if (!left) x = prep.apply(x);
        const double res = (apply_operator(blocks, x) - b).norm() / bnorm;
        if (cfg.record_history) report.res_history.push_back(res);
        if (res < best_res) {
            best_res = res;
            best = x;
        }

        if (res < cfg.tol) {
            report.converged = true;
            report.status = SolveStatus::Converged;
            done = true;
        } else if (h_next < breakdown_tol) {
            // Invariant Krylov subspace reached without meeting tol.
            report.status = SolveStatus::Breakdown;
            done = true;
        } else if (k < cfg.max_iter) {
            basis.push_back(w / h_next);
        }
    }

    report.iterations = k;
    report.final_res = cfg.record_history && !report.res_history.empty() ? report.res_history.back()
                                                                         : best_res;
    if (!report.converged && report.status != SolveStatus::Breakdown)
        report.status = SolveStatus::MaxIter;
    report.iterate_seconds = seconds_since(t0);
    return {best, report};
}

std::pair<Vector, SolveReport> stationary_gss(const DsppBlocks& blocks, const GssParams& params,
                                              const Vector& b, double tol, int max_iter) {
    if (b.size() != blocks.order()) throw DimensionMismatch("stationary_gss: rhs length mismatch");
    SolveReport report;
    Vector u = Vector::Zero(blocks.order());
    if (b.norm() == 0.0) {
        // u^(0) = 0 already solves B u = 0.
        report.converged = true;
        report.status = SolveStatus::Converged;
        report.res_history.push_back(0.0);
        report.final_res = 0.0;
        return {u, report};
    }

    const PreparedPreconditioner prep = prepare(blocks, params, Kind::Gss);
    report.setup_seconds = prep.setup_seconds();
    const auto t0 = std::chrono::steady_clock::now();
    const double bnorm = b.norm();

    Vector r = b;  // b - B u^(0)
    double res = 1.0;
    report.res_history.push_back(res);
    int k = 0;
    while (res >= tol && k < max_iter) {
        u += prep.apply(r);
        ++k;
        r = b - apply_operator(blocks, u);
        res = r.norm() / bnorm;
        report.res_history.push_back(res);
    }
    if (res < tol) {
        report.converged = true;
        report.status = SolveStatus::Converged;
    }
    report.iterations = k;
    report.final_res = res;
    report.iterate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {u, report};
}

double iteration_matrix_spectral_radius(const DsppBlocks& blocks, const GssParams& params) {
    ensure_dense_ok(blocks.order(), "iteration_matrix_spectral_radius");
    const PreparedPreconditioner prep = prepare(blocks, params, Kind::Gss);
    const DenseMatrix n_dense = assemble_n_gss(blocks, params).to_dense();
    DenseMatrix g(blocks.order(), blocks.order());
    for (Index j = 0; j < blocks.order(); ++j) g.col(j) = prep.apply(n_dense.col(j));
    return spectral_radius(g);
}

void solve_report_to_json_file(const std::filesystem::path& path, const SolveReport& report) {
    nlohmann::json j;
    j["converged"] = report.converged;
    j["status"] = report.status == SolveStatus::Converged ? "converged"
                  : report.status == SolveStatus::MaxIter ? "max_iter"
                                                          : "breakdown";
    j["iterations"] = report.iterations;
    j["res_history"] = report.res_history;
    j["timings"] = {{"setup_seconds", report.setup_seconds},
                    {"iterate_seconds", report.iterate_seconds}};
    j["final_res"] = report.final_res;
    std::ofstream out(path);
    if (!out) throw Error("solve_report_to_json_file: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

void write_residual_csv(const std::filesystem::path& path, const SolveReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("write_residual_csv: cannot open " + path.string());
    out << "iteration,res\n";
    for (std::size_t i = 0; i < report.res_history.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", report.res_history[i]);
        out << i << "," << buf << "\n";
    }
}

}  // namespace dspp
