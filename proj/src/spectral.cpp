#include "dspp/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dspp/config.hpp"
#include "dspp/errors.hpp"

namespace dspp {

namespace {

constexpr double kClusterRelTol = 1e-6;
constexpr double kBoundInflation = 1e-8;

bool in_cluster(const Complex& ev, double omega) {
    const double target = 1.0 / omega;
    return std::abs(ev - Complex(target, 0.0)) <= kClusterRelTol * std::abs(target);
}

double inflate(double x) { return kBoundInflation * (1.0 + std::abs(x)); }

/// S = B A^{-1} B^T, densely via m solves against A.
DenseMatrix schur_of_a(const DsppBlocks& blocks) {
    ensure_dense_ok(blocks.m, "Schur of A");
    const SpdFactor a_factor = SpdFactor::factorize(blocks.A);
    const DenseMatrix x = a_factor.solve(blocks.B.transposed().to_dense());
    DenseMatrix s = blocks.B.multiply(x);
    return 0.5 * (s + s.transpose()).eval();
}

/// C^T D^{-1} C, densely; throws DSingular when D cannot be factored.
DenseMatrix ct_dinv_c(const DsppBlocks& blocks) {
    ensure_dense_ok(blocks.m, "C^T D^{-1} C");
    SpdFactor d_factor;
    try {
        d_factor = SpdFactor::factorize(blocks.D);
    } catch (const NotSpd&) {
        throw DSingular("C^T D^{-1} C requires a strictly SPD D block");
    }
    const DenseMatrix x = d_factor.solve(blocks.C.to_dense());
    DenseMatrix s = blocks.C.multiply_transposed(x);
    return 0.5 * (s + s.transpose()).eval();
}

}  // namespace

DenseMatrix preconditioned_dense(const DsppBlocks& blocks, const PreparedPreconditioner& prep) {
    ensure_dense_ok(blocks.order(), "preconditioned operator");
    const DenseMatrix full = assemble_full(blocks).to_dense();
    DenseMatrix out(blocks.order(), blocks.order());
    for (Index j = 0; j < blocks.order(); ++j) out.col(j) = prep.apply(full.col(j));
    return out;
}

SpectrumReport preconditioned_spectrum(const DsppBlocks& blocks, const PreparedPreconditioner& prep) {
    SpectrumReport report;
    report.kind = prep.kind();
    report.omega = prep.params().omega;
    report.eigenvalues = dense_eigenvalues(preconditioned_dense(blocks, prep));

    double cluster_radius = 0.0;
    for (const auto& ev : report.eigenvalues)
        cluster_radius = std::max(cluster_radius, std::abs(ev - Complex(1.0, 0.0)));
    report.cluster_radius = cluster_radius;

    if (report.kind == Kind::Gss || report.kind == Kind::Rgss1 || report.kind == Kind::Rgss2) {
        int count = 0;
        for (const auto& ev : report.eigenvalues)
            if (in_cluster(ev, report.omega)) ++count;
        report.one_over_omega_multiplicity = count;
    }

    switch (report.kind) {
        case Kind::Gss: {
            BoundRecord rec;
            rec.name = "gss_clustering";
            rec.value = cluster_radius;
            rec.lower = 0.0;
            rec.upper = 1.0;
            rec.pass = cluster_radius < 1.0;
            rec.margin = 1.0 - cluster_radius;
            report.bound_checks.push_back(rec);
            break;
        }
        case Kind::Rgss1: {
            BoundRecord mult;
            mult.name = "rgss1_multiplicity_n";
            mult.value = report.one_over_omega_multiplicity;
            mult.lower = static_cast<double>(blocks.n);
            mult.upper = static_cast<double>(blocks.order());
            mult.pass = report.one_over_omega_multiplicity >= blocks.n;
            mult.margin = report.one_over_omega_multiplicity - static_cast<double>(blocks.n);
            report.bound_checks.push_back(mult);
            const auto theta_checks = rgss1_bound_check(blocks, prep.params(), report.eigenvalues);
            report.bound_checks.insert(report.bound_checks.end(), theta_checks.begin(),
                                       theta_checks.end());
            break;
        }
        case Kind::Rgss2: {
            BoundRecord mult;
            mult.name = "rgss2_multiplicity_n_plus_l";
            mult.value = report.one_over_omega_multiplicity;
            mult.lower = static_cast<double>(blocks.n + blocks.l);
            mult.upper = static_cast<double>(blocks.order());
            mult.pass = report.one_over_omega_multiplicity >= blocks.n + blocks.l;
            mult.margin = report.one_over_omega_multiplicity - static_cast<double>(blocks.n + blocks.l);
            report.bound_checks.push_back(mult);

            const auto [lo, hi] = rgss2_interval(blocks, prep.params());
            BoundRecord interval;
            interval.name = "rgss2_interval";
            interval.lower = lo;
            interval.upper = hi;
            interval.pass = true;
            interval.margin = std::numeric_limits<double>::infinity();
            for (const auto& ev : report.eigenvalues) {
                if (in_cluster(ev, report.omega)) continue;
                const double re = ev.real();
                const double lo_margin = re - (lo - inflate(lo));
                const double hi_margin = (hi + inflate(hi)) - re;
                const double margin = std::min(lo_margin, hi_margin);
                if (margin < interval.margin) {
                    interval.margin = margin;
                    interval.value = re;
                }
                if (lo_margin < 0.0 || hi_margin < 0.0) interval.pass = false;
            }
            report.bound_checks.push_back(interval);
            break;
        }
        case Kind::None: {
            BoundRecord rec;
            rec.name = "positive_stable";
            double min_re = std::numeric_limits<double>::infinity();
            for (const auto& ev : report.eigenvalues) min_re = std::min(min_re, ev.real());
            rec.value = min_re;
            rec.lower = 0.0;
            rec.upper = std::numeric_limits<double>::infinity();
            rec.pass = min_re > 0.0;
            rec.margin = min_re;
            report.bound_checks.push_back(rec);
            break;
        }
        default:
            break;  // DS/RDF carry no theorem checks here
    }
    return report;
}

std::vector<BoundRecord> rgss1_bound_check(const DsppBlocks& blocks, const GssParams& params,
                                           const std::vector<Complex>& spectrum) {
    params.check();
    const ShiftMatrices shifts = expand_shifts(blocks, params);
    const double beta = params.beta, tau = params.tau, omega = params.omega;

    SpdFactor q_factor;
    try {
        q_factor = SpdFactor::factorize(shifts.Q);
    } catch (const NotSpd&) {
        throw NotSpd("rgss1_bound_check: Q must be SPD");
    }
    if (!blocks.D.is_symmetric(1e-12)) throw DSingular("rgss1_bound_check: D must be symmetric");

    const DenseMatrix q_dense = shifts.Q.to_dense();
    const DenseMatrix r_dense = shifts.R.to_dense();
    const DenseMatrix d_dense = blocks.D.to_dense();
    const DenseMatrix s_dense = schur_of_a(blocks);

    // Eigenvalues of Q^{-1} D and R^{-1} S via the symmetric-definite pencils.
    const Vector qd = generalized_symmetric_eigenvalues(d_dense, q_dense);
    const Vector rs = generalized_symmetric_eigenvalues(s_dense, r_dense);
    const double lo_qd = qd[0] / beta, hi_qd = qd[qd.size() - 1] / beta;
    const double lo_rs = rs[0] / tau, hi_rs = rs[rs.size() - 1] / tau;

    // sigma_max of (1/sqrt(beta tau)) R^{-1/2} C^T Q^{-1/2}.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> r_es{Eigen::MatrixXd(r_dense)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_es{Eigen::MatrixXd(q_dense)};
    if (r_es.info() != Eigen::Success || q_es.info() != Eigen::Success)
        throw NotSpd("rgss1_bound_check: shift eigendecomposition failed");
    const Eigen::MatrixXd scaled_c = r_es.operatorInverseSqrt() *
                                     Eigen::MatrixXd(blocks.C.transposed().to_dense()) *
                                     q_es.operatorInverseSqrt() / std::sqrt(beta * tau);
    const auto [sigma_max, sigma_min] = singular_value_extremes(DenseMatrix(scaled_c));
    (void)sigma_min;

    const double real_lo = std::min(lo_qd, lo_rs);
    const double real_hi = std::max(hi_qd, hi_rs);
    const double cplx_lo = 0.5 * (lo_qd + lo_rs);
    const double cplx_hi = 0.5 * (hi_qd + hi_rs);

    std::vector<BoundRecord> records;
    int index = 0;
    for (const auto& mu : spectrum) {
        ++index;
        if (in_cluster(mu, omega)) continue;
        const Complex denom = Complex(1.0, 0.0) - omega * mu;
        if (std::abs(denom) < 1e-12) continue;  // 1/omega cluster guard
        const Complex theta = mu / denom;

        BoundRecord rec;
        const bool complex_theta = std::abs(theta.imag()) > 1e-12 * (1.0 + std::abs(theta));
        if (complex_theta) {
            rec.name = "rgss1_bound1[" + std::to_string(index) + "]";
            rec.lower = cplx_lo;
            rec.upper = cplx_hi;
            rec.value = theta.real();
            const bool re_ok = theta.real() >= cplx_lo - inflate(cplx_lo) &&
                               theta.real() <= cplx_hi + inflate(cplx_hi);
            const bool im_ok = std::abs(theta.imag()) <= sigma_max + inflate(sigma_max);
            rec.pass = re_ok && im_ok;
            rec.margin = std::min({theta.real() - cplx_lo, cplx_hi - theta.real(),
                                   sigma_max - std::abs(theta.imag())});
        } else {
            rec.name = "rgss1_bound2[" + std::to_string(index) + "]";
            rec.lower = real_lo;
            rec.upper = real_hi;
            rec.value = theta.real();
            rec.pass = theta.real() >= real_lo - inflate(real_lo) &&
                       theta.real() <= real_hi + inflate(real_hi);
            rec.margin = std::min(theta.real() - real_lo, real_hi - theta.real());
        }
        records.push_back(rec);
    }
    return records;
}

std::pair<double, double> rgss2_interval(const DsppBlocks& blocks, const GssParams& params) {
    params.check();
    const ShiftMatrices shifts = expand_shifts(blocks, params);
    const DenseMatrix r_dense = shifts.R.to_dense();
    const Vector eta = generalized_symmetric_eigenvalues(schur_of_a(blocks), r_dense);
    const Vector xi = generalized_symmetric_eigenvalues(ct_dinv_c(blocks), r_dense);
    const double eta_min = eta[0], eta_max = eta[eta.size() - 1];
    const double xi_min = xi[0], xi_max = xi[xi.size() - 1];
    const double w = params.omega, tau = params.tau;
    const double lo = (eta_min + xi_min) / (w * eta_max + w * xi_max + tau);
    const double hi = (eta_max + xi_max) / (w * eta_min + w * xi_min + tau);
    return {lo, hi};
}

KrylovBoundCheck krylov_bound_check(const DsppBlocks& blocks, const GssParams& params,
                                    const Vector& b) {
    KrylovBoundCheck check;
    check.bound = static_cast<int>(blocks.m) + 1;
    const PreparedPreconditioner prep = prepare(blocks, params, Kind::Rgss2);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iter = static_cast<int>(blocks.order()) + 2;
    auto [x, report] = gmres(blocks, b, prep, cfg);
    (void)x;
    check.iterations = report.iterations;
    check.pass = report.converged && report.iterations <= check.bound + 1;
    return check;
}

double preconditioned_condition_number(const DsppBlocks& blocks,
                                       const PreparedPreconditioner& prep) {
    return two_norm_condition(preconditioned_dense(blocks, prep));
}

void write_scatter_csv(const std::filesystem::path& path, const SpectrumReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("write_scatter_csv: cannot open " + path.string());
    out << "re,im,kind,omega\n";
    char buf[96];
    for (const auto& ev : report.eigenvalues) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g", ev.real(), ev.imag(),
                      kind_name(report.kind).c_str(), report.omega);
        out << buf << "\n";
    }
}

}  // namespace dspp
