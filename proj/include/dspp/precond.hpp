#pragma once

#include <filesystem>
#include <string>

#include "dspp/model.hpp"
#include "dspp/spd_factor.hpp"

namespace dspp {

enum class Kind { None, Gss, Rgss1, Rgss2, Ds, Rdf };

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

enum class ShiftKind { Identity, BlockA, BlockD, CCt, Custom };

/// Named recipe for one of the SPD shift matrices P, Q, R.
struct ShiftRecipe {
    ShiftKind kind = ShiftKind::Identity;
    SparseMatrix custom;  // used when kind == Custom

    static ShiftRecipe identity() { return {}; }
    static ShiftRecipe block_a() { return {ShiftKind::BlockA, {}}; }
    static ShiftRecipe block_d() { return {ShiftKind::BlockD, {}}; }
    static ShiftRecipe cct() { return {ShiftKind::CCt, {}}; }
    static ShiftRecipe custom_matrix(SparseMatrix m) { return {ShiftKind::Custom, std::move(m)}; }
};

/// Shift parameters of the splitting  B = (Theta + w B) - (Theta - (1-w) B)
/// with Theta = diag(alpha P, beta Q, tau R).
struct GssParams {
    double alpha = 1.0;
    double beta = 1.0;
    double tau = 1.0;
    double omega = 1.0;
    ShiftRecipe p, q, r;

    /// All four scalars must be strictly positive.
    void check() const;

    /// The experiment choice of the source material: alpha = beta = 0.01,
    /// tau = 0.001, omega = 30, P = A, Q = C C^T, R = I.
    static GssParams experiment_defaults();
};

struct ShiftMatrices {
    SparseMatrix P, Q, R;
};

/// Expands the recipes against a concrete instance. A C C^T recipe that fails
/// to factor gets a ridge of 1e-12 * ||C C^T||_2 * I, with a warning.
ShiftMatrices expand_shifts(const DsppBlocks& blocks, const GssParams& params);

/// Theta = diag(alpha P, beta Q, tau R).
SparseMatrix assemble_theta(const DsppBlocks& blocks, const GssParams& params);

/// Cached factorizations for one (kind, params) cell. The Schur-like matrix
/// (R-hat for GSS, script-R 1/2 for the relaxed variants, the two per-factor
/// Schur complements for DS/RDF) is assembled densely and kept for
/// certification. Immutable after prepare; apply is pure and reentrant.
class PreparedPreconditioner {
  public:
    Kind kind() const { return kind_; }
    const GssParams& params() const { return params_; }
    double setup_seconds() const { return setup_seconds_; }
    Index order() const { return n_ + l_ + m_; }

    const SpdFactor& factor1() const { return factor1_; }
    const SpdFactor& factor2() const { return factor2_; }
    const DenseMatrix& schur() const { return schur_; }
    const DenseMatrix& schur2() const { return schur2_; }  // DS/RDF second factor

    /// Solves M_kind z = r. Costs exactly two factor1 solves, two factor2
    /// solves and one Schur solve for the shift-splitting kinds.
    Vector apply(const Vector& r) const;

  private:
    friend PreparedPreconditioner prepare(const DsppBlocks&, const GssParams&, Kind);

    Kind kind_ = Kind::None;
    GssParams params_;
    double setup_seconds_ = 0.0;
    Index n_ = 0, l_ = 0, m_ = 0;
    SparseMatrix b_block_, c_block_;
    SpdFactor factor1_, factor2_, schur_factor_, schur_factor2_;
    DenseMatrix schur_, schur2_;
};

/// Factorizes the blocks of M_kind. Throws NotSpd when a required block or
/// shift fails factorization, DSingular for RGSS-II with a non-SPD D, and
/// TooLarge when the Schur dimension exceeds the dense cap.
PreparedPreconditioner prepare(const DsppBlocks& blocks, const GssParams& params, Kind kind);

/// DS/RDF baselines ignore everything in params except alpha.
PreparedPreconditioner prepare_ds(const DsppBlocks& blocks, double alpha);
PreparedPreconditioner prepare_rdf(const DsppBlocks& blocks, double alpha);

/// Explicit preconditioner matrix (certification use).
SparseMatrix assemble_m(const DsppBlocks& blocks, const GssParams& params, Kind kind);

/// N_GSS = Theta - (1 - omega) * B_full; satisfies
/// assemble_m(GSS) - assemble_n_gss = assemble_full exactly.
SparseMatrix assemble_n_gss(const DsppBlocks& blocks, const GssParams& params);

/// phi(alpha, beta, tau, omega) = ||N_GSS||_F^2 via the closed-form trace
/// expansion.
double phi(const DsppBlocks& blocks, const GssParams& params);

/// alpha_DS = (sqrt(tr(A^T A) + 2 tr(B B^T)) + sqrt(tr(D^T D) + 2 tr(C^T C)))
///            / (2 (n + m + l)).
double ds_alpha(const DsppBlocks& blocks);

/// Parameter file: {kind, alpha, beta, tau, omega, P, Q, R} with recipe names
/// as strings; custom recipes reference Matrix Market paths.
std::pair<GssParams, Kind> params_from_json_file(const std::filesystem::path& path);
void params_to_json_file(const std::filesystem::path& path, const GssParams& params, Kind kind);

}  // namespace dspp
