#include "dspp/precond.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "dspp/config.hpp"
#include "dspp/errors.hpp"
#include "dspp/matrix_market.hpp"

namespace dspp {

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Gss: return "gss";
        case Kind::Rgss1: return "rgss1";
        case Kind::Rgss2: return "rgss2";
        case Kind::Ds: return "ds";
        case Kind::Rdf: return "rdf";
    }
    throw Error("unknown kind");
}

Kind kind_from_name(const std::string& name) {
    if (name == "none") return Kind::None;
    if (name == "gss") return Kind::Gss;
    if (name == "rgss1" || name == "rgss-i") return Kind::Rgss1;
    if (name == "rgss2" || name == "rgss-ii") return Kind::Rgss2;
    if (name == "ds") return Kind::Ds;
    if (name == "rdf") return Kind::Rdf;
    throw ParseError("unknown preconditioner kind '" + name + "'");
}

void GssParams::check() const {
    if (!(alpha > 0.0 && beta > 0.0 && tau > 0.0 && omega > 0.0))
        throw Error("GssParams: alpha, beta, tau, omega must all be positive");
}

GssParams GssParams::experiment_defaults() {
    GssParams p;
    p.alpha = 0.01;
    p.beta = 0.01;
    p.tau = 0.001;
    p.omega = 30.0;
    p.p = ShiftRecipe::block_a();
    p.q = ShiftRecipe::cct();
    p.r = ShiftRecipe::identity();
    return p;
}

namespace {

SparseMatrix expand_one(const DsppBlocks& blocks, const ShiftRecipe& recipe, Index dim,
                        const char* which) {
    SparseMatrix out;
    switch (recipe.kind) {
        case ShiftKind::Identity: out = SparseMatrix::identity(dim); break;
        case ShiftKind::BlockA: out = blocks.A; break;
        case ShiftKind::BlockD: out = blocks.D; break;
        case ShiftKind::CCt: {
            out = SparseMatrix::multiply(blocks.C, blocks.C.transposed());
            try {
                (void)SpdFactor::factorize(out);
            } catch (const NotSpd&) {
                const double ridge = 1e-12 * symmetric_spectral_norm_estimate(out);
                warn(std::string("shift ") + which + ": C C^T not numerically SPD, adding ridge " +
                     std::to_string(ridge));
                out = SparseMatrix::add(1.0, out, ridge, SparseMatrix::identity(out.rows()));
            }
            break;
        }
        case ShiftKind::Custom: out = recipe.custom; break;
    }
    if (out.rows() != dim || out.cols() != dim)
        throw DimensionMismatch(std::string("shift ") + which + " has wrong dimension");
    return out;
}

}  // namespace

ShiftMatrices expand_shifts(const DsppBlocks& blocks, const GssParams& params) {
    params.check();
    ShiftMatrices s;
    s.P = expand_one(blocks, params.p, blocks.n, "P");
    s.Q = expand_one(blocks, params.q, blocks.l, "Q");
    s.R = expand_one(blocks, params.r, blocks.m, "R");
    return s;
}

SparseMatrix assemble_theta(const DsppBlocks& blocks, const GssParams& params) {
    const ShiftMatrices s = expand_shifts(blocks, params);
    const Index n = blocks.n, l = blocks.l;
    std::vector<Triplet> t;
    auto emit = [&t](const SparseMatrix& block, Index offset, double scale) {
        const auto& offsets = block.row_offsets();
        const auto& cols = block.col_indices();
        const auto& vals = block.values();
        for (Index i = 0; i < block.rows(); ++i)
            for (Index k = offsets[static_cast<std::size_t>(i)];
                 k < offsets[static_cast<std::size_t>(i) + 1]; ++k)
                t.push_back({offset + i, offset + cols[static_cast<std::size_t>(k)],
                             scale * vals[static_cast<std::size_t>(k)]});
    };
    emit(s.P, 0, params.alpha);
    emit(s.Q, n, params.beta);
    emit(s.R, n + l, params.tau);
    return SparseMatrix::from_triplets(blocks.order(), blocks.order(), t);
}

namespace {

// (1,1) and (2,2) blocks of M_kind for the shift-splitting kinds.
std::pair<SparseMatrix, SparseMatrix> splitting_diagonal_blocks(const DsppBlocks& blocks,
                                                                const GssParams& params,
                                                                const ShiftMatrices& shifts,
                                                                Kind kind) {
    const double w = params.omega;
    switch (kind) {
        case Kind::Gss:
            return {SparseMatrix::add(params.alpha, shifts.P, w, blocks.A),
                    SparseMatrix::add(params.beta, shifts.Q, w, blocks.D)};
        case Kind::Rgss1:
            return {blocks.A.scaled(w), SparseMatrix::add(params.beta, shifts.Q, w, blocks.D)};
        case Kind::Rgss2:
            return {blocks.A.scaled(w), blocks.D.scaled(w)};
        default:
            throw Error("splitting_diagonal_blocks: not a shift-splitting kind");
    }
}

DenseMatrix assemble_dense_schur(const DsppBlocks& blocks, const GssParams& params,
                                 const ShiftMatrices& shifts, const SpdFactor& factor1,
                                 const SpdFactor& factor2) {
    // S = tau R + w^2 B F1^{-1} B^T + w^2 C^T F2^{-1} C, assembled column-wise
    // via m solves against each factor, then symmetrized.
    const double w = params.omega;
    const DenseMatrix x1 = factor1.solve(blocks.B.transposed().to_dense());
    const DenseMatrix s1 = blocks.B.multiply(x1);
    const DenseMatrix x2 = factor2.solve(blocks.C.to_dense());
    const DenseMatrix s2 = blocks.C.multiply_transposed(x2);
    DenseMatrix schur = params.tau * shifts.R.to_dense() + (w * w) * (s1 + s2);
    schur = 0.5 * (schur + schur.transpose()).eval();
    return schur;
}

}  // namespace

PreparedPreconditioner prepare(const DsppBlocks& blocks, const GssParams& params, Kind kind) {
    const auto t0 = std::chrono::steady_clock::now();
    PreparedPreconditioner prep;
    prep.kind_ = kind;
    prep.params_ = params;
    prep.n_ = blocks.n;
    prep.l_ = blocks.l;
    prep.m_ = blocks.m;
    prep.b_block_ = blocks.B;
    prep.c_block_ = blocks.C;

    switch (kind) {
        case Kind::None:
            break;
        case Kind::Gss:
        case Kind::Rgss1:
        case Kind::Rgss2: {
            params.check();
            ensure_dense_ok(blocks.m, "prepare: Schur block");
            const ShiftMatrices shifts = expand_shifts(blocks, params);
            auto [f1, f2] = splitting_diagonal_blocks(blocks, params, shifts, kind);
            prep.factor1_ = SpdFactor::factorize(f1);
            if (kind == Kind::Rgss2) {
                try {
                    prep.factor2_ = SpdFactor::factorize(f2);
                } catch (const NotSpd&) {
                    throw DSingular("prepare: RGSS-II requires a strictly SPD D block");
                }
            } else {
                prep.factor2_ = SpdFactor::factorize(f2);
            }
            prep.schur_ = assemble_dense_schur(blocks, params, shifts, prep.factor1_, prep.factor2_);
            prep.schur_factor_ = SpdFactor::factorize_dense(prep.schur_);
            break;
        }
        case Kind::Ds:
        case Kind::Rdf: {
            if (!(params.alpha > 0.0)) throw Error("prepare: DS/RDF alpha must be positive");
            ensure_dense_ok(blocks.m, "prepare: Schur block");
            const double a = params.alpha;
            const SparseMatrix eye_n = SparseMatrix::identity(blocks.n);
            const SparseMatrix eye_l = SparseMatrix::identity(blocks.l);
            if (kind == Kind::Ds) {
                prep.factor1_ = SpdFactor::factorize(SparseMatrix::add(a, eye_n, 1.0, blocks.A));
                prep.factor2_ = SpdFactor::factorize(SparseMatrix::add(a, eye_l, 1.0, blocks.D));
            } else {
                prep.factor1_ = SpdFactor::factorize(blocks.A);
                try {
                    prep.factor2_ = SpdFactor::factorize(blocks.D);
                } catch (const NotSpd&) {
                    throw Singular("prepare: RDF requires a nonsingular D block");
                }
            }
            // First factor's Schur complement: alpha I + B (.)^{-1} B^T;
            // second factor's: alpha I + C^T (.)^{-1} C.
            const DenseMatrix x1 = prep.factor1_.solve(blocks.B.transposed().to_dense());
            DenseMatrix s1 = blocks.B.multiply(x1);
            s1 += a * DenseMatrix::Identity(blocks.m, blocks.m);
            prep.schur_ = 0.5 * (s1 + s1.transpose()).eval();
            prep.schur_factor_ = SpdFactor::factorize_dense(prep.schur_);
            const DenseMatrix x2 = prep.factor2_.solve(blocks.C.to_dense());
            DenseMatrix s2 = blocks.C.multiply_transposed(x2);
            s2 += a * DenseMatrix::Identity(blocks.m, blocks.m);
            prep.schur2_ = 0.5 * (s2 + s2.transpose()).eval();
            prep.schur_factor2_ = SpdFactor::factorize_dense(prep.schur2_);
            break;
        }
    }
    prep.setup_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return prep;
}

PreparedPreconditioner prepare_ds(const DsppBlocks& blocks, double alpha) {
    GssParams params;
    params.alpha = alpha;
    return prepare(blocks, params, Kind::Ds);
}

PreparedPreconditioner prepare_rdf(const DsppBlocks& blocks, double alpha) {
    GssParams params;
    params.alpha = alpha;
    return prepare(blocks, params, Kind::Rdf);
}

Vector PreparedPreconditioner::apply(const Vector& r) const {
    if (r.size() != order()) throw DimensionMismatch("apply: vector length mismatch");
    if (kind_ == Kind::None) return r;

    const Vector r1 = r.segment(0, n_);
    const Vector r2 = r.segment(n_, l_);
    const Vector r3 = r.segment(n_ + l_, m_);
    Vector z(order());

    if (kind_ == Kind::Ds || kind_ == Kind::Rdf) {
        // P = (1/alpha) F1 F2, so F1 F2 z = alpha r. Each factor is block
        // triangular with its own small Schur complement.
        const double a = params_.alpha;
        const Vector s1 = a * r1, s2 = a * r2, s3 = a * r3;
        const Vector t1 = factor1_.solve(s1);
        const Vector w3 = schur_factor_.solve(s3 + b_block_.multiply(t1));
        const Vector w1 = factor1_.solve(s1 - b_block_.multiply_transposed(w3));
        const Vector w2 = s2 / a;
        const Vector z1 = w1 / a;
        const Vector t2 = factor2_.solve(w2);
        const Vector z3 = schur_factor2_.solve(w3 + c_block_.multiply_transposed(t2));
        const Vector z2 = factor2_.solve(w2 - c_block_.multiply(z3));
        z << z1, z2, z3;
        return z;
    }

    // GSS / RGSS-I / RGSS-II share one five-step solve against the block
    // factorization M = L diag(F1, F2, S) U:
    //   1: F1 t1 = r1           2: F2 t2 = r2
    //   3: S z3 = r3 + w B t1 + w C^T t2
    //   4: F1 z1 = r1 - w B^T z3
    //   5: F2 z2 = r2 - w C z3
    const double w = params_.omega;
    const Vector t1 = factor1_.solve(r1);
    const Vector t2 = factor2_.solve(r2);
    const Vector z3 =
        schur_factor_.solve(r3 + w * b_block_.multiply(t1) + w * c_block_.multiply_transposed(t2));
    const Vector z1 = factor1_.solve(r1 - w * b_block_.multiply_transposed(z3));
    const Vector z2 = factor2_.solve(r2 - w * c_block_.multiply(z3));
    z << z1, z2, z3;
    return z;
}

SparseMatrix assemble_m(const DsppBlocks& blocks, const GssParams& params, Kind kind) {
    const Index n = blocks.n, l = blocks.l, m = blocks.m;
    if (kind == Kind::None) return SparseMatrix::identity(blocks.order());

    if (kind == Kind::Ds || kind == Kind::Rdf) {
        if (!(params.alpha > 0.0)) throw Error("assemble_m: DS/RDF alpha must be positive");
        const double a = params.alpha;
        const SparseMatrix eye_n = SparseMatrix::identity(n);
        const SparseMatrix eye_l = SparseMatrix::identity(l);
        const SparseMatrix eye_m = SparseMatrix::identity(m);
        const SparseMatrix f11 = kind == Kind::Ds ? SparseMatrix::add(a, eye_n, 1.0, blocks.A)
                                                  : blocks.A;
        const SparseMatrix f22 = kind == Kind::Ds ? SparseMatrix::add(a, eye_l, 1.0, blocks.D)
                                                  : blocks.D;
        std::vector<Triplet> t1, t2;
        auto emit = [](std::vector<Triplet>& t, const SparseMatrix& block, Index row0, Index col0,
                       double scale, bool transpose) {
            const auto& offsets = block.row_offsets();
            const auto& cols = block.col_indices();
            const auto& vals = block.values();
            for (Index i = 0; i < block.rows(); ++i)
                for (Index k = offsets[static_cast<std::size_t>(i)];
                     k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
                    const Index j = cols[static_cast<std::size_t>(k)];
                    const double v = scale * vals[static_cast<std::size_t>(k)];
                    t.push_back(transpose ? Triplet{row0 + j, col0 + i, v}
                                          : Triplet{row0 + i, col0 + j, v});
                }
        };
        emit(t1, f11, 0, 0, 1.0, false);
        emit(t1, blocks.B, 0, n + l, 1.0, true);
        emit(t1, eye_l, n, n, a, false);
        emit(t1, blocks.B, n + l, 0, -1.0, false);
        emit(t1, eye_m, n + l, n + l, a, false);
        const SparseMatrix first = SparseMatrix::from_triplets(blocks.order(), blocks.order(), t1);
        emit(t2, eye_n, 0, 0, a, false);
        emit(t2, f22, n, n, 1.0, false);
        emit(t2, blocks.C, n, n + l, 1.0, false);
        emit(t2, blocks.C, n + l, n, -1.0, true);
        emit(t2, eye_m, n + l, n + l, a, false);
        const SparseMatrix second = SparseMatrix::from_triplets(blocks.order(), blocks.order(), t2);
        return SparseMatrix::multiply(first, second).scaled(1.0 / a);
    }

    params.check();
    const ShiftMatrices shifts = expand_shifts(blocks, params);
    auto [f11, f22] = splitting_diagonal_blocks(blocks, params, shifts, kind);
    const double w = params.omega;
    std::vector<Triplet> t;
    auto emit = [&t](const SparseMatrix& block, Index row0, Index col0, double scale, bool transpose) {
        const auto& offsets = block.row_offsets();
        const auto& cols = block.col_indices();
        const auto& vals = block.values();
        for (Index i = 0; i < block.rows(); ++i)
            for (Index k = offsets[static_cast<std::size_t>(i)];
                 k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
                const Index j = cols[static_cast<std::size_t>(k)];
                const double v = scale * vals[static_cast<std::size_t>(k)];
                t.push_back(transpose ? Triplet{row0 + j, col0 + i, v}
                                      : Triplet{row0 + i, col0 + j, v});
            }
    };
    emit(f11, 0, 0, 1.0, false);
    emit(blocks.B, 0, n + l, w, true);
    emit(f22, n, n, 1.0, false);
    emit(blocks.C, n, n + l, w, false);
    emit(blocks.B, n + l, 0, -w, false);
    emit(blocks.C, n + l, n, -w, true);
    emit(shifts.R, n + l, n + l, params.tau, false);
    return SparseMatrix::from_triplets(blocks.order(), blocks.order(), t);
}

SparseMatrix assemble_n_gss(const DsppBlocks& blocks, const GssParams& params) {
    params.check();
    return SparseMatrix::add(1.0, assemble_theta(blocks, params), -(1.0 - params.omega),
                             assemble_full(blocks));
}

double phi(const DsppBlocks& blocks, const GssParams& params) {
    params.check();
    const ShiftMatrices s = expand_shifts(blocks, params);
    const double a = params.alpha, b = params.beta, t = params.tau, w = params.omega;
    const double one_minus_w_sq = (1.0 - w) * (1.0 - w);
    return a * a * frobenius_norm_sq(s.P) + b * b * frobenius_norm_sq(s.Q) +
           t * t * frobenius_norm_sq(s.R) + one_minus_w_sq * frobenius_norm_sq(blocks.A) +
           one_minus_w_sq * frobenius_norm_sq(blocks.D) + 2.0 * a * (w - 1.0) * trace_product(s.P, blocks.A) +
           2.0 * b * (w - 1.0) * trace_product(s.Q, blocks.D) +
           2.0 * one_minus_w_sq * frobenius_norm_sq(blocks.B) +
           2.0 * one_minus_w_sq * frobenius_norm_sq(blocks.C);
}

double ds_alpha(const DsppBlocks& blocks) {
    const double first = std::sqrt(frobenius_norm_sq(blocks.A) + 2.0 * frobenius_norm_sq(blocks.B));
    const double second = std::sqrt(frobenius_norm_sq(blocks.D) + 2.0 * frobenius_norm_sq(blocks.C));
    return (first + second) / (2.0 * static_cast<double>(blocks.order()));
}

namespace {

nlohmann::json recipe_to_json(const ShiftRecipe& recipe) {
    switch (recipe.kind) {
        case ShiftKind::Identity: return "Identity";
        case ShiftKind::BlockA: return "BlockA";
        case ShiftKind::BlockD: return "BlockD";
        case ShiftKind::CCt: return "CCt";
        case ShiftKind::Custom: return nlohmann::json{{"custom", "custom.mtx"}};
    }
    throw Error("unknown shift recipe");
}

ShiftRecipe recipe_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "Identity") return ShiftRecipe::identity();
        if (name == "BlockA") return ShiftRecipe::block_a();
        if (name == "BlockD") return ShiftRecipe::block_d();
        if (name == "CCt") return ShiftRecipe::cct();
        throw ParseError("unknown shift recipe '" + name + "'");
    }
    if (j.is_object() && j.contains("custom"))
        return ShiftRecipe::custom_matrix(
            read_matrix_market(base / j.at("custom").get<std::string>()));
    throw ParseError("shift recipe must be a name or {\"custom\": <mtx path>}");
}

}  // namespace

std::pair<GssParams, Kind> params_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("params_from_json_file: cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    GssParams params;
    const Kind kind = kind_from_name(j.value("kind", "gss"));
    params.alpha = j.value("alpha", params.alpha);
    params.beta = j.value("beta", params.beta);
    params.tau = j.value("tau", params.tau);
    params.omega = j.value("omega", params.omega);
    const auto base = path.parent_path();
    if (j.contains("P")) params.p = recipe_from_json(j.at("P"), base);
    if (j.contains("Q")) params.q = recipe_from_json(j.at("Q"), base);
    if (j.contains("R")) params.r = recipe_from_json(j.at("R"), base);
    return {params, kind};
}

void params_to_json_file(const std::filesystem::path& path, const GssParams& params, Kind kind) {
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    j["alpha"] = params.alpha;
    j["beta"] = params.beta;
    j["tau"] = params.tau;
    j["omega"] = params.omega;
    j["P"] = recipe_to_json(params.p);
    j["Q"] = recipe_to_json(params.q);
    j["R"] = recipe_to_json(params.r);
    std::ofstream out(path);
    if (!out) throw Error("params_to_json_file: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace dspp
