#include "dspp/matrix_market.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dspp/errors.hpp"

namespace dspp {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m,
                         MmSymmetry symmetry) {
    if (symmetry == MmSymmetry::Symmetric && !m.is_symmetric(1e-12))
        throw Error("write_matrix_market: symmetric header requested for an asymmetric matrix");

    std::ofstream out(path);
    if (!out) throw Error("write_matrix_market: cannot open " + path.string());
    out << "%%MatrixMarket matrix coordinate real "
        << (symmetry == MmSymmetry::Symmetric ? "symmetric" : "general") << "\n";

    std::ostringstream body;
    Index count = 0;
    const auto& offsets = m.row_offsets();
    const auto& cols = m.col_indices();
    const auto& vals = m.values();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index k = offsets[static_cast<std::size_t>(i)]; k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            const Index j = cols[static_cast<std::size_t>(k)];
            if (symmetry == MmSymmetry::Symmetric && j > i) continue;
            body << (i + 1) << " " << (j + 1) << " " << format_value(vals[static_cast<std::size_t>(k)])
                 << "\n";
            ++count;
        }
    out << m.rows() << " " << m.cols() << " " << count << "\n" << body.str();
    if (!out) throw Error("write_matrix_market: write failed for " + path.string());
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("read_matrix_market: cannot open " + path.string());

    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" || field != "real")
        throw ParseError("read_matrix_market: unsupported header in " + path.string());
    bool symmetric = false;
    if (symmetry == "symmetric")
        symmetric = true;
    else if (symmetry != "general")
        throw ParseError("read_matrix_market: unsupported symmetry '" + symmetry + "'");

    std::string line;
    Index rows = 0, cols = 0, nnz = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz)) throw ParseError("read_matrix_market: bad size line");
        break;
    }

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    Index seen = 0;
    while (seen < nnz && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        Index i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) throw ParseError("read_matrix_market: bad entry line");
        triplets.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) triplets.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != nnz) throw ParseError("read_matrix_market: entry count mismatch in " + path.string());
    return SparseMatrix::from_triplets(rows, cols, triplets);
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
    std::ofstream out(path);
    if (!out) throw Error("write_vector: cannot open " + path.string());
    for (Index i = 0; i < v.size(); ++i) out << format_value(v[i]) << "\n";
}

Vector read_vector(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("read_vector: cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    Vector v(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
    return v;
}

}  // namespace dspp
