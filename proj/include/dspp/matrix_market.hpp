#pragma once

#include <filesystem>

#include "dspp/sparse.hpp"

namespace dspp {

enum class MmSymmetry { General, Symmetric };

/// Writes coordinate-format Matrix Market, 1-based indices, %.17g values.
/// Symmetric files store the lower triangle only.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m,
                         MmSymmetry symmetry = MmSymmetry::General);

/// Reads `matrix coordinate real general|symmetric`; symmetric entries are
/// mirrored into the full pattern.
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Plain-text vector, one value per line.
void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

}  // namespace dspp
