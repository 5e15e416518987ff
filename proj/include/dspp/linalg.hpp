#pragma once

#include <complex>
#include <vector>

#include "dspp/sparse.hpp"

namespace dspp {

using Complex = std::complex<double>;

/// Eigenvalues of a square dense matrix, dimension capped by dense_cap().
/// Symmetric inputs (relative asymmetry <= 1e-12) are routed to a symmetric
/// solver so their spectra come back exactly real; general inputs go through
/// Hessenberg + QR.
std::vector<Complex> dense_eigenvalues(const DenseMatrix& m);

/// kappa_2 = sigma_max / sigma_min. Throws Singular when
/// sigma_min < 1e-14 * sigma_max.
double two_norm_condition(const DenseMatrix& m);

/// Extreme singular values (sigma_max, sigma_min).
std::pair<double, double> singular_value_extremes(const DenseMatrix& m);

double spectral_radius(const DenseMatrix& m);

/// Eigenvalues of the symmetric-definite pencil  A x = lambda B x  with
/// B SPD (both symmetric). Ascending order.
Vector generalized_symmetric_eigenvalues(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace dspp
