#pragma once

#include <string>

namespace dspp {

/// Largest dimension for which matrices may be densified (factorization,
/// eigenvalues, Schur assembly). Defaults to 4000; the environment variable
/// DSPP_DENSE_CAP overrides it per process.
int dense_cap();

/// Throws TooLarge when dim exceeds dense_cap().
void ensure_dense_ok(long long dim, const std::string& what);

}  // namespace dspp
