#pragma once

#include <stdexcept>
#include <string>

namespace dspp {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// A matrix required to be symmetric positive definite failed factorization.
struct NotSpd : Error {
    using Error::Error;
};

/// A dense operation was requested above the configured size cap.
struct TooLarge : Error {
    using Error::Error;
};

struct Singular : Error {
    using Error::Error;
};

/// RGSS-II (or a D-inverse dependent check) was requested with a D that is
/// not strictly positive definite.
struct DSingular : Error {
    using Error::Error;
};

struct ZeroRhs : Error {
    using Error::Error;
};

struct RankDeficient : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

/// Non-fatal diagnostics (asymmetry symmetrized away, ridge added to CC^T,
/// size-ordering violations). Goes to stderr.
void warn(const std::string& message);

}  // namespace dspp
