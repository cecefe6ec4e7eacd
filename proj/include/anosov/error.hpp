#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: out-of-range index, size mismatch, malformed input.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The dense eigensolver hit its iteration cap.
class SpectralError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be invertible is singular within tolerance.
class SingularError : public Error {
public:
    using Error::Error;
};

/// lambda_k(A) and lambda_{k+1}(A) are tied within tolerance.
class NonProximalError : public Error {
public:
    NonProximalError(int k, const std::string& what) : Error(what), k_(k) {}
    int k() const noexcept { return k_; }

private:
    int k_;
};

/// Tied magnitudes at position k come from different blocks, so the
/// large eigenvalue configuration cannot be assigned.
class TieAmbiguityError : public NonProximalError {
public:
    using NonProximalError::NonProximalError;
};

/// A structural precondition (block shape, normalization, certification) failed.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Indicates a bug or an inconsistency that the mathematics rules out.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace anosov
