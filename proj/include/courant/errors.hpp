#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "courant/rational.hpp"

namespace courant {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes or ambient dimensions do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation is violated (non-coisotropic input,
/// non-subalgebra, degenerate form, ...).
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

/// Rejected model data: degenerate or non-symmetric Gram matrix, failed axioms.
class InvalidObject : public Error {
public:
    using Error::Error;
};

/// A span that is not isotropic for the product form. Carries two basis
/// vectors of the span whose pairing is nonzero.
class IsotropyViolation : public Error {
public:
    IsotropyViolation(std::string what, std::vector<Rational> a, std::vector<Rational> b,
                      Rational value)
        : Error(std::move(what)), first(std::move(a)), second(std::move(b)),
          pairing(std::move(value)) {}

    std::vector<Rational> first;
    std::vector<Rational> second;
    Rational pairing;
};

class NotIsometric : public Error {
public:
    using Error::Error;
};

/// R meets 0 x V2 nontrivially; carries a nonzero element (0, e2) of R.
class NotAGraph : public Error {
public:
    NotAGraph(std::string what, std::vector<Rational> w) : Error(std::move(what)), witness(std::move(w)) {}
    std::vector<Rational> witness;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

}  // namespace courant
