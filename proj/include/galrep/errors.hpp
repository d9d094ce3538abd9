#pragma once

#include <stdexcept>
#include <string>

namespace galrep {

// Precondition violations (n = 0, composite modulus, D not squarefree, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Discriminant zero: the quintuple does not define an elliptic curve.
class SingularCurveError : public DomainError {
public:
    explicit SingularCurveError(const std::string& what) : DomainError(what) {}
};

// The surjectivity machinery assumes non-CM; CM inputs are refused, not certified.
class CmCurveError : public DomainError {
public:
    explicit CmCurveError(const std::string& what) : DomainError(what) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// BSGS could not pin the group order and the prime is too large for the
// naive fallback.
class IndeterminateError : public std::runtime_error {
public:
    explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

class CacheError : public std::runtime_error {
public:
    explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace galrep
