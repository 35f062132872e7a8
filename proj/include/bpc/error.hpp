#pragma once

#include <stdexcept>
#include <string>

namespace bpc {

// Violated precondition on caller-supplied parameters (CLI exit code 2).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computed object failed its own re-verification (CLI exit code 4).
class VerificationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Integer too hard to factor within the configured effort.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw DomainError(what);
}

inline void verify(bool cond, const std::string& what)
{
    if (!cond) throw VerificationError(what);
}

} // namespace bpc
