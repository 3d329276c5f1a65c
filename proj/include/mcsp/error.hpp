#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed input text; `where` is a JSON path or byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& where, const std::string& what)
        : Error("parse error at " + where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class DomainViolation : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class EmptyDomain : public Error {
public:
    explicit EmptyDomain(std::size_t var)
        : Error("domain of variable " + std::to_string(var) + " is empty"), var_(var) {}
    std::size_t variable() const noexcept { return var_; }

private:
    std::size_t var_;
};

class MalformedRepresentation : public Error {
public:
    using Error::Error;
};

class InvalidAlgebra : public Error {
public:
    using Error::Error;
};

class IncompatibleAlgebra : public Error {
public:
    using Error::Error;
};

class NotGmm : public InvalidAlgebra {
public:
    NotGmm(std::size_t a, std::size_t b)
        : InvalidAlgebra("pair {" + std::to_string(a) + "," + std::to_string(b) +
                         "} is neither a majority nor a minority pair"),
          a_(a), b_(b) {}
    std::size_t first() const noexcept { return a_; }
    std::size_t second() const noexcept { return b_; }

private:
    std::size_t a_;
    std::size_t b_;
};

class NotUnsat : public Error {
public:
    NotUnsat() : Error("certificates can only be emitted for unsatisfiable outcomes") {}
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

}  // namespace mcsp
