#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace workdyn {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration field violates its invariant.
class InvalidConfig : public Error {
public:
    explicit InvalidConfig(const std::string& field, const std::string& why)
        : Error("invalid config: " + field + ": " + why), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// |1 + k*x| fell below the denominator guard in a Holling term.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// Integration produced NaN/inf or exceeded the blow-up norm.
class NonFiniteState : public Error {
public:
    NonFiniteState(const std::string& what, double last_finite_time)
        : Error(what), last_finite_time_(last_finite_time) {}
    double last_finite_time() const { return last_finite_time_; }

private:
    double last_finite_time_;
};

/// Equilibrium path called with the wrong functional-response setup.
class InvalidResponse : public Error {
public:
    using Error::Error;
};

/// A guarded equilibrium denominator is (numerically) zero.
class SingularEquilibrium : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidExponent : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class InvalidLag : public Error {
public:
    using Error::Error;
};

/// Malformed field in delimiter-separated input. Line/column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Wrong column count on a data line.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Periods out of order or duplicated.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

/// Missing months between consecutive records (and gaps were not opted in).
class DataGapError : public Error {
public:
    using Error::Error;
};

class TooFewRecords : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class ZeroVariance : public Error {
public:
    using Error::Error;
};

class EmptyTrajectory : public Error {
public:
    using Error::Error;
};

}  // namespace workdyn
