#pragma once

#include <stdexcept>
#include <string>

namespace thermo1d {

/// Base class for every failure raised by the library. The CLI maps
/// subclasses to exit codes: validation failures exit 1, AbortedRun exits 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class InvalidGrid : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidField : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GridMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonDominantMatrix : public Error {
public:
    NonDominantMatrix(std::size_t row, double pivot);
    std::size_t row() const noexcept { return row_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t row_;
    double pivot_;
};

class NegativeTemperatureProfile : public ValidationError {
public:
    NegativeTemperatureProfile(std::size_t node, double value);
    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    std::size_t node_;
    double value_;
};

class NTooSmall : public ValidationError {
public:
    NTooSmall(long n, double c);
    long n() const noexcept { return n_; }

private:
    long n_;
};

/// The implicit heat step produced a temperature below -pos_tol.
class PositivityLoss : public Error {
public:
    PositivityLoss(double min_value, double t);
    double min_value() const noexcept { return min_value_; }
    double t() const noexcept { return t_; }

private:
    double min_value_;
    double t_;
};

class PicardDivergence : public Error {
public:
    PicardDivergence(int iterations, double residual, double t);
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }
    double t() const noexcept { return t_; }

private:
    int iterations_;
    double residual_;
    double t_;
};

class AbortedRun : public Error {
public:
    AbortedRun(std::string reason, double t_reached);
    const std::string& reason() const noexcept { return reason_; }
    double t_reached() const noexcept { return t_reached_; }

private:
    std::string reason_;
    double t_reached_;
};

class IncompatibleExactSolution : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    ParseError(int line, std::string reason);
    int line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    int line_;
    std::string reason_;
};

class UnknownKey : public ValidationError {
public:
    explicit UnknownKey(std::string name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ConstraintViolation : public ValidationError {
public:
    ConstraintViolation(std::string field, std::string value, std::string constraint);
    const std::string& field() const noexcept { return field_; }
    const std::string& value() const noexcept { return value_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string field_;
    std::string value_;
    std::string constraint_;
};

}  // namespace thermo1d
