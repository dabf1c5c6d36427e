#include "thermo1d/errors.hpp"

#include <sstream>
#include <utility>

namespace thermo1d {

namespace {

template <class... Args>
std::string concat(Args&&... args)
{
    std::ostringstream os;
    os.precision(17);
    (os << ... << args);
    return os.str();
}

}  // namespace

NonDominantMatrix::NonDominantMatrix(std::size_t row, double pivot)
    : Error(concat("NonDominantMatrix: pivot ", pivot, " at row ", row,
                   " in a matrix that is not diagonally dominant")),
      row_(row),
      pivot_(pivot)
{
}

NegativeTemperatureProfile::NegativeTemperatureProfile(std::size_t node, double value)
    : ValidationError(concat("NegativeTemperatureProfile: value ", value, " at node ", node)),
      node_(node),
      value_(value)
{
}

NTooSmall::NTooSmall(long n, double c)
    : ValidationError(concat("NTooSmall: mollifier index n=", n,
                             " requires c*sqrt(n) > 1 with c=", c)),
      n_(n)
{
}

PositivityLoss::PositivityLoss(double min_value, double t)
    : Error(concat("PositivityLoss: min theta ", min_value, " at t=", t)),
      min_value_(min_value),
      t_(t)
{
}

PicardDivergence::PicardDivergence(int iterations, double residual, double t)
    : Error(concat("PicardDivergence: residual ", residual, " after ", iterations,
                   " iterations at t=", t)),
      iterations_(iterations),
      residual_(residual),
      t_(t)
{
}

AbortedRun::AbortedRun(std::string reason, double t_reached)
    : Error(concat("AbortedRun at t=", t_reached, ": ", reason)),
      reason_(std::move(reason)),
      t_reached_(t_reached)
{
}

ParseError::ParseError(int line, std::string reason)
    : ValidationError(concat("ParseError (line ", line, "): ", reason)),
      line_(line),
      reason_(std::move(reason))
{
}

UnknownKey::UnknownKey(std::string name)
    : ValidationError(concat("UnknownKey: ", name)), name_(std::move(name))
{
}

ConstraintViolation::ConstraintViolation(std::string field, std::string value,
                                         std::string constraint)
    : ValidationError(concat("ConstraintViolation: ", field, " = ", value, " (requires ",
                             constraint, ")")),
      field_(std::move(field)),
      value_(std::move(value)),
      constraint_(std::move(constraint))
{
}

}  // namespace thermo1d
