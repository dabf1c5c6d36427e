#pragma once

#include "thermo1d/field.hpp"

#include <filesystem>
#include <variant>
#include <vector>

namespace thermo1d {

// Profile kinds. Shapes are written in the rescaled coordinate s = (x-a)/(b-a).

/// DirichletZero: A sin(m pi s).  NeumannZero: A (1 + cos(m pi s)).
struct SinePacket {
    double amplitude = 1.0;
    int mode = 1;
};

/// A exp(1 - 1/(1 - r^2)) for |r| < 1 with r = (s - center) / half_width; peak value A.
struct Bump {
    double amplitude = 1.0;
    double center = 0.5;
    double half_width = 0.25;
};

struct Constant {
    double value = 0.0;
};

struct Custom {
    std::vector<double> samples;
};

using Profile = std::variant<SinePacket, Bump, Constant, Custom>;

/// Samples a profile on the grid. DirichletZero profiles that do not vanish
/// at the endpoints are multiplied by the cutoff 1 - (1 - 2s)^8.
/// NeumannZero fields are temperatures here, so a negative sample throws
/// NegativeTemperatureProfile.
Field make_profile(const Profile& kind, GridPtr grid, Boundary bc);

/// Reads `x value` lines (whitespace separated, `#` comments allowed). The x
/// column must reproduce the grid nodes to 1e-12, else GridMismatch.
Custom load_profile_file(const std::filesystem::path& path, const Grid& grid);

struct InitialData {
    Field u0;      ///< displacement, DirichletZero
    Field u1;      ///< velocity, DirichletZero
    Field theta0;  ///< temperature, NeumannZero, >= 0

    /// Throws on a violated invariant (bc tags, shared grid, theta0 >= 0).
    void validate() const;
};

/// Linear interpolation of a field at an arbitrary point of [a, b].
double interpolate(const Field& f, double x);

/// sigma_n = (c sqrt(n) + 1) / (c sqrt(n) - 1); throws NTooSmall unless c sqrt(n) > 1.
double squeeze_factor(double c, long n);

/// Discrete standard mollifier on spacing h with radius eps: one weight per
/// offset k with |k h| < eps, normalized to sum to one.
std::vector<double> mollifier_weights(double h, double eps);

/// Squeeze about the midpoint by sigma_n, then convolve with the mollifier of
/// radius 1/sqrt(n). The result vanishes on a neighbourhood of both endpoints.
Field mollify_velocity(const Field& u1, long n);

/// Even reflection across both endpoints, then convolution with the radius
/// 1/sqrt(n) mollifier. Nonnegative in, nonnegative out.
Field mollify_temperature(const Field& theta0, long n);

struct MollifiedFamily {
    long n = 0;
    double sigma_n = 0.0;
    double eps_n = 0.0;
    Field u1_n;
    Field theta0_n;
};

MollifiedFamily mollify(const InitialData& init, long n);

}  // namespace thermo1d
