#pragma once

#include "thermo1d/field.hpp"
#include "thermo1d/initial_data.hpp"
#include "thermo1d/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace thermo1d {

struct GridConfig {
    double a = 0.0;
    double b = 1.0;
    int n_cells = 0;
};

struct PhysicsConfig {
    double mu = 1.0;
    double nu = 0.01;
};

struct TimeConfig {
    std::optional<double> dt;  ///< defaults to h/4
    double t_end = 0.0;
    double picard_tol = 1e-10;
    int picard_max = 50;
    double pos_tol = 1e-10;
};

/// Profile kinds, as written in the config:
///   zero | constant(c) | sine_packet[(A[, m])] | bump[(A[, center, half_width])] | file:<path>
struct DataConfig {
    std::string u0_kind = "sine_packet";
    std::string u1_kind = "sine_packet";
    std::string theta0_kind = "sine_packet";
    std::optional<long> mollify_n;
};

struct OutputConfig {
    std::string dir = "out";
    int every = 1;
    bool emit_fields = false;
};

struct RunConfig {
    GridConfig grid;
    PhysicsConfig physics;
    TimeConfig time;
    DataConfig data;
    OutputConfig output;

    GridPtr make_grid() const;
    PhysParams params(const Grid& grid) const;
    /// Samples the configured profiles; `file:` paths resolve against base_dir.
    /// When mollify_n is set, u1 and theta0 are replaced by their regularized versions.
    InitialData initial_data(const GridPtr& grid, const std::filesystem::path& base_dir = {}) const;
};

/// Sectioned `key = value` text with `[section]` headers and `#` comments.
/// Required: grid.a, grid.b, grid.n_cells, time.t_end.
/// Throws ParseError, UnknownKey or ConstraintViolation.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Parses a profile kind string; `file:` kinds are read against `grid`.
Profile parse_profile(const std::string& kind, const Grid& grid,
                      const std::filesystem::path& base_dir = {});

/// Syntax-only check of a profile kind string.
bool is_valid_profile_kind(const std::string& kind);

}  // namespace thermo1d
