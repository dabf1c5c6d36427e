#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace thermo1d {

/// Uniform mesh over (a, b) with n_cells + 1 nodes and trapezoid weights.
class Grid {
public:
    Grid(double a, double b, int n_cells);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }
    int n_cells() const noexcept { return n_cells_; }
    std::size_t n_nodes() const noexcept { return weights_.size(); }
    double h() const noexcept { return h_; }

    /// Node coordinate; the last node is pinned to b exactly.
    double x(std::size_t i) const noexcept;
    /// Coordinate rescaled to [0, 1].
    double x_hat(std::size_t i) const noexcept;

    std::span<const double> weights() const noexcept { return weights_; }

    bool same_as(const Grid& other) const noexcept;

private:
    double a_;
    double b_;
    int n_cells_;
    double h_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double a, double b, int n_cells);

enum class Boundary { DirichletZero, NeumannZero };

/// Real values sampled on the nodes of a grid, tagged with the homogeneous
/// boundary condition they satisfy. A DirichletZero field always has exact
/// zeros at both endpoints.
class Field {
public:
    /// Empty placeholder without a grid; only assignment is meaningful.
    Field() = default;
    Field(GridPtr grid, Boundary bc);
    Field(GridPtr grid, std::vector<double> values, Boundary bc);

    /// Samples fn(x) at every node; Dirichlet endpoints are then pinned to 0.
    static Field sample(GridPtr grid, const std::function<double(double)>& fn, Boundary bc);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    Boundary bc() const noexcept { return bc_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    /// Re-pins Dirichlet endpoints after in-place edits.
    void enforce_bc() noexcept;

    double min() const noexcept;
    double max() const noexcept;

    friend bool operator==(const Field& lhs, const Field& rhs);

private:
    GridPtr grid_;
    std::vector<double> values_;
    Boundary bc_ = Boundary::NeumannZero;
};

/// Pointwise difference lhs - rhs; tagged with lhs's boundary condition.
Field operator-(const Field& lhs, const Field& rhs);

/// Throws GridMismatch unless both fields live on the same mesh.
void require_same_grid(const Grid& lhs, const Grid& rhs);

}  // namespace thermo1d
