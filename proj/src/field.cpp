#include "thermo1d/field.hpp"

#include "thermo1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thermo1d {

Grid::Grid(double a, double b, int n_cells) : a_(a), b_(b), n_cells_(n_cells), h_(0.0)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        std::ostringstream os;
        os << "InvalidGrid: need finite a < b, got a=" << a << " b=" << b;
        throw InvalidGrid(os.str());
    }
    if (n_cells < 2) {
        std::ostringstream os;
        os << "InvalidGrid: n_cells must be >= 2 for the three-point stencils, got " << n_cells;
        throw InvalidGrid(os.str());
    }
    h_ = (b - a) / n_cells;
    weights_.assign(static_cast<std::size_t>(n_cells) + 1, h_);
    weights_.front() = 0.5 * h_;
    weights_.back() = 0.5 * h_;
}

double Grid::x(std::size_t i) const noexcept
{
    if (i + 1 == n_nodes()) {
        return b_;
    }
    return a_ + static_cast<double>(i) * h_;
}

double Grid::x_hat(std::size_t i) const noexcept
{
    return static_cast<double>(i) / static_cast<double>(n_cells_);
}

bool Grid::same_as(const Grid& other) const noexcept
{
    return this == &other || (a_ == other.a_ && b_ == other.b_ && n_cells_ == other.n_cells_);
}

GridPtr make_grid(double a, double b, int n_cells)
{
    return std::make_shared<const Grid>(a, b, n_cells);
}

void require_same_grid(const Grid& lhs, const Grid& rhs)
{
    if (!lhs.same_as(rhs)) {
        std::ostringstream os;
        os << "GridMismatch: (" << lhs.a() << ", " << lhs.b() << ", " << lhs.n_cells() << ") vs ("
           << rhs.a() << ", " << rhs.b() << ", " << rhs.n_cells() << ")";
        throw GridMismatch(os.str());
    }
}

Field::Field(GridPtr grid, Boundary bc) : grid_(std::move(grid)), bc_(bc)
{
    if (!grid_) {
        throw InvalidGrid("InvalidGrid: null grid");
    }
    values_.assign(grid_->n_nodes(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values, Boundary bc)
    : grid_(std::move(grid)), values_(std::move(values)), bc_(bc)
{
    if (!grid_) {
        throw InvalidGrid("InvalidGrid: null grid");
    }
    if (values_.size() != grid_->n_nodes()) {
        std::ostringstream os;
        os << "InvalidField: " << values_.size() << " values for " << grid_->n_nodes()
           << " nodes";
        throw InvalidField(os.str());
    }
    if (bc_ == Boundary::DirichletZero && (values_.front() != 0.0 || values_.back() != 0.0)) {
        std::ostringstream os;
        os << "InvalidField: DirichletZero field with endpoint values " << values_.front()
           << ", " << values_.back();
        throw InvalidField(os.str());
    }
}

Field Field::sample(GridPtr grid, const std::function<double(double)>& fn, Boundary bc)
{
    Field f(std::move(grid), bc);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.values_[i] = fn(f.grid_->x(i));
    }
    f.enforce_bc();
    return f;
}

void Field::enforce_bc() noexcept
{
    if (bc_ == Boundary::DirichletZero) {
        values_.front() = 0.0;
        values_.back() = 0.0;
    }
}

double Field::min() const noexcept
{
    return *std::min_element(values_.begin(), values_.end());
}

double Field::max() const noexcept
{
    return *std::max_element(values_.begin(), values_.end());
}

bool operator==(const Field& lhs, const Field& rhs)
{
    return lhs.bc_ == rhs.bc_ && lhs.grid_->same_as(*rhs.grid_) && lhs.values_ == rhs.values_;
}

Field operator-(const Field& lhs, const Field& rhs)
{
    require_same_grid(lhs.grid(), rhs.grid());
    Field out(lhs.grid_ptr(), lhs.bc());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lhs[i] - rhs[i];
    }
    return out;
}

}  // namespace thermo1d
