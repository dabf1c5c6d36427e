#include "thermo1d/initial_data.hpp"

#include "thermo1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace thermo1d {

namespace {

double bump_shape(double r)
{
    if (std::abs(r) >= 1.0) {
        return 0.0;
    }
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

double cutoff(double s)
{
    return 1.0 - std::pow(1.0 - 2.0 * s, 8);
}

struct Sampler {
    const Grid& grid;
    Boundary bc;

    std::vector<double> operator()(const SinePacket& p) const
    {
        std::vector<double> v(grid.n_nodes());
        const double k = p.mode * std::numbers::pi;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double s = grid.x_hat(i);
            v[i] = bc == Boundary::DirichletZero ? p.amplitude * std::sin(k * s)
                                                 : p.amplitude * (1.0 + std::cos(k * s));
        }
        return v;
    }

    std::vector<double> operator()(const Bump& p) const
    {
        if (!(p.half_width > 0.0)) {
            throw ConstraintViolation("bump.half_width", std::to_string(p.half_width), "> 0");
        }
        std::vector<double> v(grid.n_nodes());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = p.amplitude * bump_shape((grid.x_hat(i) - p.center) / p.half_width);
        }
        return v;
    }

    std::vector<double> operator()(const Constant& p) const
    {
        return std::vector<double>(grid.n_nodes(), p.value);
    }

    std::vector<double> operator()(const Custom& p) const
    {
        if (p.samples.size() != grid.n_nodes()) {
            std::ostringstream os;
            os << "GridMismatch: custom profile has " << p.samples.size() << " samples for "
               << grid.n_nodes() << " nodes";
            throw GridMismatch(os.str());
        }
        return p.samples;
    }
};

// Index into a field evenly extended across both endpoints.
std::size_t reflect(long j, long last)
{
    const long period = 2 * last;
    j %= period;
    if (j < 0) {
        j += period;
    }
    return static_cast<std::size_t>(j <= last ? j : period - j);
}

}  // namespace

Field make_profile(const Profile& kind, GridPtr grid, Boundary bc)
{
    std::vector<double> v = std::visit(Sampler{*grid, bc}, kind);
    if (bc == Boundary::DirichletZero) {
        if (v.front() != 0.0 || v.back() != 0.0) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] *= cutoff(grid->x_hat(i));
            }
        }
        v.front() = 0.0;
        v.back() = 0.0;
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0.0) {
                throw NegativeTemperatureProfile(i, v[i]);
            }
        }
    }
    return Field(std::move(grid), std::move(v), bc);
}

Custom load_profile_file(const std::filesystem::path& path, const Grid& grid)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open profile file " + path.string());
    }
    Custom out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        double x = 0.0;
        double value = 0.0;
        if (!(ls >> x)) {
            continue;
        }
        if (!(ls >> value)) {
            throw ParseError(line_no, "expected `x value` in " + path.string());
        }
        std::string extra;
        if (ls >> extra) {
            throw ParseError(line_no, "trailing text `" + extra + "` in " + path.string());
        }
        const std::size_t i = out.samples.size();
        if (i >= grid.n_nodes() || std::abs(x - grid.x(i)) > 1e-12) {
            std::ostringstream os;
            os.precision(17);
            os << "GridMismatch: " << path.string() << " line " << line_no << " has x=" << x;
            if (i < grid.n_nodes()) {
                os << ", expected node " << i << " at " << grid.x(i);
            } else {
                os << " beyond the last node";
            }
            throw GridMismatch(os.str());
        }
        out.samples.push_back(value);
    }
    if (out.samples.size() != grid.n_nodes()) {
        std::ostringstream os;
        os << "GridMismatch: " << path.string() << " has " << out.samples.size()
           << " nodes, grid has " << grid.n_nodes();
        throw GridMismatch(os.str());
    }
    return out;
}

void InitialData::validate() const
{
    if (u0.bc() != Boundary::DirichletZero || u1.bc() != Boundary::DirichletZero) {
        throw InvalidField("InvalidField: u0 and u1 must be DirichletZero");
    }
    if (theta0.bc() != Boundary::NeumannZero) {
        throw InvalidField("InvalidField: theta0 must be NeumannZero");
    }
    require_same_grid(u0.grid(), u1.grid());
    require_same_grid(u0.grid(), theta0.grid());
    if (u0[0] != 0.0 || u0[u0.size() - 1] != 0.0 || u1[0] != 0.0 || u1[u1.size() - 1] != 0.0) {
        throw InvalidField("InvalidField: u0 and u1 must vanish at the endpoints");
    }
    for (std::size_t i = 0; i < theta0.size(); ++i) {
        if (theta0[i] < 0.0) {
            throw NegativeTemperatureProfile(i, theta0[i]);
        }
    }
}

double interpolate(const Field& f, double x)
{
    const Grid& g = f.grid();
    if (x <= g.a()) {
        return f[0];
    }
    if (x >= g.b()) {
        return f[f.size() - 1];
    }
    const double t = (x - g.a()) / g.h();
    const auto i = std::min(static_cast<std::size_t>(t), f.size() - 2);
    const double frac = t - static_cast<double>(i);
    return (1.0 - frac) * f[i] + frac * f[i + 1];
}

double squeeze_factor(double c, long n)
{
    const double cs = c * std::sqrt(static_cast<double>(n));
    if (n < 1 || !(cs > 1.0)) {
        throw NTooSmall(n, c);
    }
    return (cs + 1.0) / (cs - 1.0);
}

std::vector<double> mollifier_weights(double h, double eps)
{
    auto radius = static_cast<long>(std::floor(eps / h));
    if (radius > 0 && static_cast<double>(radius) * h >= eps) {
        --radius;
    }
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (long k = -radius; k <= radius; ++k) {
        const double value = bump_shape(static_cast<double>(k) * h / eps);
        w[static_cast<std::size_t>(k + radius)] = value;
        total += value;
    }
    for (double& value : w) {
        value /= total;
    }
    return w;
}

Field mollify_velocity(const Field& u1, long n)
{
    if (u1.bc() != Boundary::DirichletZero) {
        throw InvalidField("InvalidField: mollify_velocity expects a DirichletZero field");
    }
    const Grid& g = u1.grid();
    const double c = 0.5 * g.length();
    const double sigma = squeeze_factor(c, n);
    const double mid = 0.5 * (g.a() + g.b());
    const std::size_t nodes = u1.size();

    std::vector<double> squeezed(nodes, 0.0);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double s = sigma * (g.x(i) - mid);
        if (std::abs(s) < c) {
            squeezed[i] = interpolate(u1, mid + s);
        }
    }

    const auto w = mollifier_weights(g.h(), 1.0 / std::sqrt(static_cast<double>(n)));
    const long radius = static_cast<long>(w.size() / 2);
    Field out(u1.grid_ptr(), Boundary::DirichletZero);
    for (std::size_t i = 1; i + 1 < nodes; ++i) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k) {
            const long j = static_cast<long>(i) + k;
            if (j >= 0 && j < static_cast<long>(nodes)) {
                acc += w[static_cast<std::size_t>(k + radius)] * squeezed[static_cast<std::size_t>(j)];
            }
        }
        out[i] = acc;
    }
    return out;
}

Field mollify_temperature(const Field& theta0, long n)
{
    if (n < 1) {
        throw NTooSmall(n, 0.5 * theta0.grid().length());
    }
    for (std::size_t i = 0; i < theta0.size(); ++i) {
        if (theta0[i] < 0.0) {
            throw NegativeTemperatureProfile(i, theta0[i]);
        }
    }
    const Grid& g = theta0.grid();
    const auto w = mollifier_weights(g.h(), 1.0 / std::sqrt(static_cast<double>(n)));
    const long radius = static_cast<long>(w.size() / 2);
    const long last = static_cast<long>(theta0.size()) - 1;

    Field out(theta0.grid_ptr(), Boundary::NeumannZero);
    for (long i = 0; i <= last; ++i) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k) {
            acc += w[static_cast<std::size_t>(k + radius)] * theta0[reflect(i + k, last)];
        }
        // Roundoff negatives inside (-1e-15, 0) are clamped; nothing else can occur.
        if (acc < 0.0 && acc > -1e-15) {
            acc = 0.0;
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

MollifiedFamily mollify(const InitialData& init, long n)
{
    MollifiedFamily fam{n, squeeze_factor(0.5 * init.u1.grid().length(), n),
                        1.0 / std::sqrt(static_cast<double>(n)), mollify_velocity(init.u1, n),
                        mollify_temperature(init.theta0, n)};
    return fam;
}

}  // namespace thermo1d
