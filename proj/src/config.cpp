#include "thermo1d/config.hpp"

#include "thermo1d/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace thermo1d {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> to_double(std::string_view s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::optional<long> to_long(std::string_view s)
{
    long v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::string str(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct Entry {
    std::string value;
    int line = 0;
};

// "name(arg, arg)" -> name and numeric args.
struct KindCall {
    std::string name;
    std::vector<double> args;
};

std::optional<KindCall> parse_call(const std::string& kind)
{
    KindCall call;
    const auto open = kind.find('(');
    if (open == std::string::npos) {
        call.name = trim(kind);
        return call;
    }
    if (kind.back() != ')') {
        return std::nullopt;
    }
    call.name = trim(std::string_view(kind).substr(0, open));
    std::string inner = kind.substr(open + 1, kind.size() - open - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(trim(item));
        if (!v) {
            return std::nullopt;
        }
        call.args.push_back(*v);
    }
    return call;
}

std::optional<Profile> analytic_profile(const std::string& kind)
{
    const auto call = parse_call(kind);
    if (!call) {
        return std::nullopt;
    }
    const auto& a = call->args;
    if (call->name == "zero" && a.empty()) {
        return Constant{0.0};
    }
    if (call->name == "constant" && a.size() == 1) {
        return Constant{a[0]};
    }
    if (call->name == "sine_packet" && a.size() <= 2) {
        SinePacket p;
        if (!a.empty()) {
            p.amplitude = a[0];
        }
        if (a.size() == 2) {
            if (a[1] != std::floor(a[1]) || a[1] < 1.0) {
                return std::nullopt;
            }
            p.mode = static_cast<int>(a[1]);
        }
        return p;
    }
    if (call->name == "bump" && (a.size() <= 1 || a.size() == 3)) {
        Bump p;
        if (!a.empty()) {
            p.amplitude = a[0];
        }
        if (a.size() == 3) {
            p.center = a[1];
            p.half_width = a[2];
            if (!(p.half_width > 0.0)) {
                return std::nullopt;
            }
        }
        return p;
    }
    return std::nullopt;
}

constexpr std::string_view kFilePrefix = "file:";

}  // namespace

bool is_valid_profile_kind(const std::string& kind)
{
    if (kind.starts_with(kFilePrefix)) {
        return kind.size() > kFilePrefix.size();
    }
    return analytic_profile(kind).has_value();
}

Profile parse_profile(const std::string& kind, const Grid& grid, const std::filesystem::path& base_dir)
{
    if (kind.starts_with(kFilePrefix)) {
        std::filesystem::path p(kind.substr(kFilePrefix.size()));
        if (p.is_relative() && !base_dir.empty()) {
            p = base_dir / p;
        }
        return load_profile_file(p, grid);
    }
    auto profile = analytic_profile(kind);
    if (!profile) {
        throw ConstraintViolation("profile kind", kind,
                                  "zero | constant(c) | sine_packet(A, m) | bump(A, c, w) | file:<path>");
    }
    return *profile;
}

RunConfig parse_config(std::string_view text)
{
    static const std::map<std::string, std::set<std::string>> schema = {
        {"grid", {"a", "b", "n_cells"}},
        {"physics", {"mu", "nu"}},
        {"time", {"dt", "t_end", "picard_tol", "picard_max", "pos_tol"}},
        {"data", {"u0_kind", "u1_kind", "theta0_kind", "mollify_n"}},
        {"output", {"dir", "every", "emit_fields"}},
    };

    std::map<std::string, Entry> entries;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // Strip comments outside quoted strings.
        bool quoted = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') {
                quoted = !quoted;
            } else if (raw[i] == '#' && !quoted) {
                raw.erase(i);
                break;
            }
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(line_no, "unterminated section header");
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!schema.contains(section)) {
                throw UnknownKey(section);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected `key = value`");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ParseError(line_no, "missing key before `=`");
        }
        if (value.empty()) {
            throw ParseError(line_no, "missing value for `" + key + "`");
        }
        if (section.empty()) {
            throw ParseError(line_no, "key `" + key + "` outside of any [section]");
        }
        if (!schema.at(section).contains(key)) {
            throw UnknownKey(section + "." + key);
        }
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                throw ParseError(line_no, "unterminated string for `" + key + "`");
            }
            value = value.substr(1, value.size() - 2);
        }
        const std::string full = section + "." + key;
        if (entries.contains(full)) {
            throw ParseError(line_no, "duplicate key `" + full + "`");
        }
        entries[full] = Entry{value, line_no};
    }

    auto number = [&](const std::string& key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        const auto v = to_double(it->second.value);
        if (!v || !std::isfinite(*v)) {
            throw ParseError(it->second.line, "`" + key + "` expects a number, got `" +
                                                  it->second.value + "`");
        }
        return v;
    };
    auto integer = [&](const std::string& key) -> std::optional<long> {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        const auto v = to_long(it->second.value);
        if (!v) {
            throw ParseError(it->second.line, "`" + key + "` expects an integer, got `" +
                                                  it->second.value + "`");
        }
        return v;
    };
    auto boolean = [&](const std::string& key) -> std::optional<bool> {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        if (it->second.value == "true") {
            return true;
        }
        if (it->second.value == "false") {
            return false;
        }
        throw ParseError(it->second.line, "`" + key + "` expects true or false");
    };
    auto text_value = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        return it->second.value;
    };
    auto required = [](const std::string& key, auto v) {
        if (!v) {
            throw ConstraintViolation(key, "<missing>", "required key");
        }
        return *v;
    };

    RunConfig cfg;
    cfg.grid.a = required("grid.a", number("grid.a"));
    cfg.grid.b = required("grid.b", number("grid.b"));
    const long n_cells = required("grid.n_cells", integer("grid.n_cells"));
    if (n_cells < 2 || n_cells > 1'000'000) {
        throw ConstraintViolation("grid.n_cells", std::to_string(n_cells), ">= 2 (and <= 1e6)");
    }
    cfg.grid.n_cells = static_cast<int>(n_cells);
    if (!(cfg.grid.b > cfg.grid.a)) {
        throw ConstraintViolation("grid.b", str(cfg.grid.b), "> grid.a");
    }

    cfg.physics.mu = number("physics.mu").value_or(cfg.physics.mu);
    cfg.physics.nu = number("physics.nu").value_or(cfg.physics.nu);
    if (!(cfg.physics.mu >= 0.0)) {
        throw ConstraintViolation("physics.mu", str(cfg.physics.mu), ">= 0");
    }
    if (!(cfg.physics.nu >= 0.0)) {
        throw ConstraintViolation("physics.nu", str(cfg.physics.nu), ">= 0");
    }

    cfg.time.t_end = required("time.t_end", number("time.t_end"));
    cfg.time.dt = number("time.dt");
    cfg.time.picard_tol = number("time.picard_tol").value_or(cfg.time.picard_tol);
    const long picard_max = integer("time.picard_max").value_or(cfg.time.picard_max);
    cfg.time.pos_tol = number("time.pos_tol").value_or(cfg.time.pos_tol);
    if (!(cfg.time.t_end > 0.0)) {
        throw ConstraintViolation("time.t_end", str(cfg.time.t_end), "> 0");
    }
    if (cfg.time.dt && !(*cfg.time.dt > 0.0)) {
        throw ConstraintViolation("time.dt", str(*cfg.time.dt), "> 0");
    }
    if (cfg.time.dt && *cfg.time.dt > cfg.time.t_end) {
        throw ConstraintViolation("time.dt", str(*cfg.time.dt), "<= time.t_end");
    }
    if (!(cfg.time.picard_tol > 0.0)) {
        throw ConstraintViolation("time.picard_tol", str(cfg.time.picard_tol), "> 0");
    }
    if (picard_max < 1 || picard_max > 100000) {
        throw ConstraintViolation("time.picard_max", std::to_string(picard_max), ">= 1");
    }
    cfg.time.picard_max = static_cast<int>(picard_max);
    if (!(cfg.time.pos_tol >= 0.0)) {
        throw ConstraintViolation("time.pos_tol", str(cfg.time.pos_tol), ">= 0");
    }

    cfg.data.u0_kind = text_value("data.u0_kind").value_or(cfg.data.u0_kind);
    cfg.data.u1_kind = text_value("data.u1_kind").value_or(cfg.data.u1_kind);
    cfg.data.theta0_kind = text_value("data.theta0_kind").value_or(cfg.data.theta0_kind);
    for (const auto& [key, kind] : {std::pair{"data.u0_kind", cfg.data.u0_kind},
                                    std::pair{"data.u1_kind", cfg.data.u1_kind},
                                    std::pair{"data.theta0_kind", cfg.data.theta0_kind}}) {
        if (!is_valid_profile_kind(kind)) {
            throw ConstraintViolation(key, kind,
                                      "zero | constant(c) | sine_packet(A, m) | bump(A, c, w) | file:<path>");
        }
    }
    cfg.data.mollify_n = integer("data.mollify_n");
    if (cfg.data.mollify_n) {
        const double c = 0.5 * (cfg.grid.b - cfg.grid.a);
        const long n = *cfg.data.mollify_n;
        if (n < 1 || !(c * std::sqrt(static_cast<double>(n)) > 1.0)) {
            throw ConstraintViolation("data.mollify_n", std::to_string(n),
                                      "c*sqrt(n) > 1 with c = (b-a)/2");
        }
    }

    cfg.output.dir = text_value("output.dir").value_or(cfg.output.dir);
    const long every = integer("output.every").value_or(cfg.output.every);
    if (every < 1) {
        throw ConstraintViolation("output.every", std::to_string(every), ">= 1");
    }
    cfg.output.every = static_cast<int>(every);
    cfg.output.emit_fields = boolean("output.emit_fields").value_or(cfg.output.emit_fields);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

GridPtr RunConfig::make_grid() const
{
    return thermo1d::make_grid(grid.a, grid.b, grid.n_cells);
}

PhysParams RunConfig::params(const Grid& g) const
{
    PhysParams p;
    p.mu = physics.mu;
    p.nu = physics.nu;
    p.dt = time.dt.value_or(g.h() / 4.0);
    if (p.dt > time.t_end) {
        p.dt = time.t_end;
    }
    p.t_end = time.t_end;
    p.picard_tol = time.picard_tol;
    p.picard_max = time.picard_max;
    p.pos_tol = time.pos_tol;
    p.validate();
    return p;
}

InitialData RunConfig::initial_data(const GridPtr& g, const std::filesystem::path& base_dir) const
{
    InitialData init{make_profile(parse_profile(data.u0_kind, *g, base_dir), g, Boundary::DirichletZero),
                     make_profile(parse_profile(data.u1_kind, *g, base_dir), g, Boundary::DirichletZero),
                     make_profile(parse_profile(data.theta0_kind, *g, base_dir), g,
                                  Boundary::NeumannZero)};
    if (data.mollify_n) {
        MollifiedFamily fam = mollify(init, *data.mollify_n);
        init.u1 = std::move(fam.u1_n);
        init.theta0 = std::move(fam.theta0_n);
    }
    init.validate();
    return init;
}

}  // namespace thermo1d
