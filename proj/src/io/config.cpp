#include "toa/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError((path.empty() ? "config" : path) + " must be an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown key '" + join(path, key) + "'");
    }
}

double number(const json& j, const char* key, const std::string& path, double def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(join(path, key) + " must be finite");
    return x;
}

double positive(const json& j, const char* key, const std::string& path, double def) {
    const double x = number(j, key, path, def);
    if (!(x > 0.0)) throw ConfigError(std::string(key) + " must be positive (" + join(path, key) + ")");
    return x;
}

std::size_t count(const json& j, const char* key, const std::string& path, std::size_t def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(join(path, key) + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string string(const json& j, const char* key, const std::string& path, const std::string& def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) throw ConfigError(join(path, key) + " must be a string");
    return j.at(key).get<std::string>();
}

bool boolean(const json& j, const char* key, const std::string& path, bool def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) throw ConfigError(join(path, key) + " must be true or false");
    return j.at(key).get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(path + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

// Accepts "name" or {"name": {...}} and returns (name, body).
std::pair<std::string, json> tagged(const json& j, const std::string& path) {
    if (j.is_string()) return {j.get<std::string>(), json::object()};
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(path + " must be a name or an object with exactly one key");
    auto it = j.begin();
    return {it.key(), it.value()};
}

Potential parse_potential(const json& j, double mass) {
    const std::string path = "potential";
    auto [name, body] = tagged(j, path);
    const std::string sub = join(path, name);
    if (name == "free") {
        check_keys(body, sub, {});
        return Potential(FreePotential{}, mass);
    }
    if (name == "harmonic") {
        check_keys(body, sub, {"omega"});
        return Potential(HarmonicPotential{positive(body, "omega", sub, 1.0)}, mass);
    }
    if (name == "sinusoidal") {
        check_keys(body, sub, {"v0", "a"});
        return Potential(SinusoidalPotential{number(body, "v0", sub, 1.0), number(body, "a", sub, 1.0)},
                         mass);
    }
    if (name == "polynomial") {
        check_keys(body, sub, {"coefficients"});
        if (!body.contains("coefficients")) throw ConfigError(sub + ".coefficients is required");
        return Potential(PolynomialPotential{numbers(body.at("coefficients"), sub + ".coefficients")},
                         mass);
    }
    throw ConfigError("unknown potential '" + name + "'");
}

QuantizationScheme parse_scheme(const json& j, const std::string& path) {
    auto [name, body] = tagged(j, path);
    const std::string sub = join(path, name);
    if (name == "weyl" || name == "symmetric" || name == "born_jordan") {
        check_keys(body, sub, {});
        if (name == "weyl") return QuantizationScheme::weyl();
        if (name == "symmetric") return QuantizationScheme::symmetric();
        return QuantizationScheme::born_jordan();
    }
    if (name == "deformed") {
        check_keys(body, sub, {"base", "alpha"});
        const QuantizationScheme base =
            body.contains("base") ? parse_scheme(body.at("base"), sub + ".base") : QuantizationScheme::weyl();
        const double alpha = number(body, "alpha", sub, 0.0);
        if (alpha < 0.0) throw ConfigError("alpha must be non-negative");
        return QuantizationScheme::deformed(base, Deformation::quadratic(alpha));
    }
    if (name == "general") {
        check_keys(body, sub, {"rows", "preset", "n_max"});
        if (body.contains("rows")) {
            const json& rows = body.at("rows");
            if (!rows.is_array()) throw ConfigError(sub + ".rows must be an array of arrays");
            GeneralPolynomial g;
            for (std::size_t n = 0; n < rows.size(); ++n)
                g.rows.push_back(numbers(rows[n], sub + ".rows[" + std::to_string(n) + "]"));
            return QuantizationScheme(std::move(g));
        }
        const std::string preset = string(body, "preset", sub, "weyl");
        const int n_max = int(count(body, "n_max", sub, 81));
        if (preset == "weyl") return QuantizationScheme(GeneralPolynomial::weyl_rows(n_max));
        if (preset == "symmetric") return QuantizationScheme(GeneralPolynomial::symmetric_rows(n_max));
        if (preset == "born_jordan") return QuantizationScheme(GeneralPolynomial::born_jordan_rows(n_max));
        throw ConfigError("unknown " + sub + ".preset '" + preset + "'");
    }
    throw ConfigError("unknown scheme '" + name + "'");
}

Classification parse_class(const std::string& s, const std::string& path) {
    if (s == "antinodal") return Classification::Antinodal;
    if (s == "nodal") return Classification::Nodal;
    if (s == "any") return Classification::Unclassified;
    throw ConfigError(path + " must be 'antinodal', 'nodal' or 'any'");
}

std::string class_name(Classification c) {
    return c == Classification::Unclassified ? "any" : to_string(c);
}

}  // namespace

ArrivalSettings EvolutionSettings::arrival_settings() const {
    ArrivalSettings a;
    a.dt = dt;
    a.horizon = horizon;
    a.min_samples = min_samples;
    a.density_snapshots = density_snapshots;
    a.max_steps = max_steps;
    a.base.edge_fraction = edge_fraction;
    a.base.edge_mass_limit = edge_mass_limit;
    a.base.edge_policy = edge_policy;
    return a;
}

RunConfig parse_config(const json& j) {
    check_keys(j, "", {"potential", "scheme", "params", "grid", "kernel", "spectrum", "evolution",
                       "selection", "diagnostics", "sweep", "kernel_dump", "output"});
    RunConfig c;

    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p, "params", {"mass", "hbar"});
        c.params.mass = positive(p, "mass", "params", 1.0);
        c.params.hbar = positive(p, "hbar", "params", 1.0);
    }
    c.potential = j.contains("potential") ? parse_potential(j.at("potential"), c.params.mass)
                                          : Potential(HarmonicPotential{1.0}, c.params.mass);
    if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme"), "scheme");

    // Desk-scale defaults: the sinusoidal potential needs a wider box.
    const bool sinusoidal = std::holds_alternative<SinusoidalPotential>(c.potential.variant());
    c.grid = sinusoidal ? GridConfig{10.0, 1024} : GridConfig{6.0, 512};
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"l", "N"});
        c.grid.l = positive(g, "l", "grid", c.grid.l);
        c.grid.N = count(g, "N", "grid", c.grid.N);
    }
    if (c.grid.N < 4 || c.grid.N % 2) throw ConfigError("N must be even and at least 4");

    c.kernel.length_scale = c.grid.l;
    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        check_keys(k, "kernel", {"method", "abs_tol", "rel_tol", "max_intervals", "series_k_max"});
        const std::string m = string(k, "method", "kernel", "auto");
        if (m == "auto") c.kernel.method = KernelMethod::Auto;
        else if (m == "closed") c.kernel.method = KernelMethod::Closed;
        else if (m == "quadrature") c.kernel.method = KernelMethod::Quadrature;
        else throw ConfigError("kernel.method must be 'auto', 'closed' or 'quadrature'");
        c.kernel.quad.abs_tol = positive(k, "abs_tol", "kernel", c.kernel.quad.abs_tol);
        c.kernel.quad.rel_tol = positive(k, "rel_tol", "kernel", c.kernel.quad.rel_tol);
        c.kernel.quad.max_intervals = int(count(k, "max_intervals", "kernel", c.kernel.quad.max_intervals));
        c.kernel.series_k_max = int(count(k, "series_k_max", "kernel", c.kernel.series_k_max));
    }

    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        check_keys(s, "spectrum", {"precision", "parity_reduction", "arrival_point"});
        const std::string p = string(s, "precision", "spectrum", "auto");
        if (p == "auto") c.spectrum.precision = Precision::Auto;
        else if (p == "double") c.spectrum.precision = Precision::Double;
        else if (p == "extended") c.spectrum.precision = Precision::Extended;
        else throw ConfigError("spectrum.precision must be 'auto', 'double' or 'extended'");
        c.spectrum.parity = boolean(s, "parity_reduction", "spectrum", true) ? ParityMode::Auto
                                                                             : ParityMode::Off;
        c.spectrum.arrival_point = number(s, "arrival_point", "spectrum", 0.0);
    }

    if (j.contains("evolution")) {
        const json& e = j.at("evolution");
        check_keys(e, "evolution", {"dt", "horizon", "min_samples", "density_snapshots",
                                    "edge_fraction", "edge_mass_limit", "edge_policy", "max_steps"});
        auto& ev = c.evolution;
        ev.dt = positive(e, "dt", "evolution", ev.dt);
        ev.horizon = positive(e, "horizon", "evolution", ev.horizon);
        ev.min_samples = count(e, "min_samples", "evolution", ev.min_samples);
        ev.density_snapshots = count(e, "density_snapshots", "evolution", ev.density_snapshots);
        ev.max_steps = count(e, "max_steps", "evolution", ev.max_steps);
        ev.edge_fraction = number(e, "edge_fraction", "evolution", ev.edge_fraction);
        if (!(ev.edge_fraction >= 0.0 && ev.edge_fraction < 0.5))
            throw ConfigError("edge_fraction must lie in [0, 0.5)");
        ev.edge_mass_limit = positive(e, "edge_mass_limit", "evolution", ev.edge_mass_limit);
        const std::string pol = string(e, "edge_policy", "evolution", "warn");
        if (pol == "warn") ev.edge_policy = EdgePolicy::Warn;
        else if (pol == "abort") ev.edge_policy = EdgePolicy::Abort;
        else throw ConfigError("evolution.edge_policy must be 'warn' or 'abort'");
    }

    if (j.contains("selection")) {
        const json& s = j.at("selection");
        check_keys(s, "selection", {"indices", "classification", "count", "min_tau"});
        if (s.contains("indices")) {
            const json& idx = s.at("indices");
            if (!idx.is_array()) throw ConfigError("selection.indices must be an array");
            for (const auto& v : idx) {
                if (!v.is_number_integer() || v.get<long long>() < 0 ||
                    v.get<std::size_t>() >= c.grid.N)
                    throw ConfigError("selection.indices entries must be integers in [0, N)");
                c.selection.indices.push_back(v.get<std::size_t>());
            }
        }
        const std::string cls = string(s, "classification", "selection", "both");
        if (cls == "antinodal") c.selection.classification = SelectionClass::Antinodal;
        else if (cls == "nodal") c.selection.classification = SelectionClass::Nodal;
        else if (cls == "both") c.selection.classification = SelectionClass::Both;
        else if (cls == "any") c.selection.classification = SelectionClass::Any;
        else throw ConfigError("selection.classification must be 'antinodal', 'nodal', 'both' or 'any'");
        c.selection.count = count(s, "count", "selection", c.selection.count);
        if (s.contains("min_tau")) c.selection.min_tau = number(s, "min_tau", "selection", 0.0);
    }

    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        check_keys(d, "diagnostics", {"box", "h", "samples", "reflected_check"});
        if (d.contains("box")) {
            const auto b = numbers(d.at("box"), "diagnostics.box");
            if (b.size() != 2 || !(b[1] > b[0]))
                throw ConfigError("diagnostics.box must be [lo, hi] with lo < hi");
            c.diagnostics.box = {b[0], b[1]};
        }
        c.diagnostics.h = positive(d, "h", "diagnostics", c.diagnostics.h);
        c.diagnostics.samples = int(count(d, "samples", "diagnostics", 15));
        if (c.diagnostics.samples < 1) throw ConfigError("diagnostics.samples must be at least 1");
        c.diagnostics.reflected_check = boolean(d, "reflected_check", "diagnostics", false);
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "sweep", {"alphas", "target_tau", "classification"});
        if (s.contains("alphas")) {
            c.sweep.alphas = numbers(s.at("alphas"), "sweep.alphas");
            for (double a : c.sweep.alphas)
                if (!(a >= 0.0)) throw ConfigError("sweep.alphas must be non-negative");
        }
        if (s.contains("target_tau")) c.sweep.target_tau = number(s, "target_tau", "sweep", 0.0);
        c.sweep.classification =
            parse_class(string(s, "classification", "sweep", "antinodal"), "sweep.classification");
    }

    if (j.contains("kernel_dump")) {
        const json& k = j.at("kernel_dump");
        check_keys(k, "kernel_dump", {"points", "range"});
        c.kernel_dump.points = count(k, "points", "kernel_dump", c.kernel_dump.points);
        c.kernel_dump.range = positive(k, "range", "kernel_dump", c.kernel_dump.range);
        if (c.kernel_dump.points < 1) throw ConfigError("kernel_dump.points must be at least 1");
    }

    c.output = j.contains("output") ? string(j, "output", "", "out") : "out";

    // Resolved echo.
    json r;
    r["potential"] = c.potential.describe();
    r["scheme"] = c.scheme.describe();
    r["params"] = {{"mass", c.params.mass}, {"hbar", c.params.hbar}};
    r["grid"] = {{"l", c.grid.l}, {"N", c.grid.N}};
    const char* methods[] = {"auto", "closed", "quadrature"};
    r["kernel"] = {{"method", methods[int(c.kernel.method)]},
                   {"abs_tol", c.kernel.quad.abs_tol},
                   {"rel_tol", c.kernel.quad.rel_tol},
                   {"max_intervals", c.kernel.quad.max_intervals},
                   {"series_k_max", c.kernel.series_k_max}};
    const char* precisions[] = {"auto", "double", "extended"};
    r["spectrum"] = {{"precision", precisions[int(c.spectrum.precision)]},
                     {"parity_reduction", c.spectrum.parity == ParityMode::Auto},
                     {"arrival_point", c.spectrum.arrival_point}};
    const auto& ev = c.evolution;
    r["evolution"] = {{"dt", ev.dt},
                      {"horizon", ev.horizon},
                      {"min_samples", ev.min_samples},
                      {"density_snapshots", ev.density_snapshots},
                      {"max_steps", ev.max_steps},
                      {"edge_fraction", ev.edge_fraction},
                      {"edge_mass_limit", ev.edge_mass_limit},
                      {"edge_policy", ev.edge_policy == EdgePolicy::Warn ? "warn" : "abort"}};
    const char* classes[] = {"antinodal", "nodal", "both", "any"};
    r["selection"] = {{"indices", c.selection.indices},
                      {"classification", classes[int(c.selection.classification)]},
                      {"count", c.selection.count}};
    r["selection"]["min_tau"] = c.selection.min_tau ? json(*c.selection.min_tau) : json("resolution_floor");
    r["diagnostics"] = {{"box", {c.diagnostics.box.lo, c.diagnostics.box.hi}},
                        {"h", c.diagnostics.h},
                        {"samples", c.diagnostics.samples},
                        {"reflected_check", c.diagnostics.reflected_check}};
    r["sweep"] = {{"alphas", c.sweep.alphas}, {"classification", class_name(c.sweep.classification)}};
    r["sweep"]["target_tau"] = c.sweep.target_tau ? json(*c.sweep.target_tau) : json("resolution_floor");
    r["kernel_dump"] = {{"points", c.kernel_dump.points}, {"range", c.kernel_dump.range}};
    r["output"] = c.output;
    c.resolved = std::move(r);
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + long(upto), '\n');
        std::ostringstream os;
        os << "config parse error at line " << line << ": " << e.what();
        throw ConfigError(os.str());
    }
    return parse_config(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace toa
