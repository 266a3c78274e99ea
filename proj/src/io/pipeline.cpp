#include "toa/io/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "toa/analysis/arrival.hpp"
#include "toa/analysis/conjugacy.hpp"
#include "toa/analysis/deformation.hpp"
#include "toa/analysis/parity.hpp"
#include "toa/errors.hpp"
#include "toa/io/csv.hpp"
#include "toa/simd/kernels.hpp"

namespace toa {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<Command> parse_command(const std::string& n) {
    if (n == "kernel") return Command::Kernel;
    if (n == "spectrum") return Command::Spectrum;
    if (n == "evolve") return Command::Evolve;
    if (n == "arrival") return Command::Arrival;
    if (n == "conjugacy") return Command::Conjugacy;
    if (n == "parity") return Command::Parity;
    if (n == "sweep") return Command::Sweep;
    return std::nullopt;
}

std::string to_string(Command c) {
    switch (c) {
        case Command::Kernel: return "kernel";
        case Command::Spectrum: return "spectrum";
        case Command::Evolve: return "evolve";
        case Command::Arrival: return "arrival";
        case Command::Conjugacy: return "conjugacy";
        case Command::Parity: return "parity";
        case Command::Sweep: return "sweep";
    }
    return "unknown";
}

json RunManifest::to_json() const {
    json j;
    j["tool"] = "toa";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["status"] = status;
    j["exit_code"] = exit_code;
    if (!error.empty()) j["error"] = error;
    j["simd_backend"] = simd_backend;
    j["config"] = config;
    json t = json::object();
    for (const auto& [stage, sec] : timings) t[stage] = sec;
    j["timings_seconds"] = t;
    json checks_j = json::array();
    for (const auto& c : checks)
        checks_j.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
    j["checks"] = checks_j;
    j["warnings"] = warnings;
    j["artifacts"] = artifacts;
    return j;
}

std::vector<std::size_t> select_eigenpairs(const SpectralDecomposition& s, const SelectionConfig& sel,
                                           double default_min_tau) {
    if (!sel.indices.empty()) {
        for (auto i : sel.indices)
            if (i >= s.pairs.size()) throw ConfigError("selection index out of range");
        return sel.indices;
    }
    const double min_tau = sel.min_tau.value_or(default_min_tau);
    std::vector<std::size_t> out;
    auto take = [&](std::optional<Classification> cls) {
        std::size_t n = 0;
        for (std::size_t k = 0; k < s.pairs.size() && n < sel.count; ++k) {
            const auto& p = s.pairs[k];
            if (!(p.tau >= min_tau && p.tau > 0.0)) continue;
            if (cls && p.classification != *cls) continue;
            out.push_back(k);
            ++n;
        }
    };
    switch (sel.classification) {
        case SelectionClass::Antinodal: take(Classification::Antinodal); break;
        case SelectionClass::Nodal: take(Classification::Nodal); break;
        case SelectionClass::Any: take(std::nullopt); break;
        case SelectionClass::Both:
            take(Classification::Antinodal);
            take(Classification::Nodal);
            break;
    }
    return out;
}

namespace {

class Runner {
public:
    Runner(const RunConfig& c, const fs::path& dir, std::ostream* log, RunManifest& m)
        : c_(c), dir_(dir), log_(log), m_(m) {}

    void run(Command cmd) {
        switch (cmd) {
            case Command::Kernel: kernel_dump(); break;
            case Command::Spectrum: spectrum(); break;
            case Command::Evolve: spectrum(); evolve(false); break;
            case Command::Arrival: spectrum(); evolve(true); diagnostics(true, true); break;
            case Command::Conjugacy: diagnostics(true, false); break;
            case Command::Parity: diagnostics(false, true); break;
            case Command::Sweep: sweep(); break;
        }
    }

private:
    template <class F>
    auto timed(const std::string& stage, F&& f) {
        say("[" + stage + "]");
        const auto t0 = std::chrono::steady_clock::now();
        struct Guard {
            RunManifest& m;
            std::string stage;
            std::chrono::steady_clock::time_point t0;
            ~Guard() {
                m.timings.emplace_back(
                    stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            }
        } g{m_, stage, t0};
        return f();
    }

    void say(const std::string& s) {
        if (log_) *log_ << s << '\n';
    }

    std::string path(const std::string& name) {
        m_.artifacts.push_back(name);
        return (dir_ / name).string();
    }

    void check(const std::string& name, double value, double limit, bool upper = true) {
        const bool pass = upper ? value <= limit : value >= limit;
        m_.checks.push_back({name, pass, value, limit});
        if (!pass) m_.warnings.push_back("check '" + name + "' failed");
    }

    const KernelFactor& factor() {
        if (!factor_) factor_.emplace(c_.scheme, c_.potential, c_.params, c_.kernel);
        return *factor_;
    }

    const SpatialGrid& grid() {
        if (!grid_) grid_ = build_grid(c_.grid.l, c_.grid.N);
        return *grid_;
    }

    const OperatorMatrix& matrix() {
        if (!matrix_)
            matrix_ = timed("matrix", [&] {
                return build_operator_matrix(assemble_kernel(factor(), c_.params), grid());
            });
        return *matrix_;
    }

    void kernel_dump() {
        const auto& T = factor();
        const std::size_t P = c_.kernel_dump.points;
        const double step = P > 1 ? 2.0 * c_.kernel_dump.range / double(P - 1) : 0.0;
        std::vector<double> q(P);
        for (std::size_t i = 0; i < P; ++i) q[i] = (double(i) - 0.5 * double(P - 1)) * step;
        double sym = 0.0, diag = 0.0, free_dev = 0.0;
        timed("kernel", [&] {
            CsvWriter w(path("kernel.csv"), {"q", "qp", "T"});
            for (double a : q)
                for (double b : q) {
                    const double t = T(a, b);
                    w.cell(a).cell(b).cell(t).end_row();
                    sym = std::max(sym, std::fabs(t - T(b, a)));
                    if (c_.potential.is_free()) free_dev = std::max(free_dev, std::fabs(t - 0.25 * (a + b)));
                }
            for (double a : q) diag = std::max(diag, std::fabs(T(a, a) - 0.5 * a));
            return 0;
        });
        check("kernel_symmetry", sym, 1e-10);
        check("kernel_diagonal", diag, 1e-8);
        if (c_.potential.is_free()) check("free_reduction", free_dev, 1e-10);
    }

    void spectrum() {
        const OperatorMatrix& M = matrix();
        check("hermiticity", M.hermiticity_residual(), 1e-12);
        spec_ = timed("spectrum", [&] { return solve_spectrum(M, c_.spectrum); });
        const auto& s = *spec_;
        say("  " + std::to_string(s.pairs.size()) + " eigenpairs, " +
            (s.extended ? "extended" : "double") + " precision" +
            (s.parity_reduced ? ", parity-reduced" : ""));

        double tau_max = 0.0, pairing = 0.0, norm_err = 0.0, min_par = 1.0;
        const std::size_t N = s.pairs.size();
        for (const auto& p : s.pairs) tau_max = std::max(tau_max, std::fabs(p.tau));
        for (std::size_t k = 0; k < N; ++k) pairing = std::max(pairing, std::fabs(s.pairs[k].tau + s.pairs[N - 1 - k].tau));
        for (const auto& p : s.pairs) {
            double n2 = 0.0;
            for (auto z : p.psi) n2 += std::norm(z);
            norm_err = std::max(norm_err, std::fabs(n2 * s.grid.delta - 1.0));
            min_par = std::min(min_par, std::abs(p.parity));
        }
        check("pm_pairing", pairing, 1e-10 * tau_max);
        check("normalization", norm_err, 1e-12);
        if (c_.potential.is_even()) check("definite_parity", min_par, 1.0 - 1e-6, false);

        floor_ = resolution_floor(c_.params, s.grid);
        selected_ = select_eigenpairs(s, c_.selection, floor_);
        if (selected_.empty()) m_.warnings.push_back("no eigenpair matched the selection");

        double ortho = 0.0;
        for (std::size_t a : selected_)
            for (std::size_t b = 0; b < N; ++b) {
                if (a == b) continue;
                std::complex<double> ov{0.0, 0.0};
                for (std::size_t i = 0; i < s.grid.N; ++i) ov += std::conj(s.pairs[a].psi[i]) * s.pairs[b].psi[i];
                ortho = std::max(ortho, std::abs(ov) * s.grid.delta);
            }
        if (!selected_.empty()) check("orthonormality_selected", ortho, 1e-10);

        {
            CsvWriter w(path("eigenvalues.csv"),
                        {"index", "tau", "classification", "parity_overlap_re", "parity_overlap_im"});
            for (std::size_t k = 0; k < N; ++k) {
                const auto& p = s.pairs[k];
                w.cell((long long)k).cell(p.tau).cell(to_string(p.classification))
                    .cell(p.parity.real()).cell(p.parity.imag()).end_row();
            }
        }
        std::vector<std::string> header{"q"};
        for (auto k : selected_) {
            header.push_back("re_" + std::to_string(k));
            header.push_back("im_" + std::to_string(k));
        }
        CsvWriter w(path("eigenfunctions.csv"), header);
        for (std::size_t i = 0; i < s.grid.N; ++i) {
            w.cell(s.grid.points[i]);
            for (auto k : selected_) w.cell(s.pairs[k].psi[i].real()).cell(s.pairs[k].psi[i].imag());
            w.end_row();
        }
    }

    void evolve(bool with_arrival) {
        const auto& s = *spec_;
        const ArrivalSettings settings = c_.evolution.arrival_settings();
        for (std::size_t k : selected_) {
            const EigenPair& p = s.pairs[k];
            const std::string tag = std::to_string(k);
            ArrivalRun run = timed("evolve_" + tag, [&] {
                return evolve_eigenfunction(p, s.grid, c_.potential, c_.params, settings,
                                            c_.spectrum.arrival_point);
            });
            for (const auto& wmsg : run.series.warnings) m_.warnings.push_back("eigenpair " + tag + ": " + wmsg);
            if (run.series.times.empty()) {
                m_.warnings.push_back("eigenpair " + tag + ": " + run.failure);
                continue;
            }
            double drift = 0.0;
            for (double n : run.series.norm) drift = std::max(drift, std::fabs(n - 1.0));
            check("norm_conservation_" + tag, drift, 1e-10);
            {
                CsvWriter w(path("observables_" + tag + ".csv"), {"t", "mean_q", "var_q", "norm"});
                const auto& se = run.series;
                for (std::size_t i = 0; i < se.times.size(); ++i)
                    w.cell(se.times[i]).cell(se.mean_q[i]).cell(se.var_q[i]).cell(se.norm[i]).end_row();
            }
            {
                CsvWriter w(path("density_" + tag + ".csv"), {"t", "q", "density"});
                const auto& se = run.series;
                for (std::size_t j = 0; j < se.densities.size(); ++j)
                    for (std::size_t i = 0; i < s.grid.N; ++i)
                        w.cell(se.density_times[j]).cell(s.grid.points[i]).cell(se.densities[j][i]).end_row();
            }
            if (!with_arrival) continue;
            json a;
            a["index"] = k;
            a["tau"] = p.tau;
            a["classification"] = to_string(p.classification);
            auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
            if (run.report) {
                const auto& r = *run.report;
                a["t_cross"] = opt(r.t_cross);
                a["t_minvar"] = opt(r.t_minvar);
                a["min_var"] = r.min_var;
                a["rel_dev_cross"] = opt(r.rel_dev_cross);
                a["rel_dev_minvar"] = opt(r.rel_dev_minvar);
                a["t_coalesce"] = opt(r.t_coalesce);
                a["mean_q_at_tau"] = r.mean_q_at_tau;
                a["arrival_detected"] = true;
            } else {
                a["arrival_detected"] = false;
                a["failure"] = run.failure;
            }
            std::ofstream(path("arrival_" + tag + ".json")) << a.dump(2) << '\n';
        }
    }

    void diagnostics(bool conjugacy, bool parity) {
        json d;
        if (conjugacy) {
            const auto& T = factor();
            const auto& dc = c_.diagnostics;
            const ConjugacyReport r1 = timed("tke_residual", [&] { return tke_residual(T, dc.box, dc.h, dc.samples); });
            const ConjugacyReport r2 = timed("tke_residual_half", [&] { return tke_residual(T, dc.box, dc.h / 2, dc.samples); });
            d["tke"] = {{"h", r1.h},
                        {"residual_max", r1.residual_max},
                        {"residual_max_half_step", r2.residual_max},
                        {"richardson_ratio", r2.residual_max > 0 ? r1.residual_max / r2.residual_max : 0.0},
                        {"diagonal_error", r1.diagonal_error},
                        {"antidiagonal_error", r1.antidiagonal_error},
                        {"box", {dc.box.lo, dc.box.hi}},
                        {"samples", r1.samples}};
        }
        if (parity) {
            const double r = timed("parity_residual", [&] { return parity_kernel_residual(matrix()); });
            d["parity"] = {{"kernel_residual", r}, {"potential_even", c_.potential.is_even()}};
            if (c_.potential.is_even()) check("parity_kernel_residual", r, 1e-10);
            if (c_.diagnostics.reflected_check && !c_.potential.is_even()) {
                const ReflectedCheck rc = timed("reflected_check", [&] {
                    return reflected_potential_eigen_check(c_.potential, c_.scheme, c_.params, grid(),
                                                           c_.kernel, c_.spectrum);
                });
                d["reflected"] = {{"max_eigen_mismatch", rc.max_eigen_mismatch},
                                  {"max_relative_mismatch", rc.max_relative_mismatch},
                                  {"min_overlap", rc.min_overlap},
                                  {"max_abs_tau", rc.max_abs_tau}};
                check("reflected_eigenvalues", rc.max_eigen_mismatch, 1e-8);
                check("reflected_overlap", rc.min_overlap, 1.0 - 1e-6, false);
            }
        }
        std::ofstream(path("diagnostics.json")) << d.dump(2) << '\n';
    }

    void sweep() {
        SweepSetup s;
        s.base = c_.scheme;
        s.V = c_.potential;
        s.params = c_.params;
        s.grid = grid();
        s.kernel = c_.kernel;
        s.spectrum = c_.spectrum;
        s.arrival = c_.evolution.arrival_settings();
        s.arrival.density_snapshots = 0;
        s.arrival_point = c_.spectrum.arrival_point;
        s.target_tau = c_.sweep.target_tau.value_or(resolution_floor(c_.params, s.grid));
        s.target_class = c_.sweep.classification;
        const auto entries = timed("sweep", [&] { return deformation_sweep(s, c_.sweep.alphas); });

        CsvWriter w(path("sweep.csv"), {"alpha", "tau", "overlap", "tracking_lost", "t_minvar",
                                        "rel_dev_minvar", "t_cross", "min_var", "peak_position",
                                        "peak_density", "failure"});
        json arr = json::array();
        for (const auto& e : entries) {
            const double nan = std::nan("");
            const double tmin = e.report ? *e.report->t_minvar : nan;
            const double dev = e.report && e.report->rel_dev_minvar ? *e.report->rel_dev_minvar : nan;
            const double tc = e.report && e.report->t_cross ? *e.report->t_cross : nan;
            const double mv = e.report ? e.report->min_var : nan;
            w.cell(e.alpha).cell(e.tau).cell(e.overlap).cell(e.tracking_lost ? "true" : "false")
                .cell(tmin).cell(dev).cell(tc).cell(mv).cell(e.peak_position).cell(e.peak_density)
                .cell(e.failure.empty() ? "" : "\"" + e.failure + "\"").end_row();
            json je{{"alpha", e.alpha}, {"tau", e.tau}, {"overlap", e.overlap},
                    {"tracking_lost", e.tracking_lost}, {"peak_position", e.peak_position},
                    {"peak_density", e.peak_density}};
            je["t_minvar"] = e.report ? json(tmin) : json(nullptr);
            je["rel_dev_minvar"] = e.report ? json(dev) : json(nullptr);
            if (!e.failure.empty()) je["failure"] = e.failure;
            arr.push_back(je);
            if (e.tracking_lost) m_.warnings.push_back("eigenfunction tracking lost at alpha = " + format_double(e.alpha));
        }
        std::ofstream(path("sweep.json")) << arr.dump(2) << '\n';
    }

    const RunConfig& c_;
    fs::path dir_;
    std::ostream* log_;
    RunManifest& m_;
    std::optional<KernelFactor> factor_;
    std::optional<SpatialGrid> grid_;
    std::optional<OperatorMatrix> matrix_;
    std::optional<SpectralDecomposition> spec_;
    std::vector<std::size_t> selected_;
    double floor_ = 0.0;
};

}  // namespace

RunManifest run_pipeline(const RunConfig& config, Command command, const std::string& out_dir,
                         std::ostream* log) {
    RunManifest m;
    m.config = config.resolved;
    m.command = to_string(command);
    m.simd_backend = simd::active_name();
    const fs::path dir(out_dir);
    try {
        fs::create_directories(dir);
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = std::string("cannot create output directory: ") + e.what();
        m.exit_code = 1;
        return m;
    }
    try {
        Runner(config, dir, log, m).run(command);
    } catch (const ConfigError& e) {
        m.status = "failed";
        m.error = e.what();
        m.exit_code = 1;
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = e.what();
        m.exit_code = 2;
    }
    m.artifacts.push_back("manifest.json");
    std::ofstream(dir / "manifest.json") << m.to_json().dump(2) << '\n';
    return m;
}

}  // namespace toa
