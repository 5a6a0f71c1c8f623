#include "sps/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <numbers>
#include <thread>

#include "sps/bloch.hpp"
#include "sps/csv.hpp"
#include "sps/errors.hpp"
#include "sps/oracle.hpp"
#include "sps/physparams.hpp"
#include "sps/reservoir.hpp"
#include "sps/spectrum.hpp"

namespace sps {

namespace {

using Metadata = std::map<std::string, std::string>;

struct Context {
    const CommandRequest& request;
    const RunConfig& config;
    Engine engine;
    CommandOutcome outcome;
};

void emit(Context& ctx, const std::string& stem, const CsvTable& table, Metadata meta) {
    std::filesystem::create_directories(ctx.request.out_dir);
    const auto csv_path = ctx.request.out_dir / (stem + ".csv");
    write_text_file(csv_path, table.render());
    std::string columns;
    for (const auto& c : table.columns()) {
        columns += (columns.empty() ? "" : ",") + c;
    }
    meta["columns"] = columns;
    meta["rows"] = std::to_string(table.row_count());
    meta["subcommand"] = ctx.request.name;
    const auto meta_path = ctx.request.out_dir / (stem + ".meta");
    write_text_file(meta_path, render_key_values(meta));
    ctx.outcome.files.push_back(csv_path);
    ctx.outcome.files.push_back(meta_path);
}

void emit_report(Context& ctx, const std::string& stem, const Metadata& report) {
    std::filesystem::create_directories(ctx.request.out_dir);
    const auto path = ctx.request.out_dir / (stem + "_comparison.txt");
    write_text_file(path, render_key_values(report));
    ctx.outcome.files.push_back(path);
    if (report.at("status") != "pass") {
        ctx.outcome.exit_status = 1;
    }
}

Metadata rate_metadata(const RunConfig& config, const ReservoirRates& r, Engine engine) {
    Metadata m;
    m["engine"] = std::string(to_string(engine));
    m["mode"] = config.mode == RateMode::Physical ? "physical" : "direct";
    m["gamma1"] = format_number(r.gamma1);
    m["gamma2"] = format_number(r.gamma2);
    m["nbar"] = format_number(r.nbar);
    m["phi"] = format_number(r.phi);
    m["Gamma"] = format_number(r.gamma_rad);
    m["Omega"] = format_number(resolve_laser_rabi(config));
    return m;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    out.back() = hi;
    return out;
}

void require_physical(const BlochVector& s, const char* what) {
    if (!s.is_physical(1e-9)) {
        throw InvariantError(std::string(what) + ": Bloch vector left the Bloch ball");
    }
}

// ---- rates / squeezing -----------------------------------------------------

void run_rates(Context& ctx) {
    const auto rates = resolve_rates(ctx.config);
    auto meta = rate_metadata(ctx.config, rates, ctx.engine);
    double displacement = std::nan("");
    if (ctx.config.mode == RateMode::Physical) {
        const auto& p = ctx.config.physical;
        displacement = displacement_factor(p.bath);
        const double support = band_support(p.drive.detuning, p.bath);
        meta["band_support"] = format_number(support);
        meta["include_B"] = p.include_displacement ? "true" : "false";
        if (support < kBandSupportWarning) {
            ctx.outcome.warnings.push_back("detuning lies outside the phonon band (J/max J = " +
                                           format_number(support) + ")");
            meta["band_warning"] = "true";
        }
    }
    CsvTable table({"gamma1", "gamma2", "nbar", "phi", "Gamma", "gamma_s", "gamma_n", "gamma_m",
                    "displacement_factor"});
    const double row[] = {rates.gamma1,  rates.gamma2,  rates.nbar,    rates.phi,   rates.gamma_rad,
                          rates.gamma_s, rates.gamma_n, rates.gamma_m, displacement};
    table.add_numeric_row(row);
    emit(ctx, "rates", table, meta);
}

std::vector<std::string> squeezing_cells(const ReservoirRates& rates) {
    const auto d = map_to_squeezing(rates);
    double threshold = std::nan("");
    if (rates.gamma1 > 0.0 && rates.gamma2 > 0.0) {
        threshold = quantum_threshold(rates.gamma1, rates.gamma2);
    }
    return {std::string(to_string(d.regime)),
            format_number(d.gamma_eff),
            format_number(d.n_photons),
            format_number(d.m_abs),
            format_number(d.n_squeezed),
            format_number(d.n_background),
            format_number(d.correlation_gap),
            format_number(d.excess_correlation),
            d.quantum ? "true" : "false",
            format_number(threshold)};
}

void run_squeezing(Context& ctx) {
    const auto rates = resolve_rates(ctx.config);
    CsvTable table({"regime", "gamma_eff", "N", "M_abs", "Ns", "Nb", "correlation_gap",
                    "excess_correlation", "quantum", "threshold_nbar"});
    table.add_row(squeezing_cells(rates));
    emit(ctx, "squeezing", table, rate_metadata(ctx.config, rates, ctx.engine));
}

// ---- dynamics ----------------------------------------------------------------

BlochVector analytic_state(const ReservoirRates& rates, double omega, const BlochVector& s0,
                           double t) {
    if (omega == 0.0) {
        return free_evolution(s0, rates, t);
    }
    const auto sys = driven_system(rates, omega, phase_choice_from(rates.phi), true);
    return driven_evolution(sys, s0, t);
}

BlochVector analytic_steady(const ReservoirRates& rates, double omega, const BlochVector& s0) {
    if (omega > 0.0) {
        const auto sys = driven_system(rates, omega, phase_choice_from(rates.phi), true);
        return driven_steady_state(sys, s0);
    }
    const auto k = free_decay_rates(rates);
    const auto q = quadrature(s0, rates.phi);
    const BlochVector kept{k.gamma_phi == 0.0 ? q.s_phi : 0.0,
                           k.gamma_phi_perp == 0.0 ? q.s_phi_perp : 0.0, 0.0};
    const auto back = quadrature(kept, rates.phi);
    return {back.s_phi, back.s_phi_perp, k.gamma_z > 0.0 ? k.sz_steady : s0.sz};
}

BlochVector numeric_steady(const ReservoirRates& rates, double omega, const BlochVector& s0) {
    const auto L = oracle::build_liouvillian(rates, rates.gamma_rad, omega);
    const auto ss = oracle::steady_state(L, oracle::density_from_bloch(s0));
    return oracle::bloch_from_density(ss.rho);
}

double max_component_gap(const BlochVector& a, const BlochVector& b) {
    return std::max({std::abs(a.sx - b.sx), std::abs(a.sy - b.sy), std::abs(a.sz - b.sz)});
}

Metadata comparison(double deviation, double tolerance) {
    return {{"engines", "analytic,numeric"},
            {"sup_norm_deviation", format_number(deviation)},
            {"tolerance", format_number(tolerance)},
            {"status", deviation <= tolerance ? "pass" : "fail"}};
}

void run_decay(Context& ctx) {
    const auto rates = resolve_rates(ctx.config);
    const double omega = resolve_laser_rabi(ctx.config);
    const auto L = oracle::build_liouvillian(rates, rates.gamma_rad, omega);
    const double t_max = ctx.config.t_max ? *ctx.config.t_max : 10.0 / oracle::slowest_decay_rate(L);
    const auto times = linspace(0.0, t_max, ctx.config.t_points);
    const auto& s0 = ctx.config.initial;
    auto meta = rate_metadata(ctx.config, rates, ctx.engine);
    meta["t_max"] = format_number(t_max);
    meta["sx0"] = format_number(s0.sx);
    meta["sy0"] = format_number(s0.sy);
    meta["sz0"] = format_number(s0.sz);

    const std::vector<std::string> columns{"t", "sx", "sy", "sz"};
    std::vector<BlochVector> analytic;
    std::vector<BlochVector> numeric;
    if (ctx.engine != Engine::Numeric) {
        for (double t : times) {
            analytic.push_back(analytic_state(rates, omega, s0, t));
            require_physical(analytic.back(), "decay");
        }
    }
    if (ctx.engine != Engine::Analytic) {
        const auto traj = oracle::propagate(oracle::density_from_bloch(s0), L, times);
        for (const auto& rho : traj.rho) {
            numeric.push_back(oracle::bloch_from_density(rho));
        }
        meta["rk4_step"] = format_number(traj.step);
    }

    const auto table_of = [&](const std::vector<BlochVector>& states) {
        CsvTable table(columns);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double row[] = {times[k], states[k].sx, states[k].sy, states[k].sz};
            table.add_numeric_row(row);
        }
        return table;
    };
    if (ctx.engine == Engine::Numeric) {
        emit(ctx, "decay", table_of(numeric), meta);
        return;
    }
    emit(ctx, "decay", table_of(analytic), meta);
    if (ctx.engine == Engine::Both) {
        auto numeric_meta = meta;
        numeric_meta["engine"] = "numeric";
        emit(ctx, "decay_numeric", table_of(numeric), numeric_meta);
        double gap = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            gap = std::max(gap, max_component_gap(analytic[k], numeric[k]));
        }
        emit_report(ctx, "decay", comparison(gap, kDynamicsAgreementTol));
    }
}

void add_steady_row(CsvTable& table, const BlochVector& s) {
    const auto dressed = dressed_populations(s);
    const double row[] = {s.sx, s.sy, s.sz, dressed.plus, dressed.minus};
    table.add_numeric_row(row);
}

void run_steady(Context& ctx) {
    const auto rates = resolve_rates(ctx.config);
    const double omega = resolve_laser_rabi(ctx.config);
    const auto& s0 = ctx.config.initial;
    auto meta = rate_metadata(ctx.config, rates, ctx.engine);
    meta["sx0"] = format_number(s0.sx);
    meta["sy0"] = format_number(s0.sy);
    meta["sz0"] = format_number(s0.sz);
    const std::vector<std::string> columns{"sx", "sy", "sz", "rho_plus", "rho_minus"};

    std::optional<BlochVector> analytic;
    std::optional<BlochVector> numeric;
    if (ctx.engine != Engine::Numeric) {
        analytic = analytic_steady(rates, omega, s0);
        require_physical(*analytic, "steady");
    }
    if (ctx.engine != Engine::Analytic) {
        numeric = numeric_steady(rates, omega, s0);
        require_physical(*numeric, "steady");
    }
    CsvTable primary(columns);
    add_steady_row(primary, analytic ? *analytic : *numeric);
    emit(ctx, "steady", primary, meta);
    if (ctx.engine == Engine::Both) {
        CsvTable other(columns);
        add_steady_row(other, *numeric);
        auto numeric_meta = meta;
        numeric_meta["engine"] = "numeric";
        emit(ctx, "steady_numeric", other, numeric_meta);
        emit_report(ctx, "steady",
                    comparison(max_component_gap(*analytic, *numeric), kDynamicsAgreementTol));
    }
}

// ---- spectrum ----------------------------------------------------------------

std::vector<double> spectrum_grid(const RunConfig& config, double omega) {
    if (!config.omega_min || !config.omega_max) {
        if (!(omega > 0.0)) {
            throw ConfigError(0, "spectrum with Omega = 0 needs run.omega_min and run.omega_max");
        }
    }
    const double lo = config.omega_min ? *config.omega_min : -2.0 * omega;
    const double hi = config.omega_max ? *config.omega_max : 2.0 * omega;
    return linspace(lo, hi, config.omega_points);
}

CsvTable spectrum_table(const SpectrumResult& s) {
    CsvTable table({"delta_omega", "S_in"});
    for (std::size_t k = 0; k < s.omega_grid.size(); ++k) {
        const double row[] = {s.omega_grid[k], s.incoherent[k]};
        table.add_numeric_row(row);
    }
    return table;
}

Metadata spectrum_metadata(const Metadata& base, const SpectrumResult& s) {
    Metadata m = base;
    for (const auto& [k, v] : s.metadata) {
        m["spectrum." + k] = v;
    }
    m["engine"] = s.engine;
    m["coherent_weight"] = format_number(s.coherent_weight);
    m["central_delta_weight"] = format_number(s.central_delta_weight);
    return m;
}

void check_spectrum(const SpectrumResult& s, double tolerance) {
    const double floor = -tolerance * std::max(1.0, s.peak());
    for (double v : s.incoherent) {
        if (!(v >= floor)) {
            throw InvariantError("spectrum (" + s.engine + ") is negative: " + format_number(v));
        }
    }
}

void run_spectrum(Context& ctx) {
    const auto rates = resolve_rates(ctx.config);
    const double omega = resolve_laser_rabi(ctx.config);
    const double sx0 = ctx.config.initial.sx;
    const auto grid = spectrum_grid(ctx.config, omega);
    auto base = rate_metadata(ctx.config, rates, ctx.engine);
    base["sx0"] = format_number(sx0);

    std::optional<SpectrumResult> analytic;
    std::optional<SpectrumResult> numeric;
    if (ctx.engine != Engine::Numeric) {
        const auto phase = phase_choice_from(rates.phi);
        analytic = ctx.config.spectrum_model == SpectrumModel::Exact
                       ? exact_incoherent_spectrum(rates, omega, phase, sx0, grid)
                       : strong_field_spectrum(rates, omega, phase, sx0, grid);
        if (ctx.config.spectrum_model == SpectrumModel::Exact) {
            check_spectrum(*analytic, 1e-10);
        }
    }
    if (ctx.engine != Engine::Analytic) {
        numeric = oracle::numeric_fluorescence(rates, omega, sx0, grid).spectrum;
        check_spectrum(*numeric, kSpectrumAgreementTol);
        if (const auto it = numeric->metadata.find("truncation_warning");
            it != numeric->metadata.end()) {
            ctx.outcome.warnings.push_back("numeric spectrum: " + it->second);
        }
    }
    const auto& primary = analytic ? *analytic : *numeric;
    emit(ctx, "spectrum", spectrum_table(primary), spectrum_metadata(base, primary));
    if (ctx.engine == Engine::Both) {
        emit(ctx, "spectrum_numeric", spectrum_table(*numeric), spectrum_metadata(base, *numeric));
        auto report = comparison(relative_sup_distance(*numeric, *analytic), kSpectrumAgreementTol);
        const double weight_gap =
            std::max(std::abs(numeric->coherent_weight - analytic->coherent_weight),
                     std::abs(numeric->central_delta_weight - analytic->central_delta_weight));
        report["weight_deviation"] = format_number(weight_gap);
        if (weight_gap > kSpectrumAgreementTol) {
            report["status"] = "fail";
        }
        emit_report(ctx, "spectrum", report);
    }
}

// ---- sweep -------------------------------------------------------------------

struct SweepRow {
    std::vector<std::string> cells;
    double engine_gap{0.0};
};

SweepRow sweep_point(const RunConfig& base, Engine engine, const std::string& key, double value,
                     std::size_t index) {
    RunConfig config = base;
    apply_numeric_override(config, key, value);
    const auto rates = resolve_rates(config);
    const double omega = resolve_laser_rabi(config);
    const auto& s0 = config.initial;
    const auto d = map_to_squeezing(rates);
    SweepRow row;
    BlochVector s;
    if (engine == Engine::Numeric) {
        s = numeric_steady(rates, omega, s0);
    } else {
        s = analytic_steady(rates, omega, s0);
        if (engine == Engine::Both) {
            row.engine_gap = max_component_gap(s, numeric_steady(rates, omega, s0));
        }
    }
    require_physical(s, "sweep");
    row.cells = {std::to_string(index),
                 format_number(value),
                 format_number(rates.gamma_s),
                 format_number(rates.gamma_n),
                 format_number(rates.gamma_m),
                 format_number(d.n_photons),
                 format_number(d.m_abs),
                 format_number(d.n_squeezed),
                 format_number(d.n_background),
                 format_number(s.sx),
                 format_number(s.sy),
                 format_number(s.sz)};
    return row;
}

void run_sweep(Context& ctx) {
    if (!ctx.config.sweep) {
        throw ConfigError(0, "sweep needs run.sweep_key and sweep values");
    }
    const auto& spec = *ctx.config.sweep;
    const std::size_t n = spec.values.size();
    std::vector<SweepRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                rows[i] = sweep_point(ctx.config, ctx.engine, spec.key, spec.values[i], i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads =
        std::min<unsigned>(sweep_thread_count(ctx.request.max_threads), static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    CsvTable table({"index", spec.key, "gamma_s", "gamma_n", "gamma_m", "N", "M_abs", "Ns", "Nb",
                    "sx", "sy", "sz"});
    double gap = 0.0;
    for (auto& row : rows) {
        gap = std::max(gap, row.engine_gap);
        table.add_row(std::move(row.cells));
    }
    Metadata meta{{"engine", std::string(to_string(ctx.engine))},
                  {"sweep_key", spec.key},
                  {"points", std::to_string(n)}};
    emit(ctx, "sweep", table, meta);
    if (ctx.engine == Engine::Both) {
        emit_report(ctx, "sweep", comparison(gap, kDynamicsAgreementTol));
    }
}

// ---- figures -----------------------------------------------------------------

Metadata axis_metadata(const RunConfig& c) {
    return {{"nbar_min", format_number(c.nbar_axis.lo)},
            {"nbar_max", format_number(c.nbar_axis.hi)},
            {"nbar_points", std::to_string(c.nbar_axis.count)},
            {"ratio_min", format_number(c.ratio_axis.lo)},
            {"ratio_max", format_number(c.ratio_axis.hi)},
            {"ratio_points", std::to_string(c.ratio_axis.count)},
            {"ratio_axis_includes_min", c.ratio_axis.include_lower ? "true" : "false"}};
}

void run_surface(Context& ctx, const std::string& name, const std::string& value_column,
                 const std::vector<SurfacePoint>& points) {
    CsvTable table({"nbar", "ratio", "value"});
    for (const auto& p : points) {
        const double row[] = {p.nbar, p.ratio, p.value};
        table.add_numeric_row(row);
    }
    auto meta = axis_metadata(ctx.config);
    meta["figure"] = name;
    meta["value"] = value_column;
    meta["gamma1"] = "1";
    emit(ctx, name, table, meta);
}

void run_figure5(Context& ctx) {
    const auto& c = ctx.config;
    if (c.mode != RateMode::Direct) {
        throw ConfigError(0, "fig5 needs a [rates] section");
    }
    const auto& d = c.direct;
    if (d.gamma1 != d.gamma2 || !(d.gamma1 > 0.0)) {
        throw ConfigError(0, "fig5 needs gamma1 = gamma2 > 0");
    }
    if (phase_choice_from(d.phi) != PhaseChoice::PhiHalfPi) {
        throw ConfigError(0, "fig5 needs phi = pi/2");
    }
    if (d.gamma_rad != 0.0) {
        throw ConfigError(0, "fig5 is defined for Gamma = 0");
    }
    Figure5Options options;
    options.gamma0 = d.gamma1;
    options.nbar = d.nbar;
    options.omega = d.omega;
    options.render_central_delta = c.render_central_delta;
    const auto delta = spectrum_grid(c, d.omega);
    const auto sx0 = default_sx0_axis(c.sx0_points);
    const auto rows = figure5_dataset(sx0, delta, options);

    CsvTable table({"sx0", "delta_omega", "S_in"});
    for (const auto& r : rows) {
        const double row[] = {r.sx0, r.delta, r.s_in};
        table.add_numeric_row(row);
    }
    Metadata meta{{"figure", "fig5"},
                  {"gamma0", format_number(options.gamma0)},
                  {"nbar", format_number(options.nbar)},
                  {"Omega", format_number(options.omega)},
                  {"phi", format_number(0.5 * std::numbers::pi)},
                  {"render_delta", options.render_central_delta ? "true" : "false"},
                  {"sx0_points", std::to_string(sx0.size())},
                  {"omega_points", std::to_string(delta.size())}};
    emit(ctx, "fig5", table, meta);
}

void run_figure(Context& ctx) {
    if (!ctx.request.figure) {
        throw ConfigError(0, "figure needs one of fig3, fig4, fig5");
    }
    const auto& which = *ctx.request.figure;
    if (which == "fig3") {
        run_surface(ctx, "fig3", "M_over_N",
                    figure3_dataset(ctx.config.nbar_axis, ctx.config.ratio_axis));
    } else if (which == "fig4") {
        run_surface(ctx, "fig4", "Nb_over_M_minus_Ns",
                    figure4_dataset(ctx.config.nbar_axis, ctx.config.ratio_axis));
    } else if (which == "fig5") {
        run_figure5(ctx);
    } else {
        throw ConfigError(0, "unknown figure '" + which + "' (expected fig3, fig4 or fig5)");
    }
}

} // namespace

unsigned sweep_thread_count(unsigned requested) {
    unsigned count = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPS_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) {
            count = std::min(count, static_cast<unsigned>(cap));
        }
    }
    if (requested > 0) {
        count = std::min(count, requested);
    }
    return count;
}

CommandOutcome run_subcommand(const CommandRequest& request, const RunConfig& config) {
    Context ctx{request, config, request.engine ? *request.engine : config.engine, {}};
    const auto& name = request.name;
    if (name == "rates") {
        run_rates(ctx);
    } else if (name == "squeezing") {
        run_squeezing(ctx);
    } else if (name == "decay") {
        run_decay(ctx);
    } else if (name == "steady") {
        run_steady(ctx);
    } else if (name == "spectrum") {
        run_spectrum(ctx);
    } else if (name == "sweep") {
        run_sweep(ctx);
    } else if (name == "figure") {
        run_figure(ctx);
    } else {
        throw ConfigError(0, "unknown subcommand '" + name + "'");
    }
    return std::move(ctx.outcome);
}

} // namespace sps
