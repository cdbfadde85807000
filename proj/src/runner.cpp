#include "casimir/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <json.hpp>

#include "casimir/cache.hpp"
#include "casimir/csv.hpp"
#include "casimir/perturbation.hpp"

#ifndef CASIMIR_HO_BUILD_ID
#define CASIMIR_HO_BUILD_ID "unknown"
#endif

namespace casimir {

namespace fs = std::filesystem;
using nlohmann::json;

std::string build_id() { return CASIMIR_HO_BUILD_ID; }

namespace {

void write_sidecar(const std::string& csv_path, const RunConfig& cfg, const json& extra) {
    json j = json::parse(config_to_json(cfg));
    j["build_id"] = build_id();
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::ofstream out(csv_path + ".meta.json");
    out << j.dump(2) << '\n';
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / static_cast<double>(n - 1);
    return g;
}

struct Resonance {
    std::string name;
    double omega;         // nominal crossing position
    int phonons;          // diabatic partner |0, 0, q_b>
    double window_half;   // zoom half-width
};

std::vector<Resonance> resonances_of(const ThreeBodyGeometry& g) {
    const double w1 = g.omega1;
    return {{"first", 2.0 * w1, 1, 0.12 * w1},
            {"second", w1, 2, 0.06 * w1},
            {"third", 2.0 * w1 / 3.0, 3, 0.05 * w1}};
}

} // namespace

std::vector<GapTableRow> run_spectrum(const RunConfig& cfg, const std::string& out_dir,
                                      std::ostream& log) {
    const auto* tb = std::get_if<ThreeBodyGeometry>(&cfg.model.geometry);
    if (!tb) throw ConfigError("spectrum command requires the three_body geometry");
    const auto truncs = cfg.effective_truncations();
    const int workers = worker_count_from_env();
    fs::create_directories(out_dir);

    const auto grid = linspace(cfg.sweep_omega_min, cfg.sweep_omega_max, cfg.sweep_points);
    const double w2 = tb->omega2;

    struct OrderCase {
        OrderSet orders;
        std::string tag;
    };
    const std::vector<OrderCase> cases = {{OrderSet::first_only(), "1"}, {OrderSet::all(), "123"}};

    for (const auto& oc : cases) {
        const SpectrumSweep sweep =
            sweep_spectrum(cfg.model, truncs, grid, cfg.n_levels, oc.orders, workers);
        const std::string path =
            (fs::path(out_dir) / ("spectrum_orders_" + oc.tag + ".csv")).string();
        std::vector<std::string> header{"omega"};
        for (int k = 0; k < cfg.n_levels; ++k) header.push_back("level" + std::to_string(k));
        CsvWriter csv(path, header);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<double> row{grid[i] / w2};
            for (int k = 0; k < cfg.n_levels; ++k)
                row.push_back(sweep.levels(static_cast<long>(i), k) / w2);
            csv.row(row);
        }
        csv.close();
        write_sidecar(path, cfg,
                      {{"orders", oc.tag}, {"max_level_slope", sweep.max_level_slope}});
        log << "wrote " << path << "\n";
    }

    // Gap table at the three resonances, tracked through the diabatic pair
    // |2,0,0> <-> |0,0,q_b| (sorted-adjacent tracking misreads the gap when a
    // spectator level sits inside the split).
    std::vector<GapTableRow> table;
    log << "avoided-crossing gaps (omega in units of omega2):\n";
    for (const auto& res : resonances_of(*tb)) {
        const auto zoom =
            linspace(res.omega - res.window_half, res.omega + res.window_half, cfg.zoom_points);
        for (const auto& oc : cases) {
            const GapResult gr = diabatic_pair_gap(cfg.model, truncs, zoom, {2, 0, 0},
                                                   {0, 0, res.phonons}, oc.orders, workers);
            table.push_back({res.name, oc.tag, gr.gap, gr.omega_at_min});
            log << "  " << res.name << " orders={" << oc.tag << "}: gap = " << format_sig12(gr.gap / w2)
                << " at omega = " << format_sig12(gr.omega_at_min / w2) << "\n";
        }
    }
    return table;
}

std::vector<TrajectoryRecord> run_dynamics(const RunConfig& cfg, const std::string& out_dir,
                                           std::ostream& log) {
    const auto* tb = std::get_if<ThreeBodyGeometry>(&cfg.model.geometry);
    if (!tb) throw ConfigError("dynamics command requires the three_body geometry");
    const auto truncs = cfg.effective_truncations();
    fs::create_directories(out_dir);

    const HilbertSpace space = default_space(cfg.model, truncs);
    const std::uint64_t fp = fingerprint_model(cfg.model, truncs);

    EigenDecomposition eig;
    bool from_cache = false;
    if (const auto dir = cache_dir_from_env()) {
        if (auto cached = load_eig(*dir, fp)) {
            eig = std::move(*cached);
            from_cache = true;
        }
    }
    if (!from_cache) {
        eig = diagonalize(build_hamiltonian(space, cfg.model), fp);
        if (const auto dir = cache_dir_from_env()) cache_eig(*dir, fp, eig);
    }

    const double floor = cfg.coeff_floor;
    const auto t_a1 = dressed_transition_table(eig, ladder_operator(space, 0, Ladder::Lower), floor, -1.0, 0);
    const auto t_a2 = dressed_transition_table(eig, ladder_operator(space, 1, Ladder::Lower), floor, -1.0, 1);
    const auto t_b = dressed_transition_table(eig, ladder_operator(space, 2, Ladder::Lower), floor, -1.0, 2);

    BathSpec cavity{BathTarget::Cavity, cfg.T_c, cfg.kappa, {0, 1}};
    BathSpec wall{BathTarget::Wall, cfg.T_w, cfg.gamma, {2}};
    AssemblyOptions aopts;
    aopts.filter.delta = cfg.filter_delta;
    aopts.energy_window = cfg.resolved_energy_window();
    const Liouvillian L =
        build_liouvillian(eig, {{cavity, {t_a1, t_a2}}, {wall, {t_b}}}, aopts);
    log << "dissipator terms: " << L.term_count() << "\n";

    std::vector<int> occ = cfg.initial_occupation;
    if (occ.empty()) occ.assign(static_cast<std::size_t>(space.n_modes()), 0);
    const Eigen::MatrixXcd rho0 = bare_state_density(eig, space, occ);

    PopulationOps pops(eig, space, {t_a1, t_a2}, t_b, cfg.population_convention);
    const RecordFn recorder = make_record_evaluator(L, pops, cfg.kappa0);

    EvolveOptions eopts;
    eopts.t_max = cfg.t_max_kappa0 / cfg.kappa0;
    eopts.dt = cfg.dt;
    eopts.record_every = cfg.record_every;
    eopts.frame = cfg.frame;
    if (cfg.stop_at_steady_state) eopts.steady_tol = cfg.steady_tol;

    const std::string path = (fs::path(out_dir) / "trajectory.csv").string();
    EvolveResult result;
    try {
        result = evolve(L, rho0, eopts, recorder);
    } catch (const NumericalAbortError& e) {
        log << "numerical abort at t*kappa0 = " << e.last_good_time * cfg.kappa0 << ": " << e.what()
            << "\n";
        throw;
    }

    CsvWriter csv(path, {"t_kappa0", "n_wall", "n_mode1", "n_mode2", "J_w", "J_c", "S",
                         "Sigma_dot", "trace", "min_eig"});
    for (const auto& r : result.records)
        csv.row({r.t_kappa0, r.n_wall, r.n_mode1, r.n_mode2, r.J_w, r.J_c, r.S, r.Sigma_dot,
                 r.trace, r.min_eig});
    csv.close();

    json extra;
    extra["eig_fingerprint"] = fp;
    extra["eig_from_cache"] = from_cache;
    extra["initial_occupation"] = occ;
    extra["dt_used"] = result.dt_used;
    extra["steady_reached"] = result.steady_reached;
    extra["final_residual"] = result.final_residual;
    extra["t_final_kappa0"] = result.t_final * cfg.kappa0;
    write_sidecar(path, cfg, extra);
    log << "wrote " << path << " (" << result.records.size() << " records)\n";
    return result.records;
}

void run_perturbation(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const auto truncs = cfg.effective_truncations();
    fs::create_directories(out_dir);

    HamiltonianModel h0_model = cfg.model;
    const HilbertSpace space = default_space(cfg.model, truncs);
    const auto eig0 = diagonalize(interaction_term(space, cfg.model, 0),
                                  fingerprint_model(h0_model, truncs));
    const auto H1 = interaction_term(space, cfg.model, 1);
    const auto H2 = interaction_term(space, cfg.model, 2);
    const auto H3 = interaction_term(space, cfg.model, 3);
    const double ddeg = default_delta_deg(cfg.model);

    const std::string path = (fs::path(out_dir) / "perturbation.csv").string();
    CsvWriter csv(path, {"n", "E0", "E1", "E2", "E3", "C"});
    for (int n : cfg.pt_levels) {
        const auto en = perturbative_energy(eig0, H1, H2, H3, n, cfg.pt_max_order, ddeg);
        const auto st = perturbative_state(eig0, H1, H2, n, std::min(cfg.pt_max_order, 2), ddeg,
                                           cfg.model.epsilon);
        csv.row({static_cast<double>(n), en.E0, en.E1, en.E2,
                 cfg.pt_max_order >= 3 ? en.E3 : 0.0, st.normalization});
    }
    csv.close();
    write_sidecar(path, cfg, {{"delta_deg", ddeg}});

    if (!std::holds_alternative<ThreeBodyGeometry>(cfg.model.geometry)) {
        const auto cf = vacuum_closed_forms(cfg.model);
        log << "closed-form vacuum corrections at the geometry cutoff:\n"
            << "  amp(|0,..,0,1_b>) = " << format_sig12(cf.amp_single_phonon) << "\n"
            << "  E0^(2)            = " << format_sig12(cf.energy_second_order) << "\n";
    }
    log << "wrote " << path << "\n";
}

CouplingBreakdown run_coupling(const RunConfig& cfg, std::ostream& log) {
    const auto* tb = std::get_if<ThreeBodyGeometry>(&cfg.model.geometry);
    if (!tb) throw ConfigError("coupling command requires the three_body geometry");
    const auto c = effective_scattering_coupling(tb->omega1, tb->omega2, tb->Omega);
    log << "effective two-phonon-two-photon coupling (omega1 = " << tb->omega1
        << ", omega2 = " << tb->omega2 << ", Omega = " << tb->Omega << "):\n"
        << "  g_total          = " << format_sig12(c.g_total) << "\n"
        << "  g_virtual        = " << format_sig12(c.g_virtual) << "\n"
        << "  g_H2             = " << format_sig12(c.g_H2) << "\n"
        << "  virtual_fraction = " << format_sig12(c.virtual_fraction) << "\n";
    return c;
}

ConvergenceReport convergence_check(
    const std::function<double(const std::vector<int>&)>& observable,
    const std::vector<int>& truncations, double threshold) {
    ConvergenceReport rep;
    rep.value = observable(truncations);
    std::vector<int> bumped = truncations;
    for (int& t : bumped) t += 2;
    rep.value_refined = observable(bumped);
    const double denom = std::max(std::abs(rep.value_refined), 1e-300);
    rep.relative_change = std::abs(rep.value - rep.value_refined) / denom;
    rep.converged = rep.relative_change < threshold;
    return rep;
}

} // namespace casimir
