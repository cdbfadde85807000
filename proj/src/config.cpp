#include "casimir/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace casimir {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

double get_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(key, "expected a number");
    return j.at(key).get<double>();
}

long get_int(const json& j, const std::string& key, long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) fail(key, "expected an integer");
    return j.at(key).get<long>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) fail(key, "expected a boolean");
    return j.at(key).get<bool>();
}

std::vector<int> get_int_list(const json& j, const std::string& key) {
    std::vector<int> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) fail(key, "expected an array of integers");
    for (const auto& v : j.at(key)) {
        if (!v.is_number_integer()) fail(key, "expected an array of integers");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

std::vector<int> RunConfig::effective_truncations() const {
    if (!truncations.empty()) return truncations;
    if (std::holds_alternative<ThreeBodyGeometry>(model.geometry)) {
        if (command == Command::Dynamics) return {6, 4, 10};
        return {8, 5, 12};
    }
    // multimode defaults: modest per-mode truncations
    int n_optical = 0;
    if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        n_optical = od->n_max;
    } else {
        const auto& td = std::get<ThreeDGeometry>(model.geometry);
        n_optical = td.nx_max * td.ny_max * td.nz_max;
    }
    std::vector<int> t(static_cast<std::size_t>(n_optical), 4);
    t.push_back(4);
    return t;
}

double RunConfig::resolved_energy_window() const {
    if (energy_window > 0.0) return energy_window;
    if (energy_window == 0.0) return std::numeric_limits<double>::infinity();
    const double t_hot = std::max(T_c, T_w);
    if (t_hot <= 0.0) return std::numeric_limits<double>::infinity();
    return t_hot * std::log(1e12);
}

void RunConfig::resolve_resonance() {
    if (!resonance) return;
    const auto* tb = std::get_if<ThreeBodyGeometry>(&model.geometry);
    if (!tb) fail("resonance", "only meaningful for the three_body geometry");
    const double w1 = tb->omega1;
    double Om;
    if (*resonance == "first")
        Om = 2.0 * w1;
    else if (*resonance == "second")
        Om = w1;
    else if (*resonance == "third")
        Om = 2.0 * w1 / 3.0;
    else
        fail("resonance", "expected \"first\", \"second\" or \"third\"");
    model.set_mechanical_frequency(Om);
}

RunConfig default_config(Command command) {
    RunConfig cfg;
    cfg.command = command;
    return cfg;
}

RunConfig parse_config_text(const std::string& text, Command command, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": JSON parse error at line " +
                          std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be a JSON object");

    RunConfig cfg = default_config(command);

    if (j.contains("model")) {
        const json& m = j.at("model");
        if (!m.is_object()) fail("model", "expected an object");
        const std::string geom = m.value("geometry", std::string("three_body"));
        if (geom == "three_body") {
            ThreeBodyGeometry g;
            g.omega1 = get_num(m, "omega1", 0.5);
            g.omega2 = get_num(m, "omega2", 1.0);
            g.Omega = get_num(m, "Omega", 1.0);
            cfg.model.geometry = g;
        } else if (geom == "one_d") {
            OneDGeometry g;
            g.length = get_num(m, "length", M_PI);
            g.n_max = static_cast<int>(get_int(m, "n_max", 1));
            g.Omega = get_num(m, "Omega", 1.0);
            cfg.model.geometry = g;
        } else if (geom == "three_d") {
            ThreeDGeometry g;
            g.Lx = get_num(m, "Lx", 1.0);
            g.Ly = get_num(m, "Ly", 1.0);
            g.Lz = get_num(m, "Lz", 1.0);
            g.nx_max = static_cast<int>(get_int(m, "nx_max", 1));
            g.ny_max = static_cast<int>(get_int(m, "ny_max", 1));
            g.nz_max = static_cast<int>(get_int(m, "nz_max", 1));
            g.Omega = get_num(m, "Omega", 1.0);
            cfg.model.geometry = g;
        } else {
            fail("model.geometry", "expected three_body, one_d or three_d");
        }
        cfg.model.epsilon = get_num(m, "epsilon", 0.07);
        if (m.contains("include_orders"))
            cfg.model.include_orders = OrderSet::from_list(get_int_list(m, "include_orders"));
        if (m.contains("resonance")) {
            if (!m.at("resonance").is_string()) fail("model.resonance", "expected a string");
            cfg.resonance = m.at("resonance").get<std::string>();
        }
    }

    cfg.truncations = get_int_list(j, "truncations");

    if (j.contains("baths")) {
        const json& b = j.at("baths");
        cfg.kappa = get_num(b, "kappa", cfg.kappa);
        cfg.gamma = get_num(b, "gamma", cfg.gamma);
        cfg.T_c = get_num(b, "T_c", cfg.T_c);
        cfg.T_w = get_num(b, "T_w", cfg.T_w);
    }
    cfg.filter_delta = get_num(j, "filter_delta", cfg.filter_delta);
    cfg.kappa0 = get_num(j, "kappa0", cfg.kappa0);

    if (j.contains("dissipator")) {
        const json& dx = j.at("dissipator");
        cfg.coeff_floor = get_num(dx, "coeff_floor", cfg.coeff_floor);
        if (dx.contains("energy_window")) {
            if (dx.at("energy_window").is_string()) {
                const auto s = dx.at("energy_window").get<std::string>();
                if (s == "auto")
                    cfg.energy_window = -1.0;
                else if (s == "off")
                    cfg.energy_window = 0.0;
                else
                    fail("dissipator.energy_window", "expected \"auto\", \"off\" or a number");
            } else {
                cfg.energy_window = get_num(dx, "energy_window", -1.0);
            }
        }
    }

    if (j.contains("integration")) {
        const json& it = j.at("integration");
        cfg.t_max_kappa0 = get_num(it, "t_max_kappa0", cfg.t_max_kappa0);
        cfg.dt = get_num(it, "dt", cfg.dt);
        cfg.record_every = get_int(it, "record_every", cfg.record_every);
        const std::string fr = it.value("frame", std::string("interaction"));
        if (fr == "interaction")
            cfg.frame = Frame::Interaction;
        else if (fr == "lab")
            cfg.frame = Frame::Lab;
        else
            fail("integration.frame", "expected \"interaction\" or \"lab\"");
        cfg.stop_at_steady_state = get_bool(it, "stop_at_steady_state", cfg.stop_at_steady_state);
        cfg.steady_tol = get_num(it, "steady_tol", cfg.steady_tol);
    }

    if (j.contains("population_convention")) {
        const auto s = j.at("population_convention").get<std::string>();
        if (s == "bare")
            cfg.population_convention = PopulationConvention::Bare;
        else if (s == "dressed")
            cfg.population_convention = PopulationConvention::Dressed;
        else
            fail("population_convention", "expected \"bare\" or \"dressed\"");
    }
    cfg.initial_occupation = get_int_list(j, "initial_occupation");

    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        cfg.sweep_omega_min = get_num(s, "omega_min", cfg.sweep_omega_min);
        cfg.sweep_omega_max = get_num(s, "omega_max", cfg.sweep_omega_max);
        cfg.sweep_points = static_cast<int>(get_int(s, "points", cfg.sweep_points));
        cfg.n_levels = static_cast<int>(get_int(s, "n_levels", cfg.n_levels));
        cfg.zoom_points = static_cast<int>(get_int(s, "zoom_points", cfg.zoom_points));
    }

    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        if (p.contains("levels")) cfg.pt_levels = get_int_list(p, "levels");
        cfg.pt_max_order = static_cast<int>(get_int(p, "max_order", cfg.pt_max_order));
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("path")) cfg.output_dir = o.at("path").get<std::string>();
    }

    // validation
    try {
        cfg.model.validate();
    } catch (const Error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (cfg.kappa <= 0 || cfg.gamma <= 0) throw ConfigError("bath rates must be > 0");
    if (cfg.T_c < 0 || cfg.T_w < 0) throw ConfigError("bath temperatures must be >= 0");
    if (cfg.filter_delta <= 0) throw ConfigError("filter_delta must be > 0");
    if (cfg.kappa0 <= 0) throw ConfigError("kappa0 must be > 0");
    if (cfg.sweep_points < 2) throw ConfigError("spectrum.points must be >= 2");
    if (cfg.pt_max_order < 1 || cfg.pt_max_order > 3)
        throw ConfigError("perturbation.max_order must be 1..3");
    for (int t : cfg.truncations)
        if (t < 2) throw ConfigError("truncations must all be >= 2");
    cfg.resolve_resonance();
    return cfg;
}

RunConfig parse_config_file(const std::string& path, Command command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), command, path);
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    switch (cfg.command) {
        case Command::Spectrum: j["command"] = "spectrum"; break;
        case Command::Dynamics: j["command"] = "dynamics"; break;
        case Command::Perturbation: j["command"] = "perturbation"; break;
        case Command::Coupling: j["command"] = "coupling"; break;
    }
    json m;
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, ThreeBodyGeometry>) {
                m["geometry"] = "three_body";
                m["omega1"] = g.omega1;
                m["omega2"] = g.omega2;
                m["Omega"] = g.Omega;
            } else if constexpr (std::is_same_v<G, OneDGeometry>) {
                m["geometry"] = "one_d";
                m["length"] = g.length;
                m["n_max"] = g.n_max;
                m["Omega"] = g.Omega;
            } else {
                m["geometry"] = "three_d";
                m["Lx"] = g.Lx;
                m["Ly"] = g.Ly;
                m["Lz"] = g.Lz;
                m["nx_max"] = g.nx_max;
                m["ny_max"] = g.ny_max;
                m["nz_max"] = g.nz_max;
                m["Omega"] = g.Omega;
            }
        },
        cfg.model.geometry);
    m["epsilon"] = cfg.model.epsilon;
    m["include_orders"] = cfg.model.include_orders.as_list();
    j["model"] = m;
    j["truncations"] = cfg.effective_truncations();
    j["baths"] = {{"kappa", cfg.kappa}, {"gamma", cfg.gamma}, {"T_c", cfg.T_c}, {"T_w", cfg.T_w}};
    j["filter_delta"] = cfg.filter_delta;
    j["kappa0"] = cfg.kappa0;
    j["dissipator"] = {{"coeff_floor", cfg.coeff_floor},
                       {"energy_window", cfg.resolved_energy_window()}};
    j["integration"] = {{"t_max_kappa0", cfg.t_max_kappa0},
                        {"dt", cfg.dt},
                        {"record_every", cfg.record_every},
                        {"frame", cfg.frame == Frame::Interaction ? "interaction" : "lab"},
                        {"stop_at_steady_state", cfg.stop_at_steady_state},
                        {"steady_tol", cfg.steady_tol}};
    j["population_convention"] =
        cfg.population_convention == PopulationConvention::Bare ? "bare" : "dressed";
    j["initial_occupation"] = cfg.initial_occupation;
    return j.dump(2);
}

int worker_count_from_env() {
    if (const char* env = std::getenv("CASIMIR_HO_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

std::optional<std::string> cache_dir_from_env() {
    if (const char* env = std::getenv("CASIMIR_HO_CACHE_DIR")) {
        if (*env) return std::string(env);
    }
    return std::nullopt;
}

} // namespace casimir
