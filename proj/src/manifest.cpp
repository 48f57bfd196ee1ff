#include "mvns/manifest.hpp"

#include <fstream>
#include <numbers>

#include "mvns/operators.hpp"

#include "mvns/field_sampling.hpp"

namespace mvns {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(std::string(key) + ": expected an integer");
    return j.at(key).get<int>();
}

Profile profile_of(const json& j, const char* key, Profile fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    const json& p = j.at(key);
    if (!p.is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return {num(p, "constant", 0.0), num(p, "trig", 0.0)};
}

json profile_json(const Profile& p) {
    return json{{"constant", p.c0}, {"trig", p.c1}};
}

APSignal signal_of(const json& arr, const GridSpec& grid, const char* key) {
    if (!arr.is_array()) throw ConfigError(std::string(key) + ": expected an array of terms");
    APSignal sig;
    for (const auto& t : arr) {
        if (!t.is_object()) throw ConfigError(std::string(key) + ": terms must be objects");
        const double omega = num(t, "omega", 1.0);
        const double theta = num(t, "theta", 0.0);
        const double scale = num(t, "scale", 0.0);
        const std::string pattern = t.value("pattern", std::string("tg"));
        sig.terms.push_back({omega, theta, pattern_field(grid, pattern, scale)});
    }
    return sig;
}

json signal_json(const json& arr) {
    json out = json::array();
    for (const auto& t : arr) {
        out.push_back({{"omega", num(t, "omega", 1.0)},
                       {"theta", num(t, "theta", 0.0)},
                       {"scale", num(t, "scale", 0.0)},
                       {"pattern", t.value("pattern", std::string("tg"))}});
    }
    return out;
}

std::vector<double> number_list(const json& j, const char* key,
                                std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_array()) throw ConfigError(std::string(key) + ": expected an array");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError(std::string(key) + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

json default_config() {
    return json{
        {"grid", {{"modes_per_axis", 8}, {"dealias", true}, {"collocation", 0}}},
        {"model",
         {{"nu", 2.5},
          {"epsilon", 0.5},
          {"noise_modes", 8},
          {"kappa", {{"constant", 0.3}, {"trig", 0.1}}},
          {"drift",
           {{"phi1", {{"constant", 0.01}, {"trig", 0.0}}},
            {"psi1", {{"constant", 0.002}, {"trig", 0.0}}},
            {"shape", "tanh"}}},
          {"diffusion",
           {{"geometric",
             {{"modes", 8}, {"beta0", 0.03}, {"gamma0", 0.03}, {"ratio", 0.7071067811865476}}}}}}},
        {"symbol",
         {{"g", json::array({{{"omega", 1.0}, {"theta", 0.0}, {"pattern", "tg"}, {"scale", 0.3}}})},
          {"h", json::array({{{"omega", 1.0}, {"theta", 0.0}, {"pattern", "tg"}, {"scale", 0.15}},
                             {{"omega", 1.4142135623730951},
                              {"theta", 0.0},
                              {"pattern", "shear_x"},
                              {"scale", 0.15}}})}}},
        {"noise", {{"seed", 20240901}}},
        {"checks", {{"assumption_budget", 2000}, {"calibration_samples", 2000}}},
        {"experiment", {{"kind", "moment"}}},
    };
}

RunManifest parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return parse_config_json(doc);
}

RunManifest parse_config_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    RunManifest m;
    m.version = kVersion;
    const json defaults = default_config();

    try {
        const json grid = doc.value("grid", json::object());
        m.grid.modes_per_axis = integer(grid, "modes_per_axis", 8);
        m.grid.dealias = grid.value("dealias", true);
        m.grid.collocation = integer(grid, "collocation", 0);
        m.grid.validate();

        const json model = doc.value("model", json::object());
        m.params.nu = num(model, "nu", 2.5);
        m.params.epsilon = num(model, "epsilon", 0.5);
        m.params.noise_modes = integer(model, "noise_modes", 8);
        m.params.lambda = poincare_lambda(m.grid);
        m.params.kappa = profile_of(model, "kappa", {0.3, 0.1});

        const json drift = model.value("drift", json::object());
        m.params.drift.phi1 = profile_of(drift, "phi1", {0.01, 0.0});
        m.params.drift.psi1 = profile_of(drift, "psi1", {0.002, 0.0});
        m.params.drift.phi2 = profile_of(drift, "phi2", m.params.drift.phi1);
        m.params.drift.psi2 = profile_of(drift, "psi2", m.params.drift.psi1);
        const std::string shape = drift.value("shape", std::string("tanh"));
        if (shape == "tanh") {
            m.params.drift.shape = ShapeKind::tanh_shape;
        } else if (shape == "clipped_linear") {
            m.params.drift.shape = ShapeKind::clipped_linear;
        } else if (shape == "zero") {
            m.params.drift.shape = ShapeKind::zero;
        } else {
            throw ConfigError("drift.shape: unknown shape '" + shape + "'");
        }

        const json diff = model.value("diffusion", json::object());
        if (diff.contains("beta")) {
            m.params.diffusion.beta = number_list(diff, "beta", {});
            m.params.diffusion.gamma_hat = number_list(diff, "gamma_hat", {});
            m.params.diffusion.lip = number_list(diff, "lip", {});
            if (m.params.diffusion.lip.empty()) {
                for (size_t i = 0; i < m.params.diffusion.beta.size(); ++i) {
                    m.params.diffusion.lip.push_back(
                        std::max(0.5 * m.params.diffusion.beta[i],
                                 i < m.params.diffusion.gamma_hat.size()
                                     ? m.params.diffusion.gamma_hat[i]
                                     : 0.0));
                }
            }
        } else {
            const json geo = diff.value("geometric", json::object());
            m.params.diffusion = DiffusionSpec::geometric(
                integer(geo, "modes", m.params.noise_modes), num(geo, "beta0", 0.03),
                num(geo, "gamma0", 0.03), num(geo, "ratio", 0.7071067811865476));
        }

        const json symbol = doc.value("symbol", defaults.at("symbol"));
        m.symbol.g = signal_of(symbol.value("g", json::array()), m.grid, "symbol.g");
        m.symbol.h = signal_of(symbol.value("h", json::array()), m.grid, "symbol.h");

        const json noise = doc.value("noise", json::object());
        m.sizing.base_seed = noise.value("seed", uint64_t{20240901});

        const json exp = doc.value("experiment", json::object());
        m.kind = exp.value("kind", std::string("moment"));
        m.sizing.seeds = integer(exp, "seeds", 32);
        m.sizing.particles = integer(exp, "particles", 32);
        m.sizing.dt = num(exp, "dt", 1.0 / 64.0);
        m.sizing.workers = integer(exp, "workers", 2);
        m.sizing.pooled_atoms_cap = integer(exp, "pooled_atoms_cap", 48);
        m.radius_sq = num(exp, "radius", 10.0);
        m.radius_4 = num(exp, "radius4", 100.0);
        m.stability.levels = integer(exp, "levels", 4);
        m.stability.offset0 = num(exp, "offset0", 1.0);
        m.stability.symbol_offset0 = num(exp, "symbol_offset0", 0.5);
        m.stability.t_fix = num(exp, "t_fix", 2.0);
        m.translation.shifts = number_list(exp, "shifts", {0.5, 1.0, std::numbers::pi});
        m.translation.horizon = num(exp, "horizon", 2.0);
        m.translation.coupled_shift = num(exp, "coupled_shift", 1.0);
        m.absorbing.radius_factors = number_list(exp, "radius_factors", {10.0, 100.0});
        m.absorbing.hull_samples = integer(exp, "hull_samples", 3);
        m.absorbing.extra_horizon = num(exp, "extra_horizon", 4.0);
        m.attractor.hull_samples = integer(exp, "hull_samples", 3);
        m.attractor.ladder = number_list(exp, "ladder", {5.0, 10.0, 20.0});
        m.attractor.probe_dt = num(exp, "probe_dt", 1.0);
        m.attractor.attraction_times =
            number_list(exp, "attraction_times", {1.0, 2.0, 3.0, 5.0, 8.0});
        m.attractor.floor_margin = num(exp, "floor_margin", 2.0);
        m.attractor.start_radius4 = num(exp, "start_radius4", 0.0);
        m.attractor.pullback_seeds = integer(exp, "pullback_seeds", 3);
        m.snapshot_times = number_list(exp, "snapshot_times", {});

        static const char* kinds[] = {"check",       "moment",     "moment4",
                                      "regularity",  "stability",  "translation",
                                      "absorbing",   "attractor"};
        bool known = false;
        for (const char* k : kinds) known = known || m.kind == k;
        if (!known) throw ConfigError("experiment.kind: unknown kind '" + m.kind + "'");

        m.params.validate();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }

    const json checks = doc.value("checks", json::object());
    const int budget = integer(checks, "assumption_budget", 2000);
    const int calib = integer(checks, "calibration_samples", 2000);

    m.assumptions = check_assumptions(m.params, m.symbol, m.grid, budget, m.sizing.base_seed);
    if (!m.assumptions.pass)
        throw AssumptionError("assumption check failed: " + m.assumptions.first_failure);
    m.ledger = constant_ledger(m.params, m.symbol, m.grid, calib);

    // Normalized document: every default made explicit, ledger echoed so the
    // outputs are self-contained. The hash covers everything but the ledger
    // echo (which is derived) and is keyed to the tool version.
    json norm;
    norm["version"] = m.version;
    norm["grid"] = {{"modes_per_axis", m.grid.modes_per_axis},
                    {"dealias", m.grid.dealias},
                    {"collocation", m.grid.collocation}};
    norm["model"] = {
        {"nu", m.params.nu},
        {"epsilon", m.params.epsilon},
        {"noise_modes", m.params.noise_modes},
        {"lambda", m.params.lambda},
        {"kappa", profile_json(m.params.kappa)},
        {"drift",
         {{"phi1", profile_json(m.params.drift.phi1)},
          {"psi1", profile_json(m.params.drift.psi1)},
          {"phi2", profile_json(m.params.drift.phi2)},
          {"psi2", profile_json(m.params.drift.psi2)},
          {"shape", doc.value("model", json::object())
                        .value("drift", json::object())
                        .value("shape", std::string("tanh"))}}},
        {"diffusion",
         {{"beta", m.params.diffusion.beta},
          {"gamma_hat", m.params.diffusion.gamma_hat},
          {"lip", m.params.diffusion.lip}}}};
    const json symbol = doc.value("symbol", defaults.at("symbol"));
    norm["symbol"] = {{"g", signal_json(symbol.value("g", json::array()))},
                      {"h", signal_json(symbol.value("h", json::array()))}};
    norm["noise"] = {{"seed", m.sizing.base_seed}};
    norm["checks"] = {{"assumption_budget", budget}, {"calibration_samples", calib}};
    norm["experiment"] = {{"kind", m.kind},
                          {"seeds", m.sizing.seeds},
                          {"particles", m.sizing.particles},
                          {"dt", m.sizing.dt},
                          {"workers", m.sizing.workers},
                          {"pooled_atoms_cap", m.sizing.pooled_atoms_cap},
                          {"radius", m.radius_sq},
                          {"radius4", m.radius_4},
                          {"levels", m.stability.levels},
                          {"offset0", m.stability.offset0},
                          {"symbol_offset0", m.stability.symbol_offset0},
                          {"t_fix", m.stability.t_fix},
                          {"shifts", m.translation.shifts},
                          {"horizon", m.translation.horizon},
                          {"coupled_shift", m.translation.coupled_shift},
                          {"radius_factors", m.absorbing.radius_factors},
                          {"hull_samples", m.absorbing.hull_samples},
                          {"extra_horizon", m.absorbing.extra_horizon},
                          {"ladder", m.attractor.ladder},
                          {"probe_dt", m.attractor.probe_dt},
                          {"attraction_times", m.attractor.attraction_times},
                          {"floor_margin", m.attractor.floor_margin},
                          {"start_radius4", m.attractor.start_radius4},
                          {"pullback_seeds", m.attractor.pullback_seeds},
                          {"snapshot_times", m.snapshot_times}};

    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(norm.dump())));
    m.content_hash = hash;

    json ledger_echo = json::object();
    for (const auto& row : m.ledger.rows()) ledger_echo[row.name] = row.value;
    norm["ledger"] = ledger_echo;
    norm["content_hash"] = m.content_hash;
    m.normalized = norm;
    return m;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace mvns
