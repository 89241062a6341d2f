#include "dumbbell/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dumbbell {

namespace {

using nlohmann::json;

double get_number(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    return v.get<double>();
}

void check_keys(const json& doc, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& item : doc.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

WaveParams parse_wave(const json& w) {
    if (!w.is_object()) throw ConfigError("waves entries must be objects");
    check_keys(w, {"u", "k", "omega", "phi"}, "waves entry");
    for (const char* key : {"u", "k", "omega"}) {
        if (!w.contains(key)) {
            throw ConfigError(std::string("waves entry is missing \"") + key +
                              "\"");
        }
    }
    WaveParams out;
    out.u = get_number(w, "u", 0.0);
    out.k = get_number(w, "k", 0.0);
    out.omega = get_number(w, "omega", 0.0);
    out.phi = get_number(w, "phi", 0.0);
    return out;
}

Scheme parse_scheme(const json& doc) {
    if (!doc.contains("scheme")) return Scheme::euler_maruyama;
    const std::string s = doc.at("scheme").get<std::string>();
    if (s == "euler-maruyama") return Scheme::euler_maruyama;
    if (s == "splitting") return Scheme::splitting;
    throw ConfigError("scheme must be \"euler-maruyama\" or \"splitting\"");
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    // A manifest embeds the resolved config; accept it directly so a run can
    // be reproduced straight from its manifest.
    if (doc.contains("config") && doc.at("config").is_object()) {
        return parse_config(doc.at("config"));
    }

    check_keys(doc,
               {"lambda", "sigma", "epsilon", "u0", "waves", "dt", "t_final",
                "seed", "replicas", "record_every", "scheme", "lambda_grid",
                "species", "rel_tol", "abs_tol", "envelope_cutoff",
                "max_subdivisions"},
               "config");

    if (!doc.contains("lambda")) throw ConfigError("config is missing \"lambda\"");
    if (!doc.contains("sigma")) throw ConfigError("config is missing \"sigma\"");

    RunConfig cfg;
    cfg.params.lambda = get_number(doc, "lambda", 1.0);
    cfg.params.sigma = get_number(doc, "sigma", 1.0);
    cfg.forcing.epsilon = get_number(doc, "epsilon", 0.0);
    cfg.forcing.u0 = get_number(doc, "u0", 0.0);
    if (doc.contains("waves")) {
        if (!doc.at("waves").is_array()) throw ConfigError("waves must be an array");
        for (const json& w : doc.at("waves")) {
            cfg.forcing.waves.push_back(parse_wave(w));
        }
    }

    cfg.sim.dt = get_number(doc, "dt", cfg.sim.dt);
    cfg.sim.t_final = get_number(doc, "t_final", cfg.sim.t_final);
    if (doc.contains("seed")) cfg.sim.seed = doc.at("seed").get<std::uint64_t>();
    cfg.sim.replicas =
        static_cast<int>(get_number(doc, "replicas", cfg.sim.replicas));
    cfg.sim.record_every = static_cast<long>(
        get_number(doc, "record_every", static_cast<double>(cfg.sim.record_every)));
    cfg.sim.scheme = parse_scheme(doc);

    cfg.quad.rel_tol = get_number(doc, "rel_tol", cfg.quad.rel_tol);
    cfg.quad.abs_tol = get_number(doc, "abs_tol", cfg.quad.abs_tol);
    cfg.quad.envelope_cutoff =
        get_number(doc, "envelope_cutoff", cfg.quad.envelope_cutoff);
    cfg.quad.max_subdivisions = static_cast<int>(get_number(
        doc, "max_subdivisions", static_cast<double>(cfg.quad.max_subdivisions)));

    if (doc.contains("lambda_grid")) {
        if (!doc.at("lambda_grid").is_array()) {
            throw ConfigError("lambda_grid must be an array of numbers");
        }
        for (const json& v : doc.at("lambda_grid")) {
            cfg.lambda_grid.push_back(v.get<double>());
        }
    }
    if (doc.contains("species")) {
        if (!doc.at("species").is_array()) {
            throw ConfigError("species must be an array");
        }
        for (const json& s : doc.at("species")) {
            check_keys(s, {"lambda", "sigma"}, "species entry");
            if (!s.contains("lambda")) {
                throw ConfigError("species entry is missing \"lambda\"");
            }
            DumbbellParams p = cfg.params;
            p.lambda = get_number(s, "lambda", p.lambda);
            p.sigma = get_number(s, "sigma", p.sigma);
            cfg.species.push_back(p);
        }
    }

    try {
        validate(cfg.params, cfg.forcing);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(doc);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json waves = json::array();
    for (const WaveParams& w : cfg.forcing.waves) {
        waves.push_back({{"u", w.u}, {"k", w.k}, {"omega", w.omega}, {"phi", w.phi}});
    }
    json doc{{"lambda", cfg.params.lambda},
             {"sigma", cfg.params.sigma},
             {"epsilon", cfg.forcing.epsilon},
             {"u0", cfg.forcing.u0},
             {"waves", waves},
             {"dt", cfg.sim.dt},
             {"t_final", cfg.sim.t_final},
             {"seed", cfg.sim.seed},
             {"replicas", cfg.sim.replicas},
             {"record_every", cfg.sim.record_every},
             {"scheme", cfg.sim.scheme == Scheme::splitting ? "splitting"
                                                            : "euler-maruyama"},
             {"rel_tol", cfg.quad.rel_tol},
             {"abs_tol", cfg.quad.abs_tol},
             {"envelope_cutoff", cfg.quad.envelope_cutoff},
             {"max_subdivisions", cfg.quad.max_subdivisions}};
    if (!cfg.lambda_grid.empty()) doc["lambda_grid"] = cfg.lambda_grid;
    if (!cfg.species.empty()) {
        json species = json::array();
        for (const DumbbellParams& p : cfg.species) {
            species.push_back({{"lambda", p.lambda}, {"sigma", p.sigma}});
        }
        doc["species"] = species;
    }
    return doc;
}

nlohmann::json prediction_to_json(const DriftPrediction& p) {
    return {{"total_drift", p.total_drift},
            {"per_wave_order2", p.per_wave_order2},
            {"offset_order1", p.offset_order1},
            {"quadrature_error_estimate", p.quadrature_error_estimate}};
}

nlohmann::json estimate_to_json(const DriftEstimate& e) {
    return {{"mean_drift", e.mean_drift},
            {"std_error", e.std_error},
            {"replicas", e.replicas},
            {"t_final", e.t_final},
            {"method", e.method}};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "lambda,mc_drift,mc_se,asym_drift,quad_err,z,status\n";
    for (const SweepPoint& p : r.points) {
        out << format_double(p.lambda) << ',';
        if (p.ok) {
            out << format_double(p.mc.mean_drift) << ','
                << format_double(p.mc.std_error) << ','
                << format_double(p.asym_drift) << ','
                << format_double(p.quad_err) << ',' << format_double(p.z)
                << ",ok\n";
        } else {
            out << "nan,nan,nan,nan,nan,error: " << p.error << '\n';
        }
    }
    return out.str();
}

std::string fanout_to_csv(const FanoutTable& t) {
    std::ostringstream out;
    out << "species,lambda,sigma,mc_drift,mc_se,asym_drift,quad_err,z,"
           "sign_resolved\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const SpeciesRow& r = t.rows[i];
        out << i << ',' << format_double(r.params.lambda) << ','
            << format_double(r.params.sigma) << ','
            << format_double(r.mc.mean_drift) << ','
            << format_double(r.mc.std_error) << ','
            << format_double(r.asym_drift) << ',' << format_double(r.quad_err)
            << ',' << format_double(r.z) << ',' << (r.sign_resolved ? 1 : 0)
            << '\n';
    }
    return out.str();
}

std::string replicas_to_csv(std::span<const Trajectory> trajectories) {
    std::ostringstream out;
    out << "replica_id,v_initial,v_final,t_final\n";
    for (const Trajectory& tr : trajectories) {
        out << tr.replica_id << ',' << format_double(tr.initial.v()) << ','
            << format_double(tr.final_state.v()) << ','
            << format_double(tr.final_state.t) << '\n';
    }
    return out.str();
}

std::string samples_to_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "t,x,y\n";
    for (const DumbbellState& s : t.samples) {
        out << format_double(s.t) << ',' << format_double(s.x) << ','
            << format_double(s.y) << '\n';
    }
    return out.str();
}

nlohmann::json manifest_to_json(const RunManifest& m) {
    json timing = json::object();
    for (const auto& [phase, secs] : m.timing_seconds) timing[phase] = secs;
    return {{"config", config_to_json(m.config)},
            {"version", kVersion},
            {"seed", m.seed},
            {"timing", timing},
            {"outputs", m.outputs}};
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << contents;
}

}  // namespace dumbbell
