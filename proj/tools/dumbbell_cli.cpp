#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dumbbell/asymptotics.hpp"
#include "dumbbell/estimator.hpp"
#include "dumbbell/io.hpp"
#include "dumbbell/model.hpp"
#include "dumbbell/sde.hpp"

namespace {

using namespace dumbbell;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitComparison = 4;

struct CommonFlags {
    std::string config_path;
    std::optional<double> lambda, sigma, epsilon, u0, dt, t_final;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicas;
    std::string out_path;
    int threads = 0;
};

constexpr const char* kConfigKeyHelp =
    "Config keys (flat JSON document):\n"
    "  lambda            spring constant, > 0 (required)\n"
    "  sigma             noise scale, > 0 (required)\n"
    "  epsilon           wave strength, >= 0 (default 0)\n"
    "  u0                constant forcing offset (default 0)\n"
    "  waves             array of {u, k, omega, phi} (phi optional)\n"
    "  dt                time step (default 1e-3)\n"
    "  t_final           horizon (default 1e5)\n"
    "  seed              64-bit master seed (default 0)\n"
    "  replicas          replica count (default 64)\n"
    "  record_every      sample thinning in steps, 0 = final only\n"
    "  scheme            \"euler-maruyama\" (default) or \"splitting\"\n"
    "  lambda_grid       array of lambda values (sweep)\n"
    "  species           array of {lambda[, sigma]} (fanout)\n"
    "  rel_tol, abs_tol  quadrature tolerances\n"
    "  envelope_cutoff   e-foldings before integral truncation\n"
    "  max_subdivisions  quadrature panel budget\n"
    "Unknown keys are rejected.  A run manifest is also accepted as --config.";

void add_common_flags(CLI::App* cmd, CommonFlags& fl) {
    cmd->footer(kConfigKeyHelp);
    cmd->add_option("--config", fl.config_path, "JSON config file (or a run manifest)")
        ->required();
    cmd->add_option("--lambda", fl.lambda, "override spring constant lambda");
    cmd->add_option("--sigma", fl.sigma, "override noise scale sigma");
    cmd->add_option("--epsilon", fl.epsilon, "override wave strength epsilon");
    cmd->add_option("--u0", fl.u0, "override constant forcing offset u0");
    cmd->add_option("--seed", fl.seed, "override master seed");
    cmd->add_option("--dt", fl.dt, "override time step");
    cmd->add_option("--t-final", fl.t_final, "override time horizon");
    cmd->add_option("--replicas", fl.replicas, "override replica count");
    cmd->add_option("--out", fl.out_path, "output file path (CSV); a manifest is written alongside");
    cmd->add_option("--threads", fl.threads, "worker thread count (0 = default)");
}

RunConfig resolve_config(const CommonFlags& fl) {
    RunConfig cfg = load_config(fl.config_path);
    if (fl.lambda) cfg.params.lambda = *fl.lambda;
    if (fl.sigma) cfg.params.sigma = *fl.sigma;
    if (fl.epsilon) cfg.forcing.epsilon = *fl.epsilon;
    if (fl.u0) cfg.forcing.u0 = *fl.u0;
    if (fl.seed) cfg.sim.seed = *fl.seed;
    if (fl.dt) cfg.sim.dt = *fl.dt;
    if (fl.t_final) cfg.sim.t_final = *fl.t_final;
    if (fl.replicas) cfg.sim.replicas = *fl.replicas;
    for (DumbbellParams& sp : cfg.species) {
        if (fl.sigma) sp.sigma = *fl.sigma;
    }
    try {
        validate(cfg.params, cfg.forcing);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
#ifdef _OPENMP
    if (fl.threads > 0) omp_set_num_threads(fl.threads);
#endif
    return cfg;
}

class PhaseTimer {
  public:
    explicit PhaseTimer(RunManifest& m) : manifest_(m) {}
    template <class F>
    auto time(const std::string& phase, F&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto result = fn();
        const std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t0;
        manifest_.timing_seconds.emplace_back(phase, dt.count());
        return result;
    }

  private:
    RunManifest& manifest_;
};

void write_with_manifest(const std::string& out_path, const std::string& body,
                         RunManifest& manifest) {
    write_file(out_path, body);
    manifest.outputs.push_back(out_path);
    const std::string manifest_path = out_path + ".manifest.json";
    write_file(manifest_path, manifest_to_json(manifest).dump(2) + "\n");
}

void warn_if_heavy(const RunConfig& cfg) {
    const double steps = cfg.sim.t_final / cfg.sim.dt *
                         static_cast<double>(cfg.sim.replicas);
    if (steps > 5e9) {
        std::fprintf(stderr,
                     "warning: %.3g total integration steps requested; this "
                     "run may take hours\n",
                     steps);
    }
}

int cmd_asymptotic(const CommonFlags& fl, const std::string& dump_m_path) {
    const RunConfig cfg = resolve_config(fl);
    const DriftPrediction pred =
        predict_total_drift(cfg.forcing, cfg.params, cfg.quad);
    std::cout << prediction_to_json(pred).dump(2) << "\n";

    if (!dump_m_path.empty()) {
        if (cfg.forcing.waves.empty()) {
            throw ConfigError("--dump-m-of-beta needs at least one wave");
        }
        const WaveParams& w = cfg.forcing.waves.front();
        const double ks2 = w.k * w.k * cfg.params.sigma * cfg.params.sigma;
        const double beta_max =
            ks2 > 0.0 ? 2.0 * cfg.quad.envelope_cutoff / ks2 : 1.0;
        std::ostringstream csv;
        csv << "beta,m_of_beta\n";
        const int n = 400;
        for (int i = 0; i <= n; ++i) {
            const double beta = beta_max * i / n;
            const DriftTerm m = m_of_beta(beta, w, cfg.params, cfg.quad);
            csv << format_double(beta) << ',' << format_double(m.value) << '\n';
        }
        write_file(dump_m_path, csv.str());
    }
    return kExitOk;
}

int cmd_mc(const CommonFlags& fl, bool compare_asymptotic) {
    const RunConfig cfg = resolve_config(fl);
    validate(cfg.sim, cfg.params);
    warn_if_heavy(cfg);

    RunManifest manifest{cfg, cfg.sim.seed, {}, {}};
    PhaseTimer timer(manifest);
    const auto trajectories = timer.time(
        "simulate", [&] { return run_ensemble(cfg.forcing, cfg.params, cfg.sim); });
    const DriftEstimate est = estimate_drift(trajectories);
    nlohmann::json out = estimate_to_json(est);

    int code = kExitOk;
    if (compare_asymptotic) {
        const DriftPrediction pred =
            predict_total_drift(cfg.forcing, cfg.params, cfg.quad);
        const Verdict v = compare(est, pred.total_drift,
                                  pred.quadrature_error_estimate);
        out["asym_drift"] = pred.total_drift;
        out["quad_err"] = pred.quadrature_error_estimate;
        out["z"] = v.z;
        out["verdict"] = v.pass ? "pass" : "fail";
        if (!v.pass) code = kExitComparison;
    }
    std::cout << out.dump(2) << "\n";

    if (!fl.out_path.empty()) {
        if (cfg.sim.record_every > 0) {
            // thinned (t, x, y) stream, replicas concatenated in order
            std::ostringstream samples;
            samples << "replica_id,t,x,y\n";
            for (const Trajectory& tr : trajectories) {
                for (const DumbbellState& s : tr.samples) {
                    samples << tr.replica_id << ',' << format_double(s.t) << ','
                            << format_double(s.x) << ',' << format_double(s.y)
                            << '\n';
                }
            }
            write_file(fl.out_path + ".samples.csv", samples.str());
            manifest.outputs.push_back(fl.out_path + ".samples.csv");
        }
        write_with_manifest(fl.out_path, replicas_to_csv(trajectories), manifest);
    }
    return code;
}

int cmd_sweep(const CommonFlags& fl) {
    const RunConfig cfg = resolve_config(fl);
    if (cfg.lambda_grid.empty()) {
        throw ConfigError("sweep requires a nonempty lambda_grid");
    }
    validate(cfg.sim, cfg.params);
    warn_if_heavy(cfg);

    RunManifest manifest{cfg, cfg.sim.seed, {}, {}};
    PhaseTimer timer(manifest);
    const SweepResult result = timer.time("sweep", [&] {
        return sweep_lambda(cfg.lambda_grid, cfg.forcing, cfg.params, cfg.sim,
                            cfg.quad);
    });
    const std::string csv = sweep_to_csv(result);
    if (!fl.out_path.empty()) {
        write_with_manifest(fl.out_path, csv, manifest);
    } else {
        std::cout << csv;
    }
    for (const SweepPoint& p : result.points) {
        if (!p.ok) return kExitNumerical;
    }
    return kExitOk;
}

int cmd_fanout(const CommonFlags& fl) {
    const RunConfig cfg = resolve_config(fl);
    if (cfg.species.empty()) {
        throw ConfigError("fanout requires a nonempty species list");
    }
    validate(cfg.sim, cfg.params);
    warn_if_heavy(cfg);

    RunManifest manifest{cfg, cfg.sim.seed, {}, {}};
    PhaseTimer timer(manifest);
    const FanoutTable table = timer.time("fanout", [&] {
        return fanout_experiment(cfg.species, cfg.forcing, cfg.sim, cfg.quad);
    });
    const std::string csv = fanout_to_csv(table);
    if (!fl.out_path.empty()) {
        write_with_manifest(fl.out_path, csv, manifest);
    } else {
        std::cout << csv;
    }
    return kExitOk;
}

int cmd_limits(const CommonFlags& fl) {
    const RunConfig cfg = resolve_config(fl);
    nlohmann::json out = nlohmann::json::array();
    for (const WaveParams& w : cfg.forcing.waves) {
        out.push_back({{"u", w.u},
                       {"k", w.k},
                       {"omega", w.omega},
                       {"strong_spring", drift_strong_spring(w, cfg.params)},
                       {"weak_spring", drift_weak_spring(w, cfg.params)}});
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Stokes' drift of an elastic dumbbell: asymptotic "
                 "quadrature engine and Monte Carlo SDE engine"};
    app.require_subcommand(1);

    CommonFlags fl;
    std::string dump_m_path;
    bool compare_asymptotic = false;

    CLI::App* asym = app.add_subcommand(
        "asymptotic", "evaluate the leading-order drift prediction");
    add_common_flags(asym, fl);
    asym->add_option("--dump-m-of-beta", dump_m_path,
                     "write (beta, M(beta)) samples to this CSV file");

    CLI::App* mc = app.add_subcommand(
        "mc", "Monte Carlo drift estimate from SDE simulation");
    add_common_flags(mc, fl);
    mc->add_flag("--compare-asymptotic", compare_asymptotic,
                 "compare against the asymptotic prediction; exit 4 on |z| > 3");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "drift vs lambda sweep, MC against asymptotics (CSV)");
    add_common_flags(sweep, fl);

    CLI::App* fanout = app.add_subcommand(
        "fanout", "per-species drift table under a shared forcing (CSV)");
    add_common_flags(fanout, fl);

    CLI::App* limits = app.add_subcommand(
        "limits", "print the strong- and weak-spring closed forms");
    add_common_flags(limits, fl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (asym->parsed()) return cmd_asymptotic(fl, dump_m_path);
        if (mc->parsed()) return cmd_mc(fl, compare_asymptotic);
        if (sweep->parsed()) return cmd_sweep(fl);
        if (fanout->parsed()) return cmd_fanout(fl);
        if (limits->parsed()) return cmd_limits(fl);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const QuadratureBudgetExceeded& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
