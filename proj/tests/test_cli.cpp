#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
        out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "dumbbell_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path p = temp_dir() / name;
    std::ofstream(p) << doc.dump(2);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ostringstream ss;
    ss << std::ifstream(p).rdbuf();
    return ss.str();
}

json base_config() {
    return json{{"lambda", 1.0},
                {"sigma", 1.0},
                {"epsilon", 0.5},
                {"u0", 0.0},
                {"waves", json::array({{{"u", 1.0}, {"k", 1.0}, {"omega", 1.0}}})},
                {"dt", 0.01},
                {"t_final", 50.0},
                {"seed", 7},
                {"replicas", 4}};
}

}  // namespace

TEST_CASE("help lists every subcommand") {
    const RunResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    for (const char* sub : {"asymptotic", "mc", "sweep", "fanout", "limits"}) {
        CHECK(r.output.find(sub) != std::string::npos);
    }
}

TEST_CASE("subcommand help documents every config key") {
    for (const char* sub : {"asymptotic", "mc", "sweep", "fanout", "limits"}) {
        const RunResult r = run_cli(std::string(sub) + " --help");
        CHECK(r.exit_code == 0);
        for (const char* key :
             {"lambda", "sigma", "epsilon", "u0", "waves", "dt", "t_final",
              "seed", "replicas", "record_every", "scheme", "lambda_grid",
              "species", "rel_tol", "abs_tol", "envelope_cutoff",
              "max_subdivisions"}) {
            CHECK_MESSAGE(r.output.find(key) != std::string::npos,
                          sub << " --help missing " << key);
        }
    }
}

TEST_CASE("missing lambda exits 2 and names the field") {
    json cfg = base_config();
    cfg.erase("lambda");
    const auto path = write_config("missing_lambda.json", cfg);
    const RunResult r = run_cli("asymptotic --config " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("lambda") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected") {
    json cfg = base_config();
    cfg["lamda"] = 2.0;  // typo must not be silently absorbed
    const auto path = write_config("typo.json", cfg);
    const RunResult r = run_cli("asymptotic --config " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("lamda") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
    const RunResult r = run_cli("asymptotic --no-such-flag");
    CHECK(r.exit_code == 2);
}

TEST_CASE("asymptotic: omega = 0 leaves only the offset term") {
    json cfg = base_config();
    cfg["waves"][0]["omega"] = 0.0;
    cfg["u0"] = 0.3;
    const auto path = write_config("omega0.json", cfg);
    const RunResult r = run_cli("asymptotic --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out.at("total_drift").get<double>() == doctest::Approx(-0.15));
    CHECK(out.at("per_wave_order2")[0].get<double>() == 0.0);
}

TEST_CASE("asymptotic approaches the strong-spring closed form") {
    const auto path = write_config("strong.json", base_config());
    const RunResult r =
        run_cli("asymptotic --config " + path.string() + " --lambda 1000");
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out.at("per_wave_order2")[0].get<double>() ==
          doctest::Approx(0.4).epsilon(1e-2));
    CHECK(out.at("total_drift").get<double>() ==
          doctest::Approx(0.25 * out.at("per_wave_order2")[0].get<double>())
              .epsilon(1e-9));
}

TEST_CASE("asymptotic --dump-m-of-beta writes a CSV") {
    const auto path = write_config("dump.json", base_config());
    const fs::path out_csv = temp_dir() / "m_of_beta.csv";
    const RunResult r = run_cli("asymptotic --config " + path.string() +
                                " --dump-m-of-beta " + out_csv.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(out_csv);
    CHECK(csv.rfind("beta,m_of_beta\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 402);
}

TEST_CASE("limits prints both closed forms") {
    const auto path = write_config("limits.json", base_config());
    const RunResult r = run_cli("limits --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(out[0].at("strong_spring").get<double>() == doctest::Approx(0.4));
    CHECK(out[0].at("weak_spring").get<double>() == doctest::Approx(0.25));
}

TEST_CASE("mc at epsilon = 0 is consistent with zero drift") {
    json cfg = base_config();
    cfg["epsilon"] = 0.0;
    cfg["replicas"] = 16;
    const auto path = write_config("mc0.json", cfg);
    const RunResult r = run_cli("mc --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.output);
    CHECK(std::abs(out.at("mean_drift").get<double>()) <=
          4.0 * out.at("std_error").get<double>());
    CHECK(out.at("method") == "monte-carlo");
}

TEST_CASE("mc rejects the dt*lambda stability violation before computing") {
    const auto path = write_config("stiff.json", base_config());
    const RunResult r =
        run_cli("mc --config " + path.string() + " --lambda 100 --dt 0.01");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("dt*lambda") != std::string::npos);
}

TEST_CASE("sweep: smoke grid, determinism, manifest reproduction") {
    json cfg = base_config();
    cfg["lambda_grid"] = {0.5, 1.0, 2.0};
    const auto path = write_config("sweep.json", cfg);
    const fs::path out1 = temp_dir() / "sweep1.csv";
    const fs::path out2 = temp_dir() / "sweep2.csv";

    const RunResult r1 = run_cli("sweep --config " + path.string() + " --out " +
                                 out1.string());
    REQUIRE(r1.exit_code == 0);
    const std::string csv1 = slurp(out1);
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 4);  // header + 3 rows
    CHECK(csv1.rfind("lambda,mc_drift,mc_se,asym_drift,quad_err,z,status\n", 0) == 0);

    // identical bytes on re-run
    const RunResult r2 = run_cli("sweep --config " + path.string() + " --out " +
                                 out2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(csv1 == slurp(out2));

    // the manifest reproduces the run byte-for-byte
    const fs::path manifest = fs::path(out1.string() + ".manifest.json");
    REQUIRE(fs::exists(manifest));
    const fs::path out3 = temp_dir() / "sweep3.csv";
    const RunResult r3 = run_cli("sweep --config " + manifest.string() +
                                 " --out " + out3.string());
    REQUIRE(r3.exit_code == 0);
    CHECK(csv1 == slurp(out3));
}

TEST_CASE("mc --compare-asymptotic reports a verdict") {
    json cfg = base_config();
    cfg["t_final"] = 100.0;
    cfg["replicas"] = 8;
    const auto path = write_config("mc_cmp.json", cfg);
    const RunResult r =
        run_cli("mc --config " + path.string() + " --compare-asymptotic");
    REQUIRE((r.exit_code == 0 || r.exit_code == 4));
    const json out = json::parse(r.output);
    CHECK(out.contains("z"));
    CHECK(out.contains("asym_drift"));
    CHECK((out.at("verdict") == "pass" || out.at("verdict") == "fail"));
    CHECK((r.exit_code == 0) == (out.at("verdict") == "pass"));
}

TEST_CASE("mc with record_every writes a samples stream") {
    json cfg = base_config();
    cfg["t_final"] = 5.0;
    cfg["record_every"] = 100;
    const auto path = write_config("mc_rec.json", cfg);
    const fs::path out = temp_dir() / "mc_rec.csv";
    const RunResult r =
        run_cli("mc --config " + path.string() + " --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(out).rfind("replica_id,v_initial,v_final,t_final\n", 0) == 0);
    const std::string samples = slurp(fs::path(out.string() + ".samples.csv"));
    CHECK(samples.rfind("replica_id,t,x,y\n", 0) == 0);
    CHECK(std::count(samples.begin(), samples.end(), '\n') > 4);
    const json manifest = json::parse(slurp(fs::path(out.string() + ".manifest.json")));
    CHECK(manifest.at("outputs").size() == 2);
    CHECK(manifest.at("version").is_string());
    CHECK(manifest.at("timing").contains("simulate"));
}

TEST_CASE("fanout: identical species agree within error bars") {
    json cfg = base_config();
    cfg["species"] = json::array({{{"lambda", 1.0}}, {{"lambda", 1.0}}});
    const auto path = write_config("fanout.json", cfg);
    const RunResult r = run_cli("fanout --config " + path.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string header;
    std::getline(lines, header);
    CHECK(header.rfind("species,lambda,sigma,", 0) == 0);
    int rows = 0;
    for (std::string line; std::getline(lines, line) && !line.empty();) ++rows;
    CHECK(rows == 2);
}
