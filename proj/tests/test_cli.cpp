// End-to-end checks of the command-line tool: exit codes, output files,
// and the validation gates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli = TPSHOCK_CLI_PATH;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "tpshock_cli_out.txt";
  const fs::path err = fs::temp_directory_path() / "tpshock_cli_err.txt";
  const std::string cmd = std::string(cli) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return {WEXITSTATUS(rc), slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path dir = fs::temp_directory_path() / "tpshock_cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p);
  f << j.dump(2);
  return p;
}

json base_config(const fs::path& outdir) {
  return json{
      {"nozzle", {{"shape", "exponential"}, {"kappa", 0.05}, {"length", 1.0}}},
      {"inlet", {{"rho", 1.0}, {"u", 2.0}}},
      {"target", {{"shock_position", 0.5}}},
      {"forcing",
       {{"period", 1.0},
        {"epsilon", 1e-3},
        {"rho_right", {{"waveform", "sin"}}}}},
      {"grids", {{"nt", 64}, {"nx", 64}}},
      {"output_dir", outdir.string()}};
}

}  // namespace

TEST_CASE("validate: reference config passes and prints the scaling") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "ok";
  const fs::path cfg = write_config("ref.json", base_config(outdir));
  const RunResult r = run("validate --config " + cfg.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["M"].get<double>() == doctest::Approx(0.25));
  CHECK(j["alpha"].get<double>() == doctest::Approx(4.0 / 7.0));
  CHECK(j.contains("config"));
  CHECK(fs::exists(outdir / "validate.json"));
}

TEST_CASE("validation gates reject bad configs with exit code 2") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "bad";
  SUBCASE("inlet too fast") {
    json j = base_config(outdir);
    j["inlet"]["u"] = 4.0;
    const fs::path cfg = write_config("bad_u.json", j);
    const RunResult r = run("steady --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("sqrt(3)") != std::string::npos);
  }
  SUBCASE("inlet not supersonic") {
    json j = base_config(outdir);
    j["inlet"]["u"] = 1.0;
    const fs::path cfg = write_config("bad_sonic.json", j);
    const RunResult r = run("validate --config " + cfg.string());
    CHECK(r.exit_code == 2);
  }
  SUBCASE("converging nozzle") {
    json j = base_config(outdir);
    j["nozzle"] = {{"shape", "polynomial"},
                   {"coefficients", {1.0, -0.05}},
                   {"length", 1.0}};
    const fs::path cfg = write_config("bad_nozzle.json", j);
    const RunResult r = run("validate --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("divergent") != std::string::npos);
  }
  SUBCASE("unknown key") {
    json j = base_config(outdir);
    j["typo"] = 1;
    const fs::path cfg = write_config("bad_key.json", j);
    const RunResult r = run("validate --config " + cfg.string());
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("steady subcommand writes the branch tables") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "steady";
  const fs::path cfg = write_config("steady.json", base_config(outdir));
  const RunResult r = run("steady --config " + cfg.string());
  REQUIRE(r.exit_code == 0);
  for (const char* name : {"steady_supersonic.csv", "steady_subsonic.csv"}) {
    std::ifstream f(outdir / name);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,rho,u,regime");
  }
}

TEST_CASE("periodic subcommand produces the solution and report") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "per";
  const fs::path cfg = write_config("periodic.json", base_config(outdir));
  const RunResult r = run("periodic --config " + cfg.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(outdir / "periodic_subsonic.csv"));
  CHECK(fs::exists(outdir / "periodic_supersonic.csv"));
  CHECK(fs::exists(outdir / "periodic_shock.csv"));
  std::ifstream f(outdir / "iteration_report.json");
  REQUIRE(f.good());
  json rep;
  f >> rep;
  CHECK(rep["converged"].get<bool>());
  const double beta = rep["beta"].get<double>();
  for (const auto& v : rep["contraction_ratios"]) {
    CHECK(v.get<double>() <= beta);
  }
}

TEST_CASE("deterministic outputs: same config, same bytes") {
  const fs::path o1 = fs::temp_directory_path() / "tpshock_cli" / "d1";
  const fs::path o2 = fs::temp_directory_path() / "tpshock_cli" / "d2";
  json j = base_config(o1);
  const fs::path c1 = write_config("det1.json", j);
  j["output_dir"] = o2.string();
  const fs::path c2 = write_config("det2.json", j);
  REQUIRE(run("steady --config " + c1.string()).exit_code == 0);
  REQUIRE(run("steady --config " + c2.string()).exit_code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(o1 / "steady_supersonic.csv") ==
        slurp(o2 / "steady_supersonic.csv"));
}

TEST_CASE("NOZZLE_OUT overrides the output directory") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "envdir";
  std::error_code ec;
  fs::remove_all(outdir, ec);
  const fs::path cfg = write_config(
      "env.json", base_config(fs::temp_directory_path() / "tpshock_cli" /
                              "ignored"));
  const std::string cmd = "NOZZLE_OUT=" + outdir.string() + " " +
                          std::string(cli) + " validate --config " +
                          cfg.string() + " > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(outdir / "validate.json"));
}

TEST_CASE("hidden periodic-ode demo runs") {
  const fs::path outdir = fs::temp_directory_path() / "tpshock_cli" / "demo";
  const fs::path cfg = write_config("demo.json", base_config(outdir));
  const RunResult r = run("periodic-ode-demo --config " + cfg.string());
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["sup_error_vs_closed_form"].get<double>() < 1e-8);
}
