#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "magwave/cli.hpp"
#include "magwave/config.hpp"
#include "magwave/errors.hpp"

using namespace magwave;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("magwave_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write(const TempDir& d, const std::string& name, const std::string& text) {
  const fs::path p = d.path / name;
  std::ofstream(p) << text;
  return p;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kFlat = R"(
[profile]
family = zero
[grid]
L = 10
Nx = 199
Ny = 31
)";

const char* kSmall = R"(
[profile]
family = lorentzian
amplitude = 0.1
[field]
family = smooth_disk_bump
strength = 1
[grid]
L = 12
Nx = 59
Ny = 11
[solver]
k = 2
[sweep]
alphas = 0.1, 0.4
bisection_steps = 1
[weyl]
n = 2, 4
k = 1
[effective1d]
L1 = 40
N1 = 1000
[gf]
samples = 101
[convergence]
grids = 6 29 5, 6 59 11, 6 119 23, 12 119 23
)";

}  // namespace

TEST_CASE("ini parsing") {
  const ConfigEntries e = parse_ini("# c\n[a]\nx = 1 ; note\n y=two words \n[b]\nx=3\n");
  CHECK(e.at("a.x") == "1");
  CHECK(e.at("a.y") == "two words");
  CHECK(e.at("b.x") == "3");
  CHECK_THROWS_AS(parse_ini("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a]\njunk\n"), ConfigError);
}

TEST_CASE("config errors name the key") {
  auto key_of = [](const std::string& text) {
    try {
      resolve_config(parse_ini(text));
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("[grid]\nL=1\nNx=9\nNy=9\n") == "profile.family");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nNx=9\nNy=9\n") == "grid.L");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nL=abc\nNx=9\nNy=9\n") == "grid.L");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nL=1\nNx=9.5\nNy=9\n") == "grid.Nx");
  CHECK(key_of("[profile]\nfamily=zero\ncolour=red\n[grid]\nL=1\nNx=9\nNy=9\n") == "profile.colour");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nL=1\nNx=9\nNy=9\n[sweep]\nalphas=0.2,0.1\n") == "sweep.alphas");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nL=1\nNx=9\nNy=9\n[gf]\ndenominator=mean\n") == "gf.denominator");
  CHECK(key_of("[profile]\nfamily=lorentzian\namplitude=-1\n[grid]\nL=1\nNx=9\nNy=9\n") == "profile");
  CHECK(key_of("[profile]\nfamily=zero\n[field]\nfamily=smooth_disk_bump\nradius=3\n[grid]\nL=1\nNx=9\nNy=9\n") == "field");
  CHECK(key_of("[profile]\nfamily=zero\n[grid]\nL=1\nNx=9\nNy=9\n") == "<none>");
}

TEST_CASE("shipped schema and examples resolve") {
  const char* dir = MAGWAVE_CONFIG_DIR;
  for (const char* name : {"schema.ini", "examples/flat.ini", "examples/magnetic_sweep.ini"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config_file(std::string(dir) + "/" + name));
  }
}

TEST_CASE("usage and exit codes") {
  const Outcome bad = run({"frobnicate", "x.ini"});
  CHECK(bad.code == cli::kValidation);
  CHECK(bad.err.find("usage:") != std::string::npos);
  CHECK(run({}).code == cli::kValidation);
  CHECK(run({"spectrum"}).code == cli::kValidation);
  CHECK(run({"spectrum", "/nonexistent/run.ini"}).code == cli::kIoFailure);

  TempDir d;
  const fs::path cfg = write(d, "missing.ini", "[profile]\nfamily = zero\n[grid]\nNx = 9\nNy = 9\n");
  const Outcome missing = run({"spectrum", cfg.string(), "--out", (d.path / "o").string()});
  CHECK(missing.code == cli::kValidation);
  CHECK(missing.err.find("grid.L") != std::string::npos);

  const fs::path flat = write(d, "flat.ini", kFlat);
  CHECK(run({"sweep", flat.string(), "--out", (d.path / "o").string()}).code == cli::kValidation);
  CHECK(run({"spectrum", flat.string(), "--out", "/proc/magwave/forbidden"}).code == cli::kIoFailure);
}

TEST_CASE("spectrum of the flat strip") {
  TempDir d;
  const fs::path cfg = write(d, "flat.ini", kFlat);
  const fs::path out = d.path / "out";
  const Outcome o = run({"spectrum", cfg.string(), "--out", out.string()});
  REQUIRE(o.code == cli::kOk);
  const nlohmann::json j = read_json(out / "spectrum.json");
  const double expected = 1.0 + std::pow(std::numbers::pi / 20.0, 2);
  CHECK(j["result"]["eigenvalues"][0].get<double>() == doctest::Approx(expected).epsilon(2e-3));
  CHECK(j["result"]["count_below"] == 0);
  CHECK(j["result"]["residuals"].size() == 3);
  CHECK(j["result"]["flags"].size() == 3);
  CHECK(j["config"]["grid"]["Nx"] == 199);
  CHECK(j["config"]["solver"]["seed"] == 20240917);
  CHECK(j.contains("metadata"));
  const std::string csv = slurp(out / "spectrum.csv");
  CHECK(csv.rfind("index,eigenvalue,residual,below_threshold\n", 0) == 0);
  std::istringstream rows(csv);
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  const std::string value = row.substr(2, row.find(',', 2) - 2);
  CHECK(std::stod(value) == j["result"]["eigenvalues"][0].get<double>());
}

TEST_CASE("output directory from the environment") {
  TempDir d;
  const fs::path cfg = write(d, "flat.ini", kFlat);
  const fs::path env_dir = d.path / "from_env";
  ::setenv(cli::kOutDirEnv, env_dir.c_str(), 1);
  const Outcome o = run({"effective1d", cfg.string()});
  ::unsetenv(cli::kOutDirEnv);
  REQUIRE(o.code == cli::kOk);
  CHECK(fs::exists(env_dir / "effective1d.json"));
  CHECK(o.out.find("no negative eigenvalues") != std::string::npos);
}

TEST_CASE("every subcommand runs and is deterministic") {
  TempDir d;
  const fs::path cfg = write(d, "small.ini", kSmall);
  for (const char* cmd : {"spectrum", "sweep", "weyl", "effective1d", "hardy", "gauge-check", "gf-bounds", "convergence"}) {
    CAPTURE(cmd);
    const fs::path a = d.path / (std::string(cmd) + "_a"), b = d.path / (std::string(cmd) + "_b");
    const Outcome oa = run({cmd, cfg.string(), "--out", a.string()});
    const Outcome ob = run({cmd, cfg.string(), "--out", b.string()});
    CHECK(oa.code == cli::kOk);
    CHECK(ob.code == cli::kOk);
    nlohmann::json ja = read_json(a / (std::string(cmd) + ".json"));
    nlohmann::json jb = read_json(b / (std::string(cmd) + ".json"));
    CHECK(ja["config"]["profile"]["family"] == "lorentzian");
    ja.erase("metadata");
    jb.erase("metadata");
    CHECK(ja.dump() == jb.dump());
  }
  CHECK(fs::exists(d.path / "sweep_a" / "sweep.dat"));
  CHECK(slurp(d.path / "gf-bounds_a" / "gf_bounds.csv").rfind("x,G1,G1_d1,G1_d2,G2\n", 0) == 0);
}
