#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dissrel/cli/commands.hpp"
#include "dissrel/cli/config.hpp"

namespace fs = std::filesystem;
using namespace dissrel::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "dissrel");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dissrel-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int failed_count(const std::string& report) {
  std::smatch m;
  REQUIRE(std::regex_search(report, m, std::regex("failed=([0-9]+)")));
  return std::stoi(m[1]);
}

}  // namespace

TEST_CASE("simulate reference run passes its four checks") {
  const auto out = scratch("sim");
  const auto r = call({"simulate", "gamma=1", "v0=0.6", "t_end=10", "tol=1e-10", "--out", out.string()});
  CHECK(r.code == 0);
  const auto rep = slurp(out / "simulate" / "report.txt");
  CHECK(std::count(rep.begin(), rep.end(), '\n') >= 5);
  for (const char* name : {"momentum_conservation", "euler_lagrange_residual", "legendre_residual", "hamilton_flow_agreement"}) {
    CHECK(rep.find(std::string("PASS ") + name) != std::string::npos);
  }
  CHECK(slurp(out / "simulate" / "trajectory.csv").rfind("t,x,v,tau,p,lorentz\n", 0) == 0);
}

TEST_CASE("simulate without dissipation reaches x = 0.6, tau = 0.8 at t = 1") {
  const auto out = scratch("sim0");
  REQUIRE(call({"simulate", "gamma=0", "v0=0.6", "t_end=1", "--out", out.string()}).code == 0);
  std::istringstream in(slurp(out / "simulate" / "trajectory.csv"));
  std::string line, last;
  while (std::getline(in, line)) last = line;
  double t, x, v, tau;
  char c;
  std::istringstream row(last);
  row >> t >> c >> x >> c >> v >> c >> tau;
  CHECK(t == 1.0);
  CHECK(std::abs(x - 0.6) < 1e-12);
  CHECK(std::abs(tau - 0.8) < 1e-12);
}

TEST_CASE("superluminal v0 is a configuration error") {
  const auto r = call({"simulate", "v0=1.5", "--out", scratch("bad").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("|v0| < c") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  const auto out = scratch("cfg").string();
  CHECK(call({"simulate", "bogus=1", "--out", out}).code == 2);
  CHECK(call({"simulate", "gamma=inf", "--out", out}).code == 2);
  CHECK(call({"simulate", "gamma=abc", "--out", out}).code == 2);
  CHECK(call({"simulate", "tol=0.01", "--out", out}).code == 2);
  CHECK(call({"approx", "gamma=0", "--out", out}).code == 2);
  CHECK(call({"modes", "k=-1", "--out", out}).code == 2);
  CHECK(call({"inverse", "force=coulomb", "--out", out}).code == 2);
  CHECK(call({"verify-all", "gamma=1", "--out", out}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(!fs::exists(fs::path(out) / "simulate"));
}

TEST_CASE("exit code equals the FAIL count") {
  const auto out = scratch("fails");
  // A loose tolerance breaks the conservation and flow checks.
  const auto r = call({"simulate", "tol=1e-3", "--out", out.string()});
  const int fails = failed_count(slurp(out / "simulate" / "report.txt"));
  CHECK(fails > 0);
  CHECK(r.code == fails);
}

TEST_CASE("approx window and branch audit") {
  const auto out = scratch("approx");
  CHECK(call({"approx", "gamma=4", "t_min=0.55", "t_max=0.95", "n=81", "--out", out.string()}).code == 0);
  std::istringstream in(slurp(out / "approx" / "approx.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "true");
  }
  CHECK(rows == 81);
  CHECK(slurp(out / "approx" / "summary.txt").find("branch-sign audit") != std::string::npos);

  REQUIRE(call({"approx", "gamma=1", "--out", out.string()}).code == 0);
  CHECK(slurp(out / "approx" / "summary.txt").find("is empty") != std::string::npos);
}

TEST_CASE("modes studies") {
  const auto out = scratch("modes");
  auto r = call({"modes", "k=1", "gamma=0", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS dispersion") != std::string::npos);
  r = call({"modes", "k=1", "gamma=4", "tau=log", "nx=128", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS analytic_numeric_agreement") != std::string::npos);
  CHECK(r.out.find("PASS pde_agreement_nx128") != std::string::npos);
  for (const char* f : {"mode_analytic.csv", "mode_numeric.csv", "mode_pde.csv", "field.csv", "pde_field.csv", "plot.py"}) {
    CHECK(fs::exists(out / "modes" / f));
  }
  CHECK(call({"modes", "gamma=4", "tau=exact", "--out", out.string()}).code == 0);
}

TEST_CASE("inverse studies") {
  const auto out = scratch("inverse");
  auto r = call({"inverse", "force=harmonic", "omega=1", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS g_identically_one") != std::string::npos);
  r = call({"inverse", "force=linear-drag", "gamma=1", "vmin=0.1", "vmax=2", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS el_reproduction") != std::string::npos);
  r = call({"inverse", "force=linear-drag", "vmin=-1", "vmax=1", "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("degeneracy") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical CSVs") {
  const auto a = scratch("det-a"), b = scratch("det-b");
  REQUIRE(call({"simulate", "--out", a.string()}).code == 0);
  REQUIRE(call({"simulate", "--out", b.string()}).code == 0);
  for (const auto& e : fs::directory_iterator(a / "simulate")) {
    CHECK(slurp(e.path()) == slurp(b / "simulate" / e.path().filename()));
  }
}

TEST_CASE("sweeps write one case directory each, in parallel too") {
  const auto a = scratch("sweep-a"), b = scratch("sweep-b");
  REQUIRE(call({"approx", "gamma=1,4", "n=5,9", "--out", a.string()}).code == 0);
  REQUIRE(call({"approx", "gamma=1,4", "n=5,9", "--out", b.string(), "--parallel", "3"}).code == 0);
  for (int i = 0; i < 4; ++i) {
    const std::string c = "case-00" + std::to_string(i);
    CHECK(slurp(a / "approx" / c / "approx.csv") == slurp(b / "approx" / c / "approx.csv"));
  }
  CHECK(slurp(a / "approx" / "cases.csv") == "case,gamma,n\ncase-000,1,5\ncase-001,1,9\ncase-002,4,5\ncase-003,4,9\n");
}

TEST_CASE("bundles are renamed into place and leave no staging behind") {
  const auto out = scratch("atomic");
  REQUIRE(call({"approx", "--out", out.string()}).code == 0);
  REQUIRE(call({"approx", "n=5", "--out", out.string()}).code == 0);
  int entries = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    ++entries;
    CHECK(e.path().filename() == "approx");
  }
  CHECK(entries == 1);
}

TEST_CASE("plot script references only existing CSVs") {
  const auto out = scratch("plot");
  REQUIRE(call({"inverse", "--out", out.string()}).code == 0);
  const auto py = slurp(out / "inverse" / "plot.py");
  const std::regex csv("\"([A-Za-z0-9_]+\\.csv)\"");
  int n = 0;
  for (std::sregex_iterator it(py.begin(), py.end(), csv), end; it != end; ++it, ++n) {
    CHECK(fs::exists(out / "inverse" / (*it)[1].str()));
  }
  CHECK(n >= 2);
}

TEST_CASE("config file with flag overrides, and DISSREL_OUT") {
  const auto dir = scratch("conf");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "# reference\ngamma = 0\nv0=0.5\nt_end=1\n";
  }
  const auto env_out = dir / "env-out";
  ::setenv("DISSREL_OUT", env_out.c_str(), 1);
  const auto r = call({"simulate", "--config", (dir / "run.cfg").string(), "v0=0.2"});
  ::unsetenv("DISSREL_OUT");
  CHECK(r.code == 0);
  CHECK(r.out.find("v0=0.2") != std::string::npos);
  CHECK(r.out.find("gamma=0 ") != std::string::npos);
  CHECK(fs::exists(env_out / "simulate" / "trajectory.csv"));

  {
    std::ofstream f(dir / "bad.cfg");
    f << "gamma=1\nwhat=2\n";
  }
  CHECK(call({"simulate", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("RunConfig parsing") {
  RunConfig c({"a", "b"});
  c.set_assignment("a= 1.5 ");
  CHECK(c.num("a", 0.0) == 1.5);
  CHECK(c.num("b", 7.0) == 7.0);
  CHECK_THROWS_AS(c.set_assignment("c=1"), ConfigError);
  CHECK_THROWS_AS(c.set_assignment("a"), ConfigError);
  CHECK_THROWS_AS(c.set_assignment("a="), ConfigError);
  c.set("b", "1,2,3");
  CHECK(expand_sweep(c).size() == 3);
  RunConfig t({"tol"});
  CHECK(t.tol(1e-8) == 1e-8);
  t.set("tol", "1e-2");
  CHECK_THROWS_AS(t.tol(1e-8), ConfigError);
}

TEST_CASE("verify-all passes everything") {
  const auto out = scratch("all");
  const auto r = call({"verify-all", "--parallel", "2", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(failed_count(slurp(out / "verify-all" / "report.txt")) == 0);
  CHECK(fs::exists(out / "verify-all" / "modes-log" / "mode_numeric.csv"));
}
