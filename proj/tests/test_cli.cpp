#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = PERJET_CLI_PATH;
const std::string kCharts = PERJET_CHARTS_DIR;
const std::string kGolden = PERJET_GOLDEN_DIR;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string path = "/tmp/perjet_cli_test.out";
  std::string cmd = kCli + " " + args + " > " + path + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, buf.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("golden outputs are byte-identical") {
  struct Case {
    const char* name;
    std::string args;
    int exit_code;
  };
  const Case cases[] = {
      {"check_flat_legendre", "check-flat " + kCharts + "/legendre.toml", 0},
      {"eval_jet_legendre",
       "eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 3 --frame identity", 0},
      {"solve_limp_legendre", "solve-limp " + kCharts + "/legendre.toml --point l=2 --order 3", 0},
      {"mazur_legendre", "mazur " + kCharts + "/legendre.toml", 0},
      {"mazur_eigvec3", "mazur " + kCharts + "/eigvec3.toml", 0},
      {"ordinary_legendre", "ordinary " + kCharts + "/legendre.toml", 0},
      {"ordinary_supersingular", "ordinary " + kCharts + "/supersingular.toml", 1},
      {"report_legendre", "report " + kCharts + "/legendre.toml", 0},
      {"report_sp4", "report " + kCharts + "/sp4_weight3.toml", 0},
      {"report_sp4_cut", "report " + kCharts + "/sp4_cut.toml", 0},
      {"report_legendre_json", "report " + kCharts + "/legendre.toml --json", 0},
      {"flag_analyze_nilpotent", "flag-analyze " + kCharts + "/nilpotent.toml", 0},
      {"criteria_simple", "criteria --pbar 1 --e 0 --dim-s 1 --d 1", 0},
      {"criteria_gap", "criteria --pbar 4 --e 4 --dim-s 3 --d 2 --codim-u 3 --codim-t 2 --codim-graph 2", 0},
      {"malformed", "report " + kCharts + "/malformed.toml", 2},
  };
  for (const auto& c : cases) {
    INFO(c.name);
    auto got = run_cli(c.args);
    CHECK(got.exit_code == c.exit_code);
    CHECK(got.output == slurp(kGolden + "/" + std::string(c.name) + ".golden"));
  }
}

TEST_CASE("exit code contract") {
  // 0 = success
  CHECK(run_cli("check-flat " + kCharts + "/legendre.toml").exit_code == 0);
  // 1 = mathematical verdict in check modes
  CHECK(run_cli("ordinary " + kCharts + "/supersingular.toml").exit_code == 1);
  // 2 = input errors
  CHECK(run_cli("report " + kCharts + "/malformed.toml").exit_code == 2);
  CHECK(run_cli("report /nonexistent.toml").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("eval-jet " + kCharts + "/legendre.toml --order 3 --jet t --point q=2").exit_code == 2);
  CHECK(run_cli("eval-jet " + kCharts + "/legendre.toml --order 3 --jet \"5+t\" --point l=2").exit_code == 2);
  // pole at the basepoint is an input error
  CHECK(run_cli("solve-limp " + kCharts + "/legendre.toml --point l=0 --order 2").exit_code == 2);
  // CharTooSmall at the use site: reduce mod 2 then ask for order 3
  CHECK(run_cli("eval-jet " + kCharts + "/legendre.toml --prime 3 --order 3 --jet t --point l=1").exit_code == 2);
}

TEST_CASE("malformed input diagnostics name line and field") {
  auto bad = run_cli("report " + kCharts + "/malformed.toml");
  CHECK(bad.output.find("line 8") != std::string::npos);
  CHECK(bad.output.find("Hodge numbers") != std::string::npos);
}

TEST_CASE("prime field charts and mod-p reduction") {
  auto native = run_cli("eval-jet " + kCharts + "/nilpotent_f7.toml --point z=1 --jet t --order 2");
  CHECK(native.exit_code == 0);
  CHECK(native.output.find("flag jet") != std::string::npos);

  // reducing the rational nilpotent chart mod 7 gives the same representative
  auto reduced = run_cli("eval-jet " + kCharts + "/nilpotent.toml --prime 7 --point z=1 --jet t --order 2");
  CHECK(reduced.exit_code == 0);
  CHECK(reduced.output == native.output);

  // --prime must agree with a prime-field chart
  CHECK(run_cli("check-flat " + kCharts + "/nilpotent_f7.toml --prime 5").exit_code == 2);
}

TEST_CASE("eval-jet infers the basepoint from jet constant terms") {
  auto with_point = run_cli("eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 2");
  auto implicit = run_cli("eval-jet " + kCharts + "/legendre.toml --jet \"2+t\" --order 2");
  CHECK(with_point.exit_code == 0);
  CHECK(implicit.exit_code == 0);
  CHECK(with_point.output == implicit.output);
}

TEST_CASE("explicit frame matrices parse") {
  auto ident = run_cli("eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 2 --frame identity");
  auto rows = run_cli("eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 2 --frame \"1,0;0,1\"");
  CHECK(ident.exit_code == 0);
  CHECK(ident.output == rows.output);
  CHECK(run_cli("eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 2 --frame \"1,0;0\"").exit_code == 2);
  // singular frames are rejected as input errors
  CHECK(run_cli("eval-jet " + kCharts + "/legendre.toml --point l=2 --jet t --order 2 --frame \"1,1;1,1\"").exit_code == 2);
}

TEST_CASE("ordinary command on the diagonal module") {
  auto ok = run_cli("ordinary " + kCharts + "/legendre.toml");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output == "ordinary = true\n");
  auto bad = run_cli("ordinary " + kCharts + "/nilpotent.toml");
  CHECK(bad.exit_code == 2); // no [frobenius] section
}
