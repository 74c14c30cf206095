#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "erange/cli/commands.hpp"
#include "erange/errors.hpp"
#include "json.hpp"

using namespace erange;
using namespace erange::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cmd(Command c, const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(c, cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("phase-shift CSV: header with units, one row per k") {
  RunConfig c;
  c.k_grid.points = 50;
  const Run r = run_cmd(Command::phase_shift, c);
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 51);
  CHECK(ls[0] == "k [1/length],delta_integral [rad],delta_matching [rad],abs_difference [rad]");
}

TEST_CASE("phase-shift output is byte-identical across runs and thread counts") {
  RunConfig c;
  c.potential = PotentialSpec::power_tail(1, 1, 6);
  c.k_grid.points = 20;
  const std::string first = run_cmd(Command::phase_shift, c).out;
  setenv("ERANGE_THREADS", "1", 1);
  const std::string serial = run_cmd(Command::phase_shift, c).out;
  setenv("ERANGE_THREADS", "3", 1);
  const std::string three = run_cmd(Command::phase_shift, c).out;
  unsetenv("ERANGE_THREADS");
  CHECK(first == serial);
  CHECK(first == three);
}

TEST_CASE("numbers carry 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(2.0 / 3.0) == "0.66666666666666663");
  CHECK(format_number(-1e-300 / 3.0) == "-3.3333333333333334e-301");
}

TEST_CASE("attractive potential with the integral method exits 2") {
  RunConfig c;
  c.potential = PotentialSpec::square_well(5, 1);
  c.method = Method::integral;
  const Run r = run_cmd(Command::phase_shift, c);
  CHECK(r.code == 2);
  CHECK(r.err.find("V >= 0") != std::string::npos);
}

TEST_CASE("free potential gives zero phases") {
  RunConfig c;
  c.potential = PotentialSpec::free();
  const Outcome o = cmd_phase_shift(c);
  for (const auto& row : o.table.rows) {
    CHECK(std::abs(std::get<double>(row[1])) < 1e-14);
    CHECK(std::abs(std::get<double>(row[2])) < 1e-14);
  }
}

TEST_CASE("effective-range rows and sentinels") {
  RunConfig c;
  Outcome o = cmd_effective_range(c);
  REQUIRE(o.table.rows.size() == 2);
  CHECK(std::get<double>(o.table.rows[0][2]) == doctest::Approx(0.517986209962).epsilon(1e-9));

  c.potential = PotentialSpec::power_tail(1, 1, 4);
  c.method = Method::integral;
  o = cmd_effective_range(c);
  REQUIRE(o.table.rows.size() == 1);
  CHECK(std::get<std::string>(o.table.rows[0][5]) == "divergent");
  CHECK(std::get<double>(o.table.rows[0][6]) == doctest::Approx(1.0).epsilon(0.1));

  c.potential = PotentialSpec::free();
  o = cmd_effective_range(c);
  CHECK(std::get<double>(o.table.rows[0][2]) == 0.0);
  CHECK(std::get<double>(o.table.rows[0][4]) == 0.0);
  CHECK(std::get<std::string>(o.table.rows[0][5]) == "undefined");
  CHECK(std::get<std::string>(o.table.rows[0][7]).find("a=0: undefined") != std::string::npos);
}

TEST_CASE("CSV writes the divergent sentinel") {
  RunConfig c;
  c.potential = PotentialSpec::power_tail(1, 1, 4);
  c.method = Method::integral;
  const Run r = run_cmd(Command::effective_range, c);
  CHECK(r.code == 0);
  CHECK(r.out.find(",divergent,divergent,") != std::string::npos);
}

TEST_CASE("JSON output has config, results and diagnostics") {
  RunConfig c;
  c.format = Format::json;
  c.potential = PotentialSpec::square_well(5, 1);
  c.potential_node = {{"type", "square_well"}, {"depth", 5.0}, {"radius", 1.0}};
  const Run r = run_cmd(Command::levinson, c);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("config"));
  CHECK(j.contains("diagnostics"));
  REQUIRE(j.at("results").size() == 1);
  CHECK(j["results"][0]["n"] == 1);
  CHECK(j["config"]["potential"]["type"] == "square_well");
}

TEST_CASE("bound-states on a barrier is empty") {
  RunConfig c;
  const Run r = run_cmd(Command::bound_states, c);
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 1);
}

TEST_CASE("scan: single cell and threshold cell") {
  RunConfig c;
  c.scan.s_list = {6.0};
  c.scan.ell_list = {0};
  Run r = run_cmd(Command::scan, c);
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 2);
  c.scan.s_list = {3.01};
  r = run_cmd(Command::scan, c);
  CHECK(r.code == 0);
  CHECK(r.out.find("0,3.0099999999999998,true,false") != std::string::npos);
}

TEST_CASE("config errors exit 2 and name the field") {
  RunConfig c;
  c.k_grid.k_min = -1;
  Run r = run_cmd(Command::phase_shift, c);
  CHECK(r.code == 2);
  CHECK(r.err.find("k_grid.k_min") != std::string::npos);

  c = RunConfig{};
  c.tolerances.levinson_residual = 0;
  CHECK(run_cmd(Command::levinson, c).code == 2);

  const auto bad = write_temp("erange_bad.yaml", "potential:\n  type: square_barrier\n  hieght: 4\n");
  CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("hieght"), ConfigError);
  const auto unknown = write_temp("erange_unknown.yaml", "potential:\n  type: lennard_jones\n");
  CHECK_THROWS_AS(load_config(unknown), ConfigError);
  const auto bad_pot = write_temp("erange_tail.yaml", "potential:\n  type: power_tail\n  exponent: 2\n");
  CHECK_THROWS_AS(load_config(bad_pot), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("config file round trip") {
  const auto path = write_temp("erange_ok.yaml",
                               "potential:\n  type: truncated\n  cutoff: 20\n  inner:\n    type: power_tail\n"
                               "    amplitude: 2\n    exponent: 3.5\n"
                               "ell: 1\nk_grid: {k_min: 0.1, k_max: 2, points: 5, spacing: linear}\n"
                               "method: matching\noutput: {format: json}\n");
  const RunConfig c = load_config(path);
  CHECK(c.ell == 1);
  CHECK(c.k_grid_explicit);
  CHECK_FALSE(c.k_grid.logarithmic);
  CHECK(c.k_grid.values() == std::vector<double>{0.1, 0.575, 1.05, 1.525, 2.0});
  CHECK(c.method == Method::matching);
  CHECK(c.format == Format::json);
  CHECK(support_radius(c.potential).value() == 20.0);
  CHECK(to_json(c)["potential"]["inner"]["exponent"] == 3.5);
}

TEST_CASE("unwritable output path fails before computing") {
  RunConfig c;
  c.out_path = "/nonexistent/dir/out.csv";
  const Run r = run_cmd(Command::phase_shift, c);
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("output file is written and a failed run leaves no new file") {
  const auto p = (std::filesystem::temp_directory_path() / "erange_out.csv").string();
  std::filesystem::remove(p);
  RunConfig c;
  c.out_path = p;
  c.k_grid.points = 3;
  CHECK(run_cmd(Command::phase_shift, c).code == 0);
  CHECK(std::filesystem::file_size(p) > 0);
  std::filesystem::remove(p);
  c.potential = PotentialSpec::square_well(5, 1);
  c.method = Method::integral;
  CHECK(run_cmd(Command::phase_shift, c).code == 2);
  CHECK_FALSE(std::filesystem::exists(p));
}

TEST_CASE("malformed ERANGE_THREADS exits 2") {
  setenv("ERANGE_THREADS", "many", 1);
  RunConfig c;
  c.k_grid.points = 2;
  const int code = run_cmd(Command::phase_shift, c).code;
  unsetenv("ERANGE_THREADS");
  CHECK(code == 2);
}

TEST_CASE("exit codes by error type") {
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(PreconditionError("x")) == 2);
  CHECK(exit_code_for(DomainError("x")) == 2);
  CHECK(exit_code_for(NumericError("x")) == 1);
  CHECK(exit_code_for(IterationError("x")) == 1);
  CHECK(exit_code_for(ConsistencyError("x")) == 1);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("command names") {
  for (auto c : {Command::phase_shift, Command::effective_range, Command::scan, Command::levinson,
                 Command::bound_states, Command::validate})
    CHECK(parse_command(to_string(c)) == c);
  CHECK_THROWS_AS(parse_command("fit"), ConfigError);
}
