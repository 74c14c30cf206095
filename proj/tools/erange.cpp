#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "erange/cli/commands.hpp"
#include "erange/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::string method;
  int ell = 0;
  double k_min = 0.0;
  double k_max = 0.0;
  int k_points = 0;
  double r_max = 0.0;
  std::vector<double> s_list;
  std::vector<int> ell_list;
};

void add_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "YAML run file");
  sub.add_option("--out", f.out, "output file (default stdout)");
  sub.add_option("--format", f.format, "csv or json");
  sub.add_option("--ell", f.ell, "angular momentum");
  sub.add_option("--kmin", f.k_min, "smallest momentum");
  sub.add_option("--kmax", f.k_max, "largest momentum");
  sub.add_option("--kpoints", f.k_points, "number of momenta");
  sub.add_option("--rmax", f.r_max, "outer radius of the solver grid");
  sub.add_option("--method", f.method, "integral, matching or both");
  sub.add_option("--s-list", f.s_list, "tail exponents for scan")->delimiter(',');
  sub.add_option("--ell-list", f.ell_list, "angular momenta for scan")->delimiter(',');
}

erange::cli::RunConfig resolve(const CLI::App& sub, const Flags& f) {
  using namespace erange::cli;
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--out")) c.out_path = f.out;
  if (given("--format")) c.format = parse_format(f.format);
  if (given("--method")) c.method = parse_method(f.method);
  if (given("--ell")) c.ell = f.ell;
  if (given("--kmin")) c.k_grid.k_min = f.k_min;
  if (given("--kmax")) c.k_grid.k_max = f.k_max;
  if (given("--kpoints")) c.k_grid.points = f.k_points;
  if (given("--kmin") || given("--kmax") || given("--kpoints")) c.k_grid_explicit = true;
  if (given("--rmax")) c.grid.r_max = f.r_max;
  if (given("--s-list")) c.scan.s_list = f.s_list;
  if (given("--ell-list")) c.scan.ell_list = f.ell_list;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"erange: phase shifts, effective-range parameters and tail-convergence scans"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"phase-shift", "phase shifts by the integral formula and by matching"},
      {"effective-range", "scattering length, b coefficient and effective range"},
      {"scan", "finiteness of a and r_eff for power tails, by truncation scans"},
      {"levinson", "low-k phase against the bound-state count"},
      {"bound-states", "bound-state energies"},
      {"validate", "run every module's invariant checks"}};
  for (const auto& [name, help] : commands) add_flags(*app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const erange::cli::Command command = erange::cli::parse_command(sub->get_name());
  erange::cli::RunConfig config;
  try {
    config = resolve(*sub, flags);
  } catch (const std::exception& e) {
    std::cerr << "erange " << sub->get_name() << ": error: " << e.what() << '\n';
    return erange::cli::exit_code_for(e);
  }
  return erange::cli::run(command, config, std::cout, std::cerr);
}
