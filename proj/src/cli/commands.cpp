#include "erange/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "erange/errors.hpp"
#include "erange/observables.hpp"
#include "erange/parallel.hpp"
#include "erange/radial.hpp"
#include "erange/scans.hpp"
#include "erange/validation.hpp"

namespace erange::cli {

Command parse_command(const std::string& name) {
  if (name == "phase-shift") return Command::phase_shift;
  if (name == "effective-range") return Command::effective_range;
  if (name == "scan") return Command::scan;
  if (name == "levinson") return Command::levinson;
  if (name == "bound-states") return Command::bound_states;
  if (name == "validate") return Command::validate;
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::phase_shift: return "phase-shift";
    case Command::effective_range: return "effective-range";
    case Command::scan: return "scan";
    case Command::levinson: return "levinson";
    case Command::bound_states: return "bound-states";
    case Command::validate: return "validate";
  }
  return "validate";
}

namespace {

std::string length_power(int p) {
  if (p == 0) return "1";
  if (p == 1) return "length";
  return "length^" + std::to_string(p);
}

RadialGrid solver_grid(const RunConfig& c, double k_max = 0.0) {
  GridSpec gs = c.grid;
  gs.k_max_hint = k_max;
  return make_grid(c.potential, gs);
}

Cell quantity_cell(const Quantity& q) {
  if (q.finite) return q.value;
  return std::string(q.undefined ? "undefined" : "divergent");
}

Cell exponent_cell(const Quantity& q) {
  if (q.finite || q.undefined) return std::string();
  if (q.evidence) return q.evidence->growth_exponent;
  return q.predicted_exponent;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

Outcome cmd_phase_shift(const RunConfig& c) {
  const std::vector<double> ks = c.k_grid.values();
  const bool attractive = !is_nonnegative(c.potential);
  Method method = c.method;
  Outcome out;
  if (attractive && method == Method::integral)
    throw PreconditionError("the integral phase formula requires V >= 0; use --method matching");
  if (attractive && method == Method::both) {
    method = Method::matching;
    out.table.diagnostics["note"] = "V < 0 somewhere: integral formula skipped, matching only";
  }
  const bool integral = method != Method::matching;
  const bool matching = method != Method::integral;
  const RadialGrid grid = solver_grid(c, c.k_grid.k_max);

  std::vector<double> di(ks.size()), dm(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    if (integral) di[i] = phase_shift_integral(c.potential, ks[i], c.ell, grid);
    if (matching) dm[i] = phase_shift_matching(c.potential, ks[i], c.ell, grid);
  });

  Table& t = out.table;
  t.columns.push_back({"k", "1/length"});
  if (integral) t.columns.push_back({"delta_integral", "rad"});
  if (matching) t.columns.push_back({"delta_matching", "rad"});
  if (integral && matching) t.columns.push_back({"abs_difference", "rad"});
  double worst = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::vector<Cell> row{ks[i]};
    if (integral) row.emplace_back(di[i]);
    if (matching) row.emplace_back(dm[i]);
    if (integral && matching) {
      row.emplace_back(std::abs(di[i] - dm[i]));
      worst = std::max(worst, std::abs(di[i] - dm[i]));
    }
    t.add(std::move(row));
  }
  const std::vector<double>& d = matching ? dm : di;
  double jump = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) jump = std::max(jump, std::abs(d[i] - d[i - 1]));
  t.diagnostics["potential"] = c.potential.describe();
  t.diagnostics["grid_nodes"] = grid.size();
  t.diagnostics["r_max"] = grid.r_max();
  t.diagnostics["max_adjacent_jump"] = jump;
  if (integral && matching) t.diagnostics["max_abs_difference"] = worst;
  return out;
}

Outcome cmd_effective_range(const RunConfig& c) {
  const int l = c.ell;
  Outcome out;
  Table& t = out.table;
  t.columns = {{"method", ""},
               {"ell", ""},
               {"a", length_power(2 * l + 1)},
               {"a_growth_exponent", ""},
               {"b", length_power(2 * l + 3)},
               {"r_eff", length_power(1 - 2 * l)},
               {"r_growth_exponent", ""},
               {"note", ""}};
  const bool attractive = !is_nonnegative(c.potential);
  bool direct = c.method != Method::matching;
  const bool fit = c.method != Method::integral;
  if (attractive && c.method == Method::integral)
    throw PreconditionError("the zero-energy integrals for a and b require V >= 0; use --method matching");
  if (attractive && direct) {
    direct = false;
    t.diagnostics["note"] = "V < 0 somewhere: direct integrals skipped, low-k fit only";
  }
  t.diagnostics["potential"] = c.potential.describe();

  auto emit = [&](const EffectiveRangeResult& r, const std::string& extra) {
    t.add({r.method, static_cast<long long>(l), quantity_cell(r.a), exponent_cell(r.a), quantity_cell(r.b),
           quantity_cell(r.r_eff), exponent_cell(r.r_eff.finite ? r.b : r.r_eff),
           join({r.a.note, r.b.note == r.a.note ? "" : r.b.note,
                 r.r_eff.note == r.b.note || r.r_eff.note == r.a.note ? "" : r.r_eff.note, extra})});
  };

  if (direct) {
    const RadialGrid grid = solver_grid(c);
    const EffectiveRangeResult r = direct_effective_range(c.potential, l, grid);
    emit(r, "");
    t.diagnostics["direct"] = {{"a_form_disagreement", r.a_consistency}, {"grid_nodes", grid.size()},
                               {"r_max", grid.r_max()}};
  }
  if (fit) {
    LowKFitOptions opt;
    opt.phase_abs_error = c.tolerances.phase_abs_error;
    opt.phase_rel_error = c.tolerances.phase_rel_error;
    opt.contamination_limit = c.tolerances.contamination_limit;
    const std::vector<double> ks = c.k_grid_explicit ? c.k_grid.values() : default_low_k_grid(c.potential);
    try {
      const EffectiveRangeResult r = low_k_expansion(c.potential, l, ks, opt);
      emit(r, "");
      const LowKFit& f = *r.fit;
      t.diagnostics["fit"] = {{"window_k_max", f.window_k_max},
                              {"points_used", f.points_used},
                              {"points_dropped", f.points_dropped},
                              {"relative_residual", f.relative_residual},
                              {"condition_number", f.condition_number},
                              {"contamination", f.contamination},
                              {"nonanalytic_coefficient", f.nonanalytic},
                              {"k_min", ks.front()},
                              {"k_max", ks.back()}};
    } catch (const PreconditionError& e) {
      if (!direct) throw;
      // The direct row stands on its own when the phases carry no low-k information (e.g. V = 0).
      EffectiveRangeResult r;
      r.ell = l;
      r.method = "low_k_fit";
      r.a = r.b = r.r_eff = Quantity::not_defined("fit unavailable: " + std::string(e.what()));
      emit(r, "");
    }
  }
  return out;
}

Outcome cmd_scan(const RunConfig& c) {
  const std::vector<double> ladder = c.scan.R_values.empty() ? theorem_scan_ladder() : c.scan.R_values;
  const TheoremMatrix m = theorem_matrix(c.scan.ell_list, c.scan.s_list, c.scan.amplitude, ladder);
  Outcome out;
  Table& t = out.table;
  t.columns = {{"ell", ""},
               {"s", ""},
               {"predicted_a_finite", ""},
               {"observed_a_finite", ""},
               {"a_growth_exponent", ""},
               {"a_predicted_exponent", ""},
               {"predicted_r_finite", ""},
               {"observed_r_finite", ""},
               {"r_growth_exponent", ""},
               {"r_predicted_exponent", ""},
               {"near_threshold", ""},
               {"exponent_checked", ""},
               {"matches", ""}};
  auto exponent = [](const ConvergenceScan& sc) -> Cell {
    if (sc.verdict == Verdict::divergent) return sc.growth_exponent;
    return std::string("convergent");
  };
  for (const TheoremCell& cell : m.cells)
    t.add({static_cast<long long>(cell.ell), cell.s, cell.predicted_a, cell.observed_a, exponent(cell.scan_a),
           cell.scan_a.predicted_exponent, cell.predicted_r, cell.observed_r,
           cell.r_scanned ? exponent(cell.scan_r) : Cell(std::string("not scanned")),
           2.0 * cell.ell + 5.0 - cell.s, cell.near_threshold, cell.exponent_checked, cell.matches});
  t.diagnostics["potential"] = "power_tail{amplitude, core=1, s}";
  t.diagnostics["amplitude"] = c.scan.amplitude;
  t.diagnostics["R_values"] = ladder;
  t.diagnostics["passed"] = m.passed;
  out.status = m.passed ? 0 : 1;
  return out;
}

Outcome cmd_levinson(const RunConfig& c) {
  const RadialGrid grid = solver_grid(c);
  const LevinsonResult r = levinson(c.potential, c.ell, grid, c.tolerances.levinson_k_min);
  Outcome out;
  Table& t = out.table;
  t.columns = {{"ell", ""},          {"n", ""},        {"node_count", ""},          {"k_min", "1/length"},
               {"delta_kmin", "rad"}, {"residual", "rad"}, {"resonance_indicator", ""}, {"resonance_flag", ""}};
  t.add({static_cast<long long>(c.ell), static_cast<long long>(r.n), static_cast<long long>(r.node_count),
         c.tolerances.levinson_k_min, r.delta_at_kmin, r.residual, r.resonance_indicator, r.resonance_flag});
  t.diagnostics["potential"] = c.potential.describe();
  t.diagnostics["gammas"] = r.gammas;
  t.diagnostics["residual_tolerance"] = c.tolerances.levinson_residual;
  out.status = std::abs(r.residual) <= c.tolerances.levinson_residual ? 0 : 1;
  return out;
}

Outcome cmd_bound_states(const RunConfig& c) {
  const RadialGrid grid = solver_grid(c);
  const BoundStateSpectrum s = bound_states(c.potential, c.ell, grid);
  Outcome out;
  Table& t = out.table;
  t.columns = {{"index", ""}, {"gamma", "1/length"}, {"energy", "1/length^2"}};
  for (std::size_t i = 0; i < s.gammas.size(); ++i)
    t.add({static_cast<long long>(i), s.gammas[i], -s.gammas[i] * s.gammas[i]});
  t.diagnostics["potential"] = c.potential.describe();
  t.diagnostics["node_count"] = s.node_count;
  return out;
}

Outcome cmd_validate(const RunConfig&) {
  const std::vector<Check> checks = run_validation();
  Outcome out;
  Table& t = out.table;
  t.columns = {{"module", ""}, {"check", ""}, {"measured", ""}, {"limit", ""}, {"status", ""}, {"detail", ""}};
  int failed = 0;
  for (const Check& ch : checks) {
    t.add({ch.module, ch.name, ch.measured, ch.limit, std::string(ch.passed ? "PASS" : "FAIL"), ch.detail});
    if (!ch.passed) ++failed;
  }
  t.diagnostics["checks"] = checks.size();
  t.diagnostics["failed"] = failed;
  out.status = failed == 0 ? 0 : 1;
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const IndeterminateError*>(&e))
    return 2;
  return 1;
}

int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  bool created = false;
  try {
    validate(config);
    worker_count();  // rejects a malformed ERANGE_THREADS before any work
    if (!config.out_path.empty()) {
      created = !fs::exists(config.out_path);
      std::ofstream probe(config.out_path, std::ios::app);
      if (!probe) throw ConfigError("output.path: cannot write '" + config.out_path + "'");
    }
    Outcome o;
    switch (command) {
      case Command::phase_shift: o = cmd_phase_shift(config); break;
      case Command::effective_range: o = cmd_effective_range(config); break;
      case Command::scan: o = cmd_scan(config); break;
      case Command::levinson: o = cmd_levinson(config); break;
      case Command::bound_states: o = cmd_bound_states(config); break;
      case Command::validate: o = cmd_validate(config); break;
    }
    std::ostringstream body;
    if (config.format == Format::csv)
      write_csv(body, o.table);
    else
      write_json(body, o.table, config);
    if (config.out_path.empty()) {
      out << body.str();
    } else {
      std::ofstream f(config.out_path, std::ios::trunc);
      f << body.str();
      if (!f) throw NumericError("failed writing '" + config.out_path + "'");
    }
    if (config.format == Format::csv && !o.table.diagnostics.empty())
      err << "diagnostics: " << o.table.diagnostics.dump() << '\n';
    return o.status;
  } catch (const std::exception& e) {
    if (created) {
      std::error_code ec;
      fs::remove(config.out_path, ec);
    }
    err << "erange " << to_string(command) << ": error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace erange::cli
