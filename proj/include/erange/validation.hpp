#pragma once

#include <string>
#include <vector>

#include "erange/potential.hpp"

namespace erange {

/// One invariant evaluated numerically: passed iff measured < limit.
struct Check {
  std::string module;
  std::string name;
  double measured = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct NamedPotential {
  std::string name;
  PotentialSpec spec;
};

/// The built-in reference set: barrier, two wells, power and exponential tails,
/// a compact tabulated profile and a truncated power tail.
std::vector<NamedPotential> reference_potentials();

std::vector<Check> validate_potential();
std::vector<Check> validate_special();
std::vector<Check> validate_radial();
std::vector<Check> validate_observables();
std::vector<Check> validate_scans();

/// Every module's checks, in module order.
std::vector<Check> run_validation();

bool all_passed(const std::vector<Check>& checks);

}  // namespace erange
