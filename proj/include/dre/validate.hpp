#pragma once

#include <map>
#include <string>
#include <vector>

#include "dre/util.hpp"

// Randomized validator suites exercising the geometric lemmas, the oracle
// equivalences, and the modification pipeline. Shared by the test binaries,
// the acceptance runner and the `validate` command.

namespace dre::validate {

struct Check {
  std::string name;
  long cases = 0;
  long violations = 0;
  std::string note;

  bool ok() const { return violations == 0; }
};

void record(std::vector<Check>& out, const std::string& name, long cases, long violations,
            const std::string& note = "");

// Closure/boundary/cluster oracle equivalences, cone and boundary behaviour,
// sub-lattice line coverage and separation, environment reproducibility and
// coupling. `exhaustive` additionally sweeps every d=2 configuration on boxes
// up to 4x4 against the oracles.
std::vector<Check> geometry_suite(long cases, uint64_t seed, bool exhaustive);

// The terrace lemma suite on randomized instances (d in {2,3},
// p in {0.3, 0.6, 0.9}).
std::vector<Check> terrace_suite(long instances, uint64_t seed);

// Slab layer-terrace clauses and the derived eta/zeta environments.
std::vector<Check> slab_suite(long instances, uint64_t seed);

// Pivotal-set equivalence against the per-site definitional oracle plus the
// corner conditions satisfied by pivotal sites under a blocking terrace.
std::vector<Check> pivotal_suite(long random_configs, uint64_t seed);

// Modification pipeline: samples (configuration, pivotal u off the
// sub-lattice) instances and verifies every certificate.
struct ModifyStats {
  long requested = 0;
  long produced = 0;
  long verified = 0;
  long fallbacks = 0;
  std::map<std::string, long> case_counts;
  std::vector<std::string> failures;  // first few diagnostics

  bool ok() const { return produced == requested && verified == produced; }
};
ModifyStats modify_suite(long instances, int d, uint64_t seed);

// Summary printing helper used by the CLI and the acceptance runner.
long print_checks(const std::vector<Check>& checks);

}  // namespace dre::validate
