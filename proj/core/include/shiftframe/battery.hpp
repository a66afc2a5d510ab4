#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftframe/finite_dim.hpp"
#include "shiftframe/generate.hpp"
#include "shiftframe/rng.hpp"

namespace shiftframe {

/// Result of one randomized property suite. Every failing instance records
/// the parameters needed to regenerate it.
struct SuiteResult {
  std::string name;
  int count = 0;
  int pass = 0;
  int fail = 0;
  std::vector<nlohmann::json> failures;

  bool ok() const { return fail == 0; }
};

/// A seeded finite-dimensional instance with known spectral structure.
struct FdInstance {
  IterateSystem sys;
  std::vector<Complex> planted_eigenvalues;  // distinct values
  bool normal = true;
  bool planted_zero = false;
};

/// Draws an operator with prescribed distinct eigenvalues (pairwise
/// separation >= 0.1) and random vectors. Normal operators are built by
/// unitary conjugation, non-normal ones by a bounded-condition similarity.
/// max_multiplicity limits how many times one eigenvalue repeats (0 = no
/// limit); plant_zero removes the component of every vector on one adjoint
/// eigenspace, which destroys the frame property on both sides of the
/// equivalence.
FdInstance random_fd_instance(Pcg32& rng, int n, int m, bool normal,
                              bool plant_zero, int max_multiplicity = 0);

// Randomized property suites. Each instance is derived deterministically
// from (seed, suite, index).
SuiteResult suite_fd_equivalence(int count, std::uint64_t seed);
SuiteResult suite_fd_necessary_bracket(int count, std::uint64_t seed);
SuiteResult suite_interpolation_norms(int count, std::uint64_t seed);
SuiteResult suite_fd_sufficient_bracket(int count, std::uint64_t seed);
SuiteResult suite_sdiag_structure(int count, std::uint64_t seed);
SuiteResult suite_fiber_characterization(int count, int adversarial_count,
                                         std::uint64_t seed);
SuiteResult suite_constant_reduction(int count, std::uint64_t seed);

struct BatterySummary {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<SuiteResult> suites;
  bool all_pass = true;
};

BatterySummary run_battery(int count, std::uint64_t seed);
nlohmann::json battery_to_json(const BatterySummary& summary);

}  // namespace shiftframe
