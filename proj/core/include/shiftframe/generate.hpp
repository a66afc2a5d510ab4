#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftframe/instance_io.hpp"
#include "shiftframe/rng.hpp"

namespace shiftframe {

/// One eigenvalue field of a generated operator: a base point in C plus an
/// optional smooth modulation of the given amplitude. collision_fraction
/// collapses the field onto field 0 on a seeded random subset of the grid,
/// which makes the number of distinct eigenvalues vary across points.
struct EigenvalueFieldRecipe {
  Complex base{0.0, 0.0};
  double amplitude = 0.0;
  double collision_fraction = 0.0;
};

/// Deterministic recipe for a fiber instance: identical specs produce
/// byte-identical instance documents. The construction guarantees a normal
/// operator and a pointwise eigenvalue separation of at least gap_target
/// between non-identical fields.
struct InstanceSpec {
  std::uint64_t seed = 0;
  int dim = 1;
  int points_per_axis = 256;
  int radius = 4;
  int num_generators = 2;
  int num_functions = 1;
  std::vector<EigenvalueFieldRecipe> fields;  // empty: auto-placed
  int num_fields = 2;                         // used when fields is empty
  double gap_target = 0.1;
  double field_amplitude = 0.0;  // amplitude for auto-placed fields
  int trig_degree = 2;           // modulation bandwidth
  bool rotate_eigenvectors = true;  // false: eigenvectors = generator basis
  int planted_zero_field = -1;  // functions lose this field's component
};

InstanceDocument generate_instance(const InstanceSpec& spec);

nlohmann::json spec_to_json(const InstanceSpec& spec);
InstanceSpec spec_from_json(const nlohmann::json& doc);

/// The packaged worked example: constant two-dimensional fibers with the
/// operator diag(1, -1) on them and the function (e0 + e1)/sqrt(2).
InstanceDocument diag_example();

/// Instance presets addressable from the command line.
InstanceDocument make_preset(const std::string& name);

/// QR-based random unitary with canonical column phases; a deterministic
/// function of the stream state.
ComplexMatrix random_unitary(int n, Pcg32& rng);

ComplexVector random_gaussian_vector(int n, Pcg32& rng);

}  // namespace shiftframe
