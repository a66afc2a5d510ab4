#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftframe/fiber_field.hpp"
#include "shiftframe/finite_dim.hpp"
#include "shiftframe/range_operator.hpp"

namespace shiftframe {

/// How the operator of an instance is described in JSON.
///
/// Explicit:   "operator": [ [re,im] x n^2 row-major, per grid point ]
/// Diagonal:   {"kind": "diagonal", "eigenvalue_fields": [field, ...]}
///             builds diag(l_1(w), ..., l_q(w), 0, ...) on the leading
///             window coordinates
/// Conjugated: {"kind": "conjugated", "unitary_seed": u,
///              "eigenvalue_fields": [field, ...]}
///             builds B U(w) diag(l(w)) U(w)* B* on J(omega), with U(w) a
///             seeded random unitary and one field per dimension of J
/// A field is either a single [re,im] (constant) or one [re,im] per grid
/// point.
struct OperatorSpec {
  enum class Kind { Explicit, Diagonal, Conjugated };
  Kind kind = Kind::Explicit;
  std::vector<ComplexMatrix> matrices;                  // Explicit
  std::vector<std::vector<Complex>> eigenvalue_fields;  // builders
  std::uint64_t unitary_seed = 0;                       // Conjugated
};

/// A parsed instance document: everything needed to assemble a DSInstance.
struct InstanceDocument {
  OmegaGrid grid;
  FiberWindow window;
  std::vector<FiberField> generators;
  std::vector<FiberField> functions;
  OperatorSpec op;
  nlohmann::json meta;  // free-form provenance, preserved on round-trip
};

InstanceDocument parse_instance(const nlohmann::json& doc);
nlohmann::json instance_to_json(const InstanceDocument& doc);

/// Realizes the operator spec against the range function built from the
/// instance generators; validates invariance.
RangeOperatorField realize_operator(const InstanceDocument& doc,
                                    const RangeFunctionField& range,
                                    double invariance_tol =
                                        kDefaultInvarianceTol);

/// Finite-dimensional instance document:
/// {"operator": [re,im] x n^2 row-major, "vectors": [[re,im] x n, ...],
///  "k": int (optional, default n-1)}
IterateSystem parse_fd_instance(const nlohmann::json& doc);
nlohmann::json fd_instance_to_json(const IterateSystem& sys);

/// Canonical serialization: sorted keys and shortest round-trip numbers, so
/// identical documents give identical bytes.
std::string canonical_dump(const nlohmann::json& doc);

/// FNV-1a 64-bit digest of the canonical serialization.
std::string instance_digest(const nlohmann::json& doc);

nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json load_json_file(const std::string& path);

}  // namespace shiftframe
