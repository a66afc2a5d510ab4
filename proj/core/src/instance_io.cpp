#include "shiftframe/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/generate.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/rng.hpp"

namespace shiftframe {

using nlohmann::json;

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw SchemaError(where + ": expected a [re, im] pair");
  }
  double re = j[0].get<double>();
  double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw SchemaError(where + ": non-finite complex entry");
  }
  return {re, im};
}

namespace {

const json& require_field(const json& doc, const char* name,
                          const std::string& where) {
  auto it = doc.find(name);
  if (it == doc.end()) {
    throw SchemaError(where + ": missing field '" + name + "'");
  }
  return *it;
}

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    throw SchemaError(where + ": expected an integer");
  }
  return j.get<int>();
}

ComplexVector parse_fiber(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    std::ostringstream os;
    os << where << ": expected " << n << " complex entries";
    throw SchemaError(os.str());
  }
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

FiberField parse_field(const json& j, const OmegaGrid& grid,
                       const FiberWindow& window, const std::string& where) {
  FiberField f;
  f.grid = grid;
  f.window = window;
  std::size_t points = grid.size();
  if (!j.is_array() || j.size() != points) {
    std::ostringstream os;
    os << where << ": expected one fiber per grid point (" << points << ")";
    throw SchemaError(os.str());
  }
  int n = window.fiber_dim(grid.dim);
  f.values.reserve(points);
  for (std::size_t g = 0; g < points; ++g) {
    f.values.push_back(
        parse_fiber(j[g], n, where + "[" + std::to_string(g) + "]"));
  }
  return f;
}

json field_to_json(const FiberField& f) {
  json out = json::array();
  for (const ComplexVector& v : f.values) {
    json fiber = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      fiber.push_back(complex_to_json(v(i)));
    }
    out.push_back(std::move(fiber));
  }
  return out;
}

// A scalar field is either a single [re,im] (constant) or one per point.
std::vector<Complex> parse_scalar_field(const json& j, std::size_t points,
                                        const std::string& where) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return std::vector<Complex>(points, complex_from_json(j, where));
  }
  if (!j.is_array() || j.size() != points) {
    std::ostringstream os;
    os << where << ": expected [re,im] or one value per grid point ("
       << points << ")";
    throw SchemaError(os.str());
  }
  std::vector<Complex> field(points);
  for (std::size_t g = 0; g < points; ++g) {
    field[g] = complex_from_json(j[g], where + "[" + std::to_string(g) + "]");
  }
  return field;
}

ComplexMatrix parse_matrix(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n) {
    std::ostringstream os;
    os << where << ": expected " << n * n << " row-major complex entries";
    throw SchemaError(os.str());
  }
  ComplexMatrix m(n, n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      m(row, col) = complex_from_json(
          j[static_cast<std::size_t>(row * n + col)],
          where + "[" + std::to_string(row * n + col) + "]");
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      out.push_back(complex_to_json(m(row, col)));
    }
  }
  return out;
}

OperatorSpec parse_operator_spec(const json& j, const OmegaGrid& grid,
                                 const FiberWindow& window) {
  OperatorSpec spec;
  std::size_t points = grid.size();
  int n = window.fiber_dim(grid.dim);

  if (j.is_array()) {
    spec.kind = OperatorSpec::Kind::Explicit;
    if (j.size() != points) {
      throw SchemaError("$.operator: expected one matrix per grid point");
    }
    spec.matrices.reserve(points);
    for (std::size_t g = 0; g < points; ++g) {
      spec.matrices.push_back(
          parse_matrix(j[g], n, "$.operator[" + std::to_string(g) + "]"));
    }
    return spec;
  }

  if (!j.is_object()) {
    throw SchemaError("$.operator: expected an array or a builder object");
  }
  const json& kind = require_field(j, "kind", "$.operator");
  const json& fields =
      require_field(j, "eigenvalue_fields", "$.operator");
  if (!fields.is_array() || fields.empty()) {
    throw SchemaError("$.operator.eigenvalue_fields: expected a nonempty array");
  }
  for (std::size_t s = 0; s < fields.size(); ++s) {
    spec.eigenvalue_fields.push_back(parse_scalar_field(
        fields[s], points,
        "$.operator.eigenvalue_fields[" + std::to_string(s) + "]"));
  }
  if (kind == "diagonal") {
    spec.kind = OperatorSpec::Kind::Diagonal;
    if (static_cast<int>(spec.eigenvalue_fields.size()) > n) {
      throw SchemaError(
          "$.operator: more eigenvalue fields than window coordinates");
    }
  } else if (kind == "conjugated") {
    spec.kind = OperatorSpec::Kind::Conjugated;
    spec.unitary_seed =
        require_field(j, "unitary_seed", "$.operator").get<std::uint64_t>();
  } else {
    throw SchemaError("$.operator.kind: expected 'diagonal' or 'conjugated'");
  }
  return spec;
}

json operator_spec_to_json(const OperatorSpec& spec) {
  if (spec.kind == OperatorSpec::Kind::Explicit) {
    json out = json::array();
    for (const ComplexMatrix& m : spec.matrices) {
      out.push_back(matrix_to_json(m));
    }
    return out;
  }
  json out;
  out["kind"] =
      spec.kind == OperatorSpec::Kind::Diagonal ? "diagonal" : "conjugated";
  if (spec.kind == OperatorSpec::Kind::Conjugated) {
    out["unitary_seed"] = spec.unitary_seed;
  }
  json fields = json::array();
  for (const auto& field : spec.eigenvalue_fields) {
    json values = json::array();
    for (const Complex& z : field) values.push_back(complex_to_json(z));
    fields.push_back(std::move(values));
  }
  out["eigenvalue_fields"] = std::move(fields);
  return out;
}

}  // namespace

InstanceDocument parse_instance(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$: expected a JSON object");
  InstanceDocument out;

  const json& grid = require_field(doc, "grid", "$");
  out.grid.dim = require_int(require_field(grid, "dim", "$.grid"),
                             "$.grid.dim");
  out.grid.points_per_axis = require_int(
      require_field(grid, "points_per_axis", "$.grid"),
      "$.grid.points_per_axis");
  const json& window = require_field(doc, "window", "$");
  out.window.radius = require_int(require_field(window, "radius", "$.window"),
                                  "$.window.radius");
  validate_layout(out.grid, out.window);

  const json& generators = require_field(doc, "generators", "$");
  if (!generators.is_array() || generators.empty()) {
    throw SchemaError("$.generators: expected a nonempty array of fields");
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    out.generators.push_back(
        parse_field(generators[i], out.grid, out.window,
                    "$.generators[" + std::to_string(i) + "]"));
  }

  const json& functions = require_field(doc, "functions", "$");
  if (!functions.is_array() || functions.empty()) {
    throw SchemaError("$.functions: expected a nonempty array of fields");
  }
  for (std::size_t i = 0; i < functions.size(); ++i) {
    out.functions.push_back(
        parse_field(functions[i], out.grid, out.window,
                    "$.functions[" + std::to_string(i) + "]"));
  }

  out.op = parse_operator_spec(require_field(doc, "operator", "$"), out.grid,
                               out.window);
  if (doc.contains("meta")) out.meta = doc["meta"];
  return out;
}

json instance_to_json(const InstanceDocument& doc) {
  json out;
  out["grid"] = {{"dim", doc.grid.dim},
                 {"points_per_axis", doc.grid.points_per_axis}};
  out["window"] = {{"radius", doc.window.radius}};
  json generators = json::array();
  for (const FiberField& g : doc.generators) {
    generators.push_back(field_to_json(g));
  }
  out["generators"] = std::move(generators);
  json functions = json::array();
  for (const FiberField& f : doc.functions) {
    functions.push_back(field_to_json(f));
  }
  out["functions"] = std::move(functions);
  out["operator"] = operator_spec_to_json(doc.op);
  if (!doc.meta.is_null()) out["meta"] = doc.meta;
  return out;
}

RangeOperatorField realize_operator(const InstanceDocument& doc,
                                    const RangeFunctionField& range,
                                    double invariance_tol) {
  const std::size_t points = doc.grid.size();
  const int n = doc.window.fiber_dim(doc.grid.dim);
  std::vector<ComplexMatrix> matrices;
  matrices.reserve(points);

  switch (doc.op.kind) {
    case OperatorSpec::Kind::Explicit:
      matrices = doc.op.matrices;
      break;
    case OperatorSpec::Kind::Diagonal: {
      const auto& fields = doc.op.eigenvalue_fields;
      for (std::size_t g = 0; g < points; ++g) {
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        for (std::size_t s = 0; s < fields.size(); ++s) {
          m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) =
              fields[s][g];
        }
        matrices.push_back(std::move(m));
      }
      break;
    }
    case OperatorSpec::Kind::Conjugated: {
      const auto& fields = doc.op.eigenvalue_fields;
      const int q = static_cast<int>(fields.size());
      Pcg32 rng(doc.op.unitary_seed, /*stream=*/0x5eed);
      for (std::size_t g = 0; g < points; ++g) {
        if (range.dim_at(g) != q) {
          std::ostringstream os;
          os << "conjugated operator: " << q << " eigenvalue fields but dim "
             << "J = " << range.dim_at(g) << " at grid point " << g;
          throw InfeasibleSpecError(os.str());
        }
        ComplexMatrix u = random_unitary(q, rng);
        ComplexMatrix d = ComplexMatrix::Zero(q, q);
        for (int s = 0; s < q; ++s) d(s, s) = fields[s][g];
        const ComplexMatrix& basis = range.bases[g];
        matrices.push_back(basis * u * d * u.adjoint() * basis.adjoint());
      }
      break;
    }
  }
  return make_range_operator(range, std::move(matrices), invariance_tol);
}

IterateSystem parse_fd_instance(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$: expected a JSON object");
  const json& op = require_field(doc, "operator", "$");
  if (!op.is_array() || op.empty()) {
    throw SchemaError("$.operator: expected a flat row-major complex matrix");
  }
  int n = static_cast<int>(std::llround(std::sqrt(double(op.size()))));
  if (n * n != static_cast<int>(op.size())) {
    throw SchemaError("$.operator: entry count is not a perfect square");
  }

  IterateSystem sys;
  sys.op = parse_matrix(op, n, "$.operator");
  const json& vectors = require_field(doc, "vectors", "$");
  if (!vectors.is_array() || vectors.empty()) {
    throw SchemaError("$.vectors: expected a nonempty array of vectors");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    sys.vectors.push_back(parse_fiber(
        vectors[i], n, "$.vectors[" + std::to_string(i) + "]"));
  }
  if (doc.contains("k")) {
    sys.iteration_count = require_int(doc["k"], "$.k");
    if (sys.iteration_count < 0) throw SchemaError("$.k: must be >= 0");
  } else {
    sys.iteration_count = n - 1;
  }
  return sys;
}

json fd_instance_to_json(const IterateSystem& sys) {
  json out;
  out["operator"] = matrix_to_json(sys.op);
  json vectors = json::array();
  for (const ComplexVector& v : sys.vectors) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      entries.push_back(complex_to_json(v(i)));
    }
    vectors.push_back(std::move(entries));
  }
  out["vectors"] = std::move(vectors);
  out["k"] = sys.iteration_count;
  return out;
}

std::string canonical_dump(const json& doc) {
  // nlohmann objects are key-sorted maps and numbers print as the shortest
  // decimal that round-trips, so dump() is already canonical.
  return doc.dump(2);
}

std::string instance_digest(const json& doc) {
  std::string bytes = canonical_dump(doc);
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << hash;
  return os.str();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open file: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("JSON parse error in ") + path + ": " +
                      e.what());
  }
  return doc;
}

}  // namespace shiftframe
