#include "shiftframe/generate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/linalg.hpp"

namespace shiftframe {

using nlohmann::json;

ComplexMatrix random_unitary(int n, Pcg32& rng) {
  ComplexMatrix gauss(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      gauss(row, col) = rng.complex_gaussian();
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(gauss);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Absorb the R diagonal phases so the unitary is a canonical function of
  // the Gaussian draw.
  for (int col = 0; col < n; ++col) {
    Complex d = r(col, col);
    double mag = std::abs(d);
    if (mag > 0) q.col(col) *= d / mag;
  }
  return q;
}

ComplexVector random_gaussian_vector(int n, Pcg32& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  return v;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Multi-index sweep over {-D..D}^d excluding 0, lexicographic.
std::vector<std::vector<int>> modulation_degrees(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(dim, -degree);
  while (true) {
    bool all_zero = std::all_of(idx.begin(), idx.end(),
                                [](int v) { return v == 0; });
    if (!all_zero) out.push_back(idx);
    int a = dim - 1;
    while (a >= 0 && idx[a] == degree) {
      idx[a] = -degree;
      --a;
    }
    if (a < 0) break;
    ++idx[a];
  }
  return out;
}

// Random trigonometric polynomial evaluated on the grid, normalized to unit
// sup norm (plus a constant term when requested).
std::vector<Complex> random_trig_field(const OmegaGrid& grid, int degree,
                                       Pcg32& rng, bool normalize) {
  auto degrees = modulation_degrees(grid.dim, degree);
  std::vector<Complex> coeffs(degrees.size());
  for (auto& c : coeffs) c = rng.complex_gaussian();

  std::vector<Complex> values(grid.size(), Complex(0.0, 0.0));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> omega = grid.point(g);
    for (std::size_t t = 0; t < degrees.size(); ++t) {
      double phase = 0.0;
      for (int a = 0; a < grid.dim; ++a) {
        phase += omega[a] * degrees[t][a];
      }
      values[g] += coeffs[t] * std::polar(1.0, kTwoPi * phase);
    }
  }
  if (normalize) {
    double sup = 0.0;
    for (const Complex& v : values) sup = std::max(sup, std::abs(v));
    if (sup > 0) {
      for (Complex& v : values) v /= sup;
    }
  }
  return values;
}

std::vector<EigenvalueFieldRecipe> auto_place_fields(const InstanceSpec& spec,
                                                     Pcg32& rng) {
  std::vector<EigenvalueFieldRecipe> fields;
  double amp = spec.field_amplitude;
  // Bases must stay separated even after modulation; 5% slack keeps the
  // measured gap strictly above the target.
  double needed = 1.05 * spec.gap_target + 2.0 * amp;
  for (int s = 0; s < spec.num_fields; ++s) {
    EigenvalueFieldRecipe recipe;
    recipe.amplitude = amp;
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      Complex candidate(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
      placed = true;
      for (const auto& other : fields) {
        if (std::abs(candidate - other.base) < needed) {
          placed = false;
          break;
        }
      }
      if (placed) recipe.base = candidate;
    }
    if (!placed) {
      throw InfeasibleSpecError(
          "generate_instance: could not place eigenvalue field bases with "
          "the requested separation");
    }
    fields.push_back(recipe);
  }
  return fields;
}

}  // namespace

InstanceDocument generate_instance(const InstanceSpec& spec) {
  OmegaGrid grid{spec.dim, spec.points_per_axis};
  FiberWindow window{spec.radius};
  validate_layout(grid, window);
  const int n = window.fiber_dim(grid.dim);
  const std::size_t points = grid.size();

  if (spec.num_generators < 1 || spec.num_functions < 1) {
    throw InfeasibleSpecError(
        "generate_instance: need at least one generator and one function");
  }
  if (spec.num_generators > n) {
    throw InfeasibleSpecError(
        "generate_instance: more generators than fiber dimensions");
  }
  if (!(spec.gap_target > 0.0)) {
    throw InfeasibleSpecError("generate_instance: gap target must be > 0");
  }

  Pcg32 rng(spec.seed, /*stream=*/0x10);

  // 1. Eigenvalue fields.
  std::vector<EigenvalueFieldRecipe> recipes = spec.fields;
  if (recipes.empty()) {
    recipes = auto_place_fields(spec, rng);
  }
  const int r = static_cast<int>(recipes.size());
  if (r < 1 || r > spec.num_generators) {
    throw InfeasibleSpecError(
        "generate_instance: eigenvalue field count must be in "
        "1..num_generators");
  }
  for (int s = 0; s < r; ++s) {
    for (int t = s + 1; t < r; ++t) {
      double sep = std::abs(recipes[s].base - recipes[t].base) -
                   recipes[s].amplitude - recipes[t].amplitude;
      if (sep < spec.gap_target) {
        std::ostringstream os;
        os << "generate_instance: fields " << s << " and " << t
           << " cannot maintain the gap target " << spec.gap_target;
        throw InfeasibleSpecError(os.str());
      }
    }
  }
  if (spec.planted_zero_field >= r) {
    throw InfeasibleSpecError(
        "generate_instance: planted_zero_field is out of range");
  }
  if (spec.planted_zero_field >= 0 &&
      recipes[spec.planted_zero_field].collision_fraction > 0.0) {
    throw InfeasibleSpecError(
        "generate_instance: the planted field must not collide");
  }

  std::vector<std::vector<Complex>> field_values(r);
  for (int s = 0; s < r; ++s) {
    if (recipes[s].amplitude > 0.0) {
      auto modulation = random_trig_field(grid, spec.trig_degree, rng, true);
      field_values[s].resize(points);
      for (std::size_t g = 0; g < points; ++g) {
        field_values[s][g] =
            recipes[s].base + recipes[s].amplitude * modulation[g];
      }
    } else {
      field_values[s].assign(points, recipes[s].base);
    }
  }
  // Collision masks collapse later fields onto field 0 pointwise.
  for (int s = 1; s < r; ++s) {
    if (recipes[s].collision_fraction <= 0.0) continue;
    for (std::size_t g = 0; g < points; ++g) {
      if (rng.uniform() < recipes[s].collision_fraction) {
        field_values[s][g] = field_values[0][g];
      }
    }
  }

  // 2. Generators and the range function they span.
  InstanceDocument doc;
  doc.grid = grid;
  doc.window = window;
  const int q = spec.num_generators;
  for (int t = 0; t < q; ++t) {
    FiberField gen;
    gen.grid = grid;
    gen.window = window;
    gen.values.assign(points, ComplexVector::Zero(n));
    for (int coord = 0; coord < n; ++coord) {
      auto component = random_trig_field(grid, spec.trig_degree, rng, false);
      for (std::size_t g = 0; g < points; ++g) {
        gen.values[g](coord) = component[g];
      }
    }
    doc.generators.push_back(std::move(gen));
  }
  RangeFunctionField range = range_function_from_generators(doc.generators);
  for (std::size_t g = 0; g < points; ++g) {
    if (range.dim_at(g) != q) {
      std::ostringstream os;
      os << "generate_instance: generators lost rank at grid point " << g
         << " (dim J = " << range.dim_at(g) << ", expected " << q << ")";
      throw InfeasibleSpecError(os.str());
    }
  }

  // 3. Operator: eigenvector rotation per point, diagonal of field values.
  // Direction t carries field min(t, r-1), so the last field may have
  // multiplicity.
  std::vector<ComplexMatrix> rotations(points);
  for (std::size_t g = 0; g < points; ++g) {
    rotations[g] = spec.rotate_eigenvectors ? random_unitary(q, rng)
                                            : ComplexMatrix::Identity(q, q);
  }
  doc.op.kind = OperatorSpec::Kind::Explicit;
  doc.op.matrices.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    ComplexMatrix d = ComplexMatrix::Zero(q, q);
    for (int t = 0; t < q; ++t) {
      d(t, t) = field_values[std::min(t, r - 1)][g];
    }
    const ComplexMatrix& basis = range.bases[g];
    const ComplexMatrix& u = rotations[g];
    doc.op.matrices[g] =
        basis * u * d * u.adjoint() * basis.adjoint();
  }

  // 4. Functions, expressed in the eigenvector frame so a planted zero
  // removes exactly one field's component.
  for (int i = 0; i < spec.num_functions; ++i) {
    FiberField f;
    f.grid = grid;
    f.window = window;
    f.values.assign(points, ComplexVector::Zero(n));
    std::vector<std::vector<Complex>> coords(q);
    for (int t = 0; t < q; ++t) {
      if (spec.planted_zero_field >= 0 &&
          std::min(t, r - 1) == spec.planted_zero_field) {
        coords[t].assign(points, Complex(0.0, 0.0));
      } else {
        coords[t] = random_trig_field(grid, spec.trig_degree, rng, false);
      }
    }
    for (std::size_t g = 0; g < points; ++g) {
      ComplexVector gamma(q);
      for (int t = 0; t < q; ++t) gamma(t) = coords[t][g];
      f.values[g] = range.bases[g] * (rotations[g] * gamma);
    }
    doc.functions.push_back(std::move(f));
  }

  doc.meta = json{{"spec", spec_to_json(spec)}};
  return doc;
}

json spec_to_json(const InstanceSpec& spec) {
  json fields = json::array();
  for (const auto& f : spec.fields) {
    fields.push_back({{"base", complex_to_json(f.base)},
                      {"amplitude", f.amplitude},
                      {"collision_fraction", f.collision_fraction}});
  }
  return json{{"seed", spec.seed},
              {"dim", spec.dim},
              {"points_per_axis", spec.points_per_axis},
              {"radius", spec.radius},
              {"num_generators", spec.num_generators},
              {"num_functions", spec.num_functions},
              {"fields", std::move(fields)},
              {"num_fields", spec.num_fields},
              {"gap_target", spec.gap_target},
              {"field_amplitude", spec.field_amplitude},
              {"trig_degree", spec.trig_degree},
              {"rotate_eigenvectors", spec.rotate_eigenvectors},
              {"planted_zero_field", spec.planted_zero_field}};
}

InstanceSpec spec_from_json(const json& doc) {
  InstanceSpec spec;
  if (!doc.is_object()) throw SchemaError("spec: expected a JSON object");
  auto get = [&](const char* name, auto& target) {
    if (doc.contains(name)) target = doc[name].get<std::decay_t<decltype(target)>>();
  };
  get("seed", spec.seed);
  get("dim", spec.dim);
  get("points_per_axis", spec.points_per_axis);
  get("radius", spec.radius);
  get("num_generators", spec.num_generators);
  get("num_functions", spec.num_functions);
  get("num_fields", spec.num_fields);
  get("gap_target", spec.gap_target);
  get("field_amplitude", spec.field_amplitude);
  get("trig_degree", spec.trig_degree);
  get("rotate_eigenvectors", spec.rotate_eigenvectors);
  get("planted_zero_field", spec.planted_zero_field);
  if (doc.contains("fields")) {
    for (const json& f : doc["fields"]) {
      EigenvalueFieldRecipe recipe;
      recipe.base = complex_from_json(f.at("base"), "spec.fields.base");
      if (f.contains("amplitude")) recipe.amplitude = f["amplitude"];
      if (f.contains("collision_fraction")) {
        recipe.collision_fraction = f["collision_fraction"];
      }
      spec.fields.push_back(recipe);
    }
  }
  return spec;
}

InstanceDocument diag_example() {
  InstanceDocument doc;
  doc.grid = {1, 16};
  doc.window = {1};  // fibers in C^3
  const std::size_t points = doc.grid.size();
  const int n = 3;

  auto constant_field = [&](const ComplexVector& v) {
    FiberField f;
    f.grid = doc.grid;
    f.window = doc.window;
    f.values.assign(points, v);
    return f;
  };

  ComplexVector e0 = ComplexVector::Zero(n);
  e0(0) = 1.0;
  ComplexVector e1 = ComplexVector::Zero(n);
  e1(1) = 1.0;
  doc.generators.push_back(constant_field(e0));
  doc.generators.push_back(constant_field(e1));

  const double inv_sqrt2 = 0.70710678118654752440;
  ComplexVector f = ComplexVector::Zero(n);
  f(0) = inv_sqrt2;
  f(1) = inv_sqrt2;
  doc.functions.push_back(constant_field(f));

  doc.op.kind = OperatorSpec::Kind::Diagonal;
  doc.op.eigenvalue_fields = {
      std::vector<Complex>(points, Complex(1.0, 0.0)),
      std::vector<Complex>(points, Complex(-1.0, 0.0))};

  doc.meta = json{{"preset", "diag-example"}};
  return doc;
}

InstanceDocument make_preset(const std::string& name) {
  if (name == "diag-example") return diag_example();
  if (name == "gapped-random") {
    InstanceSpec spec;
    spec.seed = 7;
    spec.points_per_axis = 256;
    spec.radius = 4;
    spec.num_generators = 2;
    spec.num_fields = 2;
    spec.gap_target = 0.1;
    spec.field_amplitude = 0.02;
    return generate_instance(spec);
  }
  if (name == "varying-rank") {
    InstanceSpec spec;
    spec.seed = 11;
    spec.points_per_axis = 256;
    spec.radius = 4;
    spec.num_generators = 3;
    spec.fields = {{Complex(1.0, 0.4), 0.02, 0.0},
                   {Complex(-0.8, 0.3), 0.02, 0.3},
                   {Complex(0.1, -1.1), 0.02, 0.5}};
    spec.gap_target = 0.1;
    return generate_instance(spec);
  }
  throw SchemaError("unknown preset: " + name);
}

}  // namespace shiftframe
