#include "shiftframe/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/frame_oracle.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/pipeline.hpp"
#include "shiftframe/sdiag.hpp"

namespace shiftframe {

using nlohmann::json;

namespace {

// Suite tags keep the per-instance seed streams disjoint.
enum : std::uint64_t {
  kTagEquivalence = 0xE1,
  kTagNecessary = 0xE2,
  kTagInterpolation = 0xE3,
  kTagSufficient = 0xE4,
  kTagSdiag = 0xE5,
  kTagFiber = 0xE6,
  kTagFiberAdversarial = 0xE7,
  kTagConstant = 0xE8,
};

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t tag, int index) {
  return Pcg32::mix(seed ^ (tag << 32), static_cast<std::uint64_t>(index));
}

std::vector<Complex> place_distinct_eigenvalues(Pcg32& rng, int r,
                                                double min_sep = 0.1,
                                                double box = 1.2) {
  std::vector<Complex> values;
  for (int s = 0; s < r; ++s) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) {
        throw InfeasibleSpecError(
            "place_distinct_eigenvalues: separation target infeasible");
      }
      Complex candidate(rng.uniform(-box, box), rng.uniform(-box, box));
      bool ok = true;
      for (const Complex& other : values) {
        if (std::abs(candidate - other) < min_sep) {
          ok = false;
          break;
        }
      }
      if (ok) {
        values.push_back(candidate);
        break;
      }
    }
  }
  return values;
}

// Field index per slot; every field used at least once, none beyond
// max_multiplicity (0 = unbounded).
std::vector<int> assign_multiplicities(Pcg32& rng, int n, int r,
                                       int max_multiplicity) {
  std::vector<int> fields(n);
  std::vector<int> counts(r, 0);
  for (int t = 0; t < r; ++t) {
    fields[t] = t;
    counts[t] = 1;
  }
  for (int t = r; t < n; ++t) {
    std::vector<int> open;
    for (int s = 0; s < r; ++s) {
      if (max_multiplicity <= 0 || counts[s] < max_multiplicity) {
        open.push_back(s);
      }
    }
    int pick = open[rng.next_u32() % open.size()];
    fields[t] = pick;
    ++counts[pick];
  }
  return fields;
}

}  // namespace

FdInstance random_fd_instance(Pcg32& rng, int n, int m, bool normal,
                              bool plant_zero, int max_multiplicity) {
  int r_min = 1;
  if (max_multiplicity > 0) {
    r_min = (n + max_multiplicity - 1) / max_multiplicity;
  }
  if (plant_zero) {
    // Zeroing the only eigenspace would zero the vectors themselves; a
    // planted instance needs a second eigenspace to stay nondegenerate.
    r_min = std::max(r_min, std::min(2, n));
  }
  int r = r_min + static_cast<int>(rng.next_u32() %
                                   static_cast<std::uint32_t>(n - r_min + 1));

  FdInstance inst;
  inst.normal = normal;
  inst.planted_eigenvalues = place_distinct_eigenvalues(rng, r);
  std::vector<int> fields = assign_multiplicities(rng, n, r,
                                                  max_multiplicity);

  ComplexMatrix diag = ComplexMatrix::Zero(n, n);
  for (int t = 0; t < n; ++t) {
    diag(t, t) = inst.planted_eigenvalues[fields[t]];
  }

  ComplexMatrix frame_of_eigvecs;  // columns t span the eigenspaces
  if (normal) {
    frame_of_eigvecs = random_unitary(n, rng);
    inst.sys.op = frame_of_eigvecs * diag * frame_of_eigvecs.adjoint();
  } else {
    ComplexMatrix similarity;
    for (int attempt = 0; attempt < 200; ++attempt) {
      ComplexMatrix candidate(n, n);
      for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
          candidate(row, col) = rng.complex_gaussian();
        }
      }
      std::vector<double> sv = singular_values(candidate);
      if (sv.back() > 0 && sv.front() / sv.back() <= 50.0) {
        similarity = candidate;
        break;
      }
    }
    if (similarity.size() == 0) {
      throw InfeasibleSpecError(
          "random_fd_instance: could not draw a well-conditioned similarity");
    }
    frame_of_eigvecs = similarity;
    inst.sys.op = similarity * diag * similarity.inverse();
  }
  inst.sys.iteration_count = n - 1;

  for (int i = 0; i < m; ++i) {
    inst.sys.vectors.push_back(random_gaussian_vector(n, rng));
  }

  if (plant_zero) {
    inst.planted_zero = true;
    int pick = static_cast<int>(rng.next_u32() %
                                static_cast<std::uint32_t>(r));
    // Adjoint eigenspace for eigenvalue lambda_pick: spanned by the
    // corresponding columns of Q (normal case) or V^{-*} (similarity case).
    ComplexMatrix adjoint_frame =
        normal ? frame_of_eigvecs
               : ComplexMatrix(frame_of_eigvecs.inverse().adjoint());
    std::vector<ComplexVector> kernel_cols;
    for (int t = 0; t < n; ++t) {
      if (fields[t] == pick) kernel_cols.push_back(adjoint_frame.col(t));
    }
    ComplexMatrix kernel = orthonormal_span(kernel_cols).basis;
    for (ComplexVector& f : inst.sys.vectors) {
      f -= kernel * (kernel.adjoint() * f);
    }
  }
  return inst;
}

SuiteResult suite_fd_equivalence(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "fd-equivalence";
  result.count = count;
  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagEquivalence, i);
    Pcg32 rng(iseed);
    int n = 2 + static_cast<int>(rng.next_u32() % 5);  // 2..6
    int m = 1 + static_cast<int>(rng.next_u32() % 3);  // 1..3
    bool normal = (i % 2) == 0;
    bool plant = (i % 4) == 3;
    FdInstance inst = random_fd_instance(rng, n, m, normal, plant);

    CharacterizationResult check = characterization_check(inst.sys);
    bool pass = check.iterates_frame == check.projections_frames;
    if (plant) {
      pass = pass && !check.iterates_frame && !check.projections_frames;
    }
    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back({{"index", i},
                                 {"seed", iseed},
                                 {"n", n},
                                 {"m", m},
                                 {"normal", normal},
                                 {"planted_zero", plant}});
    }
  }
  return result;
}

SuiteResult suite_fd_necessary_bracket(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "fd-necessary-bracket";
  result.count = count;
  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagNecessary, i);
    Pcg32 rng(iseed);
    int n = 2 + static_cast<int>(rng.next_u32() % 5);
    int m = 1 + static_cast<int>(rng.next_u32() % 3);
    // Multiplicities capped by m so random vectors frame every eigenspace
    // and the hypothesis (iterates form a frame) holds generically.
    FdInstance inst = random_fd_instance(rng, n, m, true, false, m);

    CharacterizationResult check = characterization_check(inst.sys);
    bool pass = check.iterates_frame;
    if (pass) {
      double lower = check.iterate_bounds.lower;
      double upper = check.iterate_bounds.upper;
      for (const EigenvalueFrameData& e : check.per_eigenvalue) {
        FrameBounds transfer = necessary_projection_bounds(
            lower, upper, e.eigenvalue, inst.sys.iteration_count);
        pass = pass && geq_with_slack(e.bounds.lower, transfer.lower) &&
               leq_with_slack(e.bounds.upper, transfer.upper);
      }
    }
    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back(
          {{"index", i}, {"seed", iseed}, {"n", n}, {"m", m}});
    }
  }
  return result;
}

SuiteResult suite_interpolation_norms(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "interpolation-norms";
  result.count = count;
  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagInterpolation, i);
    Pcg32 rng(iseed);
    int r = 1 + static_cast<int>(rng.next_u32() % 5);  // 1..5
    int k = (r - 1) +
            static_cast<int>(rng.next_u32() %
                             static_cast<std::uint32_t>(8 - (r - 1) + 1));
    int m = 1 + static_cast<int>(rng.next_u32() % 3);
    std::vector<Complex> eigenvalues =
        place_distinct_eigenvalues(rng, r, 0.05);

    InterpolationOperators ops =
        build_interpolation_operators(eigenvalues, m, k);
    double identity_defect = spectral_norm(
        ops.evaluation * ops.lift -
        ComplexMatrix::Identity(m * r, m * r));
    double eval_norm = spectral_norm(ops.evaluation);
    double lift_norm = spectral_norm(ops.lift);

    // "Never exceeds" allows only roundoff headroom on top of the ceiling.
    auto below = [](double value, double ceiling) {
      return value <= ceiling * (1.0 + 1e-12) + 1e-14;
    };
    bool pass = identity_defect <= 1e-10 &&
                below(eval_norm, evaluation_norm_bound(r, ops.beta, k)) &&
                below(lift_norm, lift_norm_bound(r, ops.alpha, ops.beta)) &&
                below(lift_norm,
                      lift_norm_bound_coarse(r, ops.alpha, ops.beta));
    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back({{"index", i},
                                 {"seed", iseed},
                                 {"r", r},
                                 {"k", k},
                                 {"m", m},
                                 {"identity_defect", identity_defect}});
    }
  }
  return result;
}

SuiteResult suite_fd_sufficient_bracket(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "fd-sufficient-bracket";
  result.count = count;
  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagSufficient, i);
    Pcg32 rng(iseed);
    int n = 2 + static_cast<int>(rng.next_u32() % 5);
    int m = 1 + static_cast<int>(rng.next_u32() % 3);
    FdInstance inst = random_fd_instance(rng, n, m, true, false, m);

    CharacterizationResult check = characterization_check(inst.sys);
    bool pass = check.projections_frames && check.iterates_frame;
    if (pass) {
      double reduced_lower = std::numeric_limits<double>::infinity();
      double reduced_upper = 0.0;
      std::vector<Complex> measured;
      for (const EigenvalueFrameData& e : check.per_eigenvalue) {
        reduced_lower = std::min(reduced_lower, e.bounds.lower);
        reduced_upper = std::max(reduced_upper, e.bounds.upper);
        measured.push_back(e.eigenvalue);
      }
      double alpha = eigenvalue_separation_product(measured);
      FrameBounds estimate = sufficient_iterate_bounds(
          reduced_lower, reduced_upper, static_cast<int>(measured.size()),
          alpha, spectral_norm(inst.sys.op), inst.sys.iteration_count);
      pass = leq_with_slack(estimate.lower, check.iterate_bounds.lower) &&
             geq_with_slack(estimate.upper, check.iterate_bounds.upper);
    }
    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back(
          {{"index", i}, {"seed", iseed}, {"n", n}, {"m", m}});
    }
  }
  return result;
}

namespace {

InstanceSpec sdiag_suite_spec(std::uint64_t iseed, Pcg32& rng, int index) {
  InstanceSpec spec;
  spec.seed = iseed;
  spec.dim = 1;
  spec.points_per_axis = 256;
  spec.radius = 1 + static_cast<int>(rng.next_u32() % 4);  // fibers up to C^9
  spec.num_generators = 1 + static_cast<int>(rng.next_u32() % 3);
  int r = 1 + static_cast<int>(rng.next_u32() %
                               static_cast<std::uint32_t>(spec.num_generators));
  spec.num_functions = 1;
  spec.gap_target = 0.1;
  // Bases on a circle keep every pair well separated; modulation and
  // collisions vary the pointwise eigenvalue structure.
  for (int s = 0; s < r; ++s) {
    EigenvalueFieldRecipe recipe;
    double angle = 6.283185307179586 * s / r;
    recipe.base = Complex(std::cos(angle), std::sin(angle));
    recipe.amplitude = 0.05;
    if (s > 0) {
      switch ((index + s) % 3) {
        case 0: recipe.collision_fraction = 0.0; break;
        case 1: recipe.collision_fraction = 0.3; break;
        default: recipe.collision_fraction = 0.5; break;
      }
    }
    spec.fields.push_back(recipe);
  }
  return spec;
}

struct RealizedInstance {
  InstanceDocument doc;
  RangeFunctionField range;
  RangeOperatorField rf;
};

RealizedInstance realize(const InstanceSpec& spec) {
  RealizedInstance out;
  out.doc = generate_instance(spec);
  out.range = range_function_from_generators(out.doc.generators);
  out.rf = realize_operator(out.doc, out.range);
  return out;
}

}  // namespace

SuiteResult suite_sdiag_structure(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "sdiag-structure";
  result.count = count;
  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagSdiag, i);
    Pcg32 rng(iseed);
    InstanceSpec spec = sdiag_suite_spec(iseed, rng, i);
    std::string reason;
    bool pass = true;
    try {
      RealizedInstance inst = realize(spec);
      SDiagonalization diag = s_diagonalize(inst.rf);
      const std::size_t points = inst.rf.grid.size();
      const int n = inst.rf.window.fiber_dim(inst.rf.grid.dim);

      if (spectral_reconstruction_residual(inst.rf, diag) > 1e-8) {
        pass = false;
        reason = "reconstruction residual above 1e-8";
      }

      for (std::size_t g = 0; g < points && pass; ++g) {
        int h = diag.distinct_counts[g];
        // Projections sum to the projection onto J and are orthogonal.
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (int s = 0; s < h; ++s) {
          const ComplexMatrix& basis = diag.eigenspaces[s].bases[g];
          sum += basis * basis.adjoint();
        }
        const ComplexMatrix& range_basis = inst.range.bases[g];
        if (spectral_norm(sum - range_basis * range_basis.adjoint()) >
            1e-10) {
          pass = false;
          reason = "projection sum differs from P_J";
          break;
        }
        for (int s = 0; s < h && pass; ++s) {
          for (int t = s + 1; t < h; ++t) {
            if (spectral_norm(diag.eigenspaces[s].bases[g].adjoint() *
                              diag.eigenspaces[t].bases[g]) > 1e-10) {
              pass = false;
              reason = "eigenspace projections not orthogonal";
              break;
            }
          }
        }
        // Padding sits strictly above every true modulus; on-spectrum
        // values are pairwise separated.
        for (int s = 0; s < diag.count && pass; ++s) {
          Complex value = diag.eigenvalue_fields[s][g];
          if (s < h) {
            if (std::abs(value) > diag.padding_constant - 1.0 + 1e-6) {
              pass = false;
              reason = "eigenvalue modulus above the operator norm";
            }
          } else if (value !=
                     Complex(diag.padding_constant + s + 1, 0.0)) {
            pass = false;
            reason = "padding value mismatch";
          }
        }
        for (int s = 0; s < h && pass; ++s) {
          for (int t = s + 1; t < h; ++t) {
            if (std::abs(diag.eigenvalue_fields[s][g] -
                         diag.eigenvalue_fields[t][g]) <= kDefaultClusterTol) {
              pass = false;
              reason = "on-spectrum values collide";
              break;
            }
          }
        }
      }

      if (pass) {
        // Partition pieces are disjoint, exhaust the spectrum, and agree
        // with the distinct counts; spectra are nested.
        std::vector<int> piece(points, -1);
        for (int h = 0; h < diag.count && pass; ++h) {
          for (std::size_t g : diag.partition[h]) {
            if (piece[g] != -1 || diag.distinct_counts[g] != h + 1) {
              pass = false;
              reason = "partition piece mismatch";
              break;
            }
            piece[g] = h;
          }
        }
        for (std::size_t g = 0; g < points && pass; ++g) {
          bool on_spectrum = inst.range.dim_at(g) > 0;
          if (on_spectrum != (piece[g] >= 0)) {
            pass = false;
            reason = "partition does not cover the spectrum";
          }
        }
        for (int s = 0; s + 1 < diag.count && pass; ++s) {
          const auto& outer = diag.spectra[s];
          for (std::size_t g : diag.spectra[s + 1]) {
            if (!std::binary_search(outer.begin(), outer.end(), g)) {
              pass = false;
              reason = "spectra not nested";
              break;
            }
          }
        }
      }
    } catch (const Error& e) {
      pass = false;
      reason = e.what();
    }

    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back({{"index", i},
                                 {"seed", iseed},
                                 {"spec", spec_to_json(spec)},
                                 {"reason", reason}});
    }
  }
  return result;
}

SuiteResult suite_fiber_characterization(int count, int adversarial_count,
                                         std::uint64_t seed) {
  SuiteResult result;
  result.name = "fiber-characterization";
  result.count = count + adversarial_count;

  auto run_one = [&](const InstanceSpec& spec, bool adversarial, int index,
                     std::uint64_t iseed) {
    std::string reason;
    bool pass = true;
    try {
      RealizedInstance realized = realize(spec);
      DSInstance inst =
          make_ds_instance(std::move(realized.rf), realized.doc.functions);
      SDiagonalization diag = s_diagonalize(inst.rf);
      CharacterizationReport report =
          check_characterization(inst, diag, /*c_min=*/0.1);
      pass = report.verdict;
      if (!pass) reason = "verdict failed (agreement or bracket)";
      if (adversarial && pass) {
        if (report.projections_all_frames ||
            report.iterates_are_frame_generator) {
          pass = false;
          reason = "planted zero projection not detected on both sides";
        }
      }
    } catch (const Error& e) {
      pass = false;
      reason = e.what();
    }
    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back({{"index", index},
                                 {"seed", iseed},
                                 {"adversarial", adversarial},
                                 {"spec", spec_to_json(spec)},
                                 {"reason", reason}});
    }
  };

  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagFiber, i);
    Pcg32 rng(iseed);
    InstanceSpec spec;
    spec.seed = iseed;
    spec.dim = 1;
    spec.points_per_axis = 256;
    spec.radius = 1 + static_cast<int>(rng.next_u32() % 2);
    spec.num_generators = 1 + static_cast<int>(rng.next_u32() % 3);
    int r = (i % 5 < 3) ? spec.num_generators
                        : std::max(1, spec.num_generators - 1);
    int multiplicity = spec.num_generators - r + 1;
    // Enough functions for frames most of the time; deliberately too few on
    // some instances so the "not a frame" branch of the equivalence is also
    // exercised.
    spec.num_functions = (i % 7 == 6) ? std::max(1, multiplicity - 1)
                                      : multiplicity + (i % 2);
    spec.gap_target = 0.1;
    for (int s = 0; s < r; ++s) {
      EigenvalueFieldRecipe recipe;
      double angle = 6.283185307179586 * s / r;
      recipe.base = Complex(std::cos(angle), std::sin(angle));
      recipe.amplitude = 0.05;
      if (s > 0 && i % 4 == 0) recipe.collision_fraction = 0.25;
      spec.fields.push_back(recipe);
    }
    run_one(spec, false, i, iseed);
  }

  for (int i = 0; i < adversarial_count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagFiberAdversarial, i);
    Pcg32 rng(iseed);
    InstanceSpec spec;
    spec.seed = iseed;
    spec.dim = 1;
    spec.points_per_axis = 256;
    spec.radius = 1;
    spec.num_generators = 1 + static_cast<int>(rng.next_u32() % 3);
    int r = spec.num_generators;
    spec.num_functions = 1 + static_cast<int>(rng.next_u32() % 2);
    spec.gap_target = 0.1;
    for (int s = 0; s < r; ++s) {
      EigenvalueFieldRecipe recipe;
      double angle = 6.283185307179586 * s / r;
      recipe.base = Complex(std::cos(angle), std::sin(angle));
      recipe.amplitude = 0.05;
      spec.fields.push_back(recipe);
    }
    spec.planted_zero_field = static_cast<int>(rng.next_u32() %
                                               static_cast<std::uint32_t>(r));
    run_one(spec, true, count + i, iseed);
  }
  return result;
}

SuiteResult suite_constant_reduction(int count, std::uint64_t seed) {
  SuiteResult result;
  result.name = "constant-reduction";
  result.count = count;

  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-10 * std::max({1.0, std::abs(a),
                                                std::abs(b)});
  };

  for (int i = 0; i < count; ++i) {
    std::uint64_t iseed = instance_seed(seed, kTagConstant, i);
    Pcg32 rng(iseed);
    std::string reason;
    bool pass = true;
    try {
      OmegaGrid grid{1, 8};
      FiberWindow window{1};
      const int n = window.fiber_dim(grid.dim);
      const std::size_t points = grid.size();
      int q = 1 + static_cast<int>(rng.next_u32() % 3);
      int r = 1 + static_cast<int>(rng.next_u32() %
                                   static_cast<std::uint32_t>(q));
      int multiplicity = q - r + 1;
      int m = multiplicity + static_cast<int>(rng.next_u32() % 2);

      // Constant-in-omega instance assembled directly.
      std::vector<ComplexVector> generator_vectors;
      for (int t = 0; t < q; ++t) {
        generator_vectors.push_back(random_gaussian_vector(n, rng));
      }
      ComplexMatrix span = orthonormal_span(generator_vectors).basis;
      if (span.cols() != q) throw Error("generators lost rank");
      std::vector<Complex> values = place_distinct_eigenvalues(rng, r);
      ComplexMatrix rotation = random_unitary(q, rng);
      ComplexMatrix diag_q = ComplexMatrix::Zero(q, q);
      for (int t = 0; t < q; ++t) {
        diag_q(t, t) = values[std::min(t, r - 1)];
      }
      ComplexMatrix op_matrix =
          span * rotation * diag_q * rotation.adjoint() * span.adjoint();

      InstanceDocument doc;
      doc.grid = grid;
      doc.window = window;
      for (int t = 0; t < q; ++t) {
        FiberField g;
        g.grid = grid;
        g.window = window;
        g.values.assign(points, generator_vectors[t]);
        doc.generators.push_back(std::move(g));
      }
      for (int i2 = 0; i2 < m; ++i2) {
        ComplexVector gamma = random_gaussian_vector(q, rng);
        FiberField f;
        f.grid = grid;
        f.window = window;
        f.values.assign(points, ComplexVector(span * (rotation * gamma)));
        doc.functions.push_back(std::move(f));
      }
      doc.op.kind = OperatorSpec::Kind::Explicit;
      doc.op.matrices.assign(points, op_matrix);

      RangeFunctionField range = range_function_from_generators(doc.generators);
      RangeOperatorField rf = realize_operator(doc, range);
      DSInstance inst = make_ds_instance(std::move(rf), doc.functions);
      if (inst.length != q) throw Error("constant instance has wrong length");
      SDiagonalization diag = s_diagonalize(inst.rf);
      CharacterizationReport fiber_report =
          check_characterization(inst, diag, 0.0);

      // The same data as a single finite-dimensional instance, expressed in
      // the pipeline's own basis at grid point 0.
      const ComplexMatrix& basis0 = inst.range.bases[0];
      IterateSystem fd;
      fd.op = basis0.adjoint() * op_matrix * basis0;
      fd.iteration_count = q - 1;
      for (const FiberField& f : inst.functions) {
        fd.vectors.push_back(basis0.adjoint() * f.values[0]);
      }
      CharacterizationResult fd_check = characterization_check(fd);

      if (fiber_report.iterates_are_frame_generator !=
              fd_check.iterates_frame ||
          fiber_report.projections_all_frames !=
              fd_check.projections_frames) {
        pass = false;
        reason = "verdicts differ between fiber and finite-dimensional runs";
      }
      if (pass && fd_check.iterates_frame) {
        pass = close(fiber_report.iterate_true.lower,
                     fd_check.iterate_bounds.lower) &&
               close(fiber_report.iterate_true.upper,
                     fd_check.iterate_bounds.upper);
        if (!pass) reason = "iterate bounds differ";
      }
      if (pass) {
        if (fiber_report.per_eigenspace.size() !=
            fd_check.per_eigenvalue.size()) {
          pass = false;
          reason = "eigenvalue counts differ";
        } else {
          for (std::size_t s = 0; s < fd_check.per_eigenvalue.size(); ++s) {
            if (!close(fiber_report.per_eigenspace[s].bounds.lower,
                       fd_check.per_eigenvalue[s].bounds.lower) ||
                !close(fiber_report.per_eigenspace[s].bounds.upper,
                       fd_check.per_eigenvalue[s].bounds.upper)) {
              pass = false;
              reason = "per-eigenspace bounds differ";
              break;
            }
          }
        }
      }
      if (pass && fiber_report.projections_all_frames) {
        // The published estimate evaluated through the finite-dimensional
        // formula with the gap standing in for the separation product.
        FrameBounds expect = sufficient_iterate_bounds(
            fiber_report.reduction.lower, fiber_report.reduction.upper,
            fiber_report.r, std::pow(fiber_report.c_eff, 2 * fiber_report.r),
            fiber_report.operator_norm, q - 1);
        pass = close(fiber_report.iterate_estimated.lower, expect.lower) &&
               close(fiber_report.iterate_estimated.upper, expect.upper);
        if (!pass) reason = "estimated bounds differ";
      }
    } catch (const Error& e) {
      pass = false;
      reason = e.what();
    }

    if (pass) {
      ++result.pass;
    } else {
      ++result.fail;
      result.failures.push_back(
          {{"index", i}, {"seed", iseed}, {"reason", reason}});
    }
  }
  return result;
}

BatterySummary run_battery(int count, std::uint64_t seed) {
  BatterySummary summary;
  summary.seed = seed;
  summary.count = count;
  int reduced = std::max(1, count / 2);
  int adversarial = std::max(1, count / 10);
  summary.suites.push_back(suite_fd_equivalence(count, seed));
  summary.suites.push_back(suite_fd_necessary_bracket(count, seed));
  summary.suites.push_back(suite_interpolation_norms(count, seed));
  summary.suites.push_back(suite_fd_sufficient_bracket(count, seed));
  summary.suites.push_back(suite_sdiag_structure(reduced, seed));
  summary.suites.push_back(
      suite_fiber_characterization(reduced, adversarial, seed));
  summary.suites.push_back(
      suite_constant_reduction(std::max(1, count / 4), seed));
  for (const SuiteResult& suite : summary.suites) {
    summary.all_pass = summary.all_pass && suite.ok();
  }
  return summary;
}

json battery_to_json(const BatterySummary& summary) {
  json suites = json::array();
  for (const SuiteResult& suite : summary.suites) {
    suites.push_back({{"name", suite.name},
                      {"count", suite.count},
                      {"pass", suite.pass},
                      {"fail", suite.fail},
                      {"failures", suite.failures}});
  }
  return json{{"seed", summary.seed},
              {"count", summary.count},
              {"suites", std::move(suites)},
              {"all_pass", summary.all_pass}};
}

}  // namespace shiftframe
