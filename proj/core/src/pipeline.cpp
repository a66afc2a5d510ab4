#include "shiftframe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "shiftframe/errors.hpp"
#include "shiftframe/finite_dim.hpp"
#include "shiftframe/linalg.hpp"

namespace shiftframe {

using nlohmann::json;

DSInstance make_ds_instance(RangeOperatorField rf,
                            std::vector<FiberField> functions,
                            double membership_tol) {
  if (functions.empty()) {
    throw Error("make_ds_instance: at least one function required");
  }
  DSInstance inst;
  inst.range = rf.range;
  inst.rf = std::move(rf);
  inst.functions = std::move(functions);

  SpectrumInfo info = spectrum_and_length(inst.range);
  inst.spectrum = std::move(info.spectrum);
  inst.length = info.length;
  if (inst.length < 1) {
    throw Error("make_ds_instance: the range function is zero everywhere");
  }

  for (std::size_t i = 0; i < inst.functions.size(); ++i) {
    const FiberField& f = inst.functions[i];
    check_same_layout(f.grid, f.window, inst.range.grid, inst.range.window,
                      "make_ds_instance");
    for (std::size_t g = 0; g < f.values.size(); ++g) {
      const ComplexMatrix& basis = inst.range.bases[g];
      const ComplexVector& v = f.values[g];
      double residual = (v - basis * (basis.adjoint() * v)).norm();
      if (residual > membership_tol * std::max(1.0, v.norm())) {
        std::ostringstream os;
        os << "make_ds_instance: function " << i
           << " lies outside J(omega) at grid point " << g << " (residual "
           << residual << ")";
        throw VectorOutsideSubspaceError(os.str());
      }
    }
  }
  return inst;
}

std::vector<FiberField> iterate_fiber_system(const DSInstance& inst, int k) {
  if (k < 0) k = inst.length - 1;
  std::vector<FiberField> out;
  out.reserve(inst.functions.size() * static_cast<std::size_t>(k + 1));
  for (const FiberField& f : inst.functions) {
    FiberField current = f;
    out.push_back(current);
    for (int j = 1; j <= k; ++j) {
      current = apply_operator(inst.rf, current);
      out.push_back(current);
    }
  }
  return out;
}

NecessaryReport check_necessary(const DSInstance& inst,
                                const SDiagonalization& adjoint_diag,
                                int k, double slack, double rank_tol) {
  if (k < 0) k = inst.length - 1;
  NecessaryReport report;
  const double scale_floor = system_scale(inst.functions);

  std::vector<FiberField> iterates = iterate_fiber_system(inst, k);
  UniformFrameReport iterate_check =
      uniform_frame_check(iterates, inst.range, kDefaultMembershipTol,
                          rank_tol, scale_floor);
  report.iterate_bounds = iterate_check.bounds;
  if (!iterate_check.is_frame_generator) {
    report.skipped = true;
    report.skip_reason =
        "iterates are not a frame generator set; the hypothesis of the "
        "necessary direction fails";
    return report;
  }

  const double lower = iterate_check.bounds.lower;
  const double upper = iterate_check.bounds.upper;
  const double norm = op_norm(inst.rf);
  const double denom = geometric_power_sum(norm * norm, k);

  for (int s = 0; s < adjoint_diag.count; ++s) {
    const RangeFunctionField& space = adjoint_diag.eigenspaces[s];
    std::vector<FiberField> projected;
    projected.reserve(inst.functions.size());
    for (const FiberField& f : inst.functions) {
      projected.push_back(project_onto_range(f, space));
    }
    UniformFrameReport check =
        uniform_frame_check(projected, space, kDefaultMembershipTol,
                            rank_tol, scale_floor);
    FrameReport rep;
    rep.true_bounds = check.bounds;
    rep.estimated_bounds = {lower / denom, upper, true};
    rep.verdict = check.is_frame_generator &&
                  geq_with_slack(check.bounds.lower, lower / denom, slack) &&
                  leq_with_slack(check.bounds.upper, upper, slack);
    rep.provenance = "projection-necessary";
    report.verdict = report.verdict && rep.verdict;
    report.per_eigenspace.push_back(std::move(rep));
  }
  return report;
}

CharacterizationReport check_characterization(const DSInstance& inst,
                                              const SDiagonalization& diag,
                                              double c_min, int k,
                                              double slack, double rank_tol) {
  if (k < 0) k = inst.length - 1;
  GapCheck gap = spectral_gap(diag, c_min);
  if (!gap.pass) {
    std::ostringstream os;
    os << "check_characterization: measured spectral gap " << gap.value
       << " is below the required minimum " << c_min;
    throw NoSpectralGapError(os.str());
  }

  CharacterizationReport report;
  report.r = diag.count;
  report.operator_norm = op_norm(inst.rf);
  report.c_eff = std::min(diag.gap, 1.0);
  const double scale_floor = system_scale(inst.functions);

  bool all_frames = true;
  bool any = false;
  double reduced_lower = 0.0;
  double reduced_upper = 0.0;
  for (int s = 0; s < diag.count; ++s) {
    const RangeFunctionField& space = diag.eigenspaces[s];
    std::vector<FiberField> projected;
    projected.reserve(inst.functions.size());
    for (const FiberField& f : inst.functions) {
      projected.push_back(project_onto_range(f, space));
    }
    UniformFrameReport check =
        uniform_frame_check(projected, space, kDefaultMembershipTol,
                            rank_tol, scale_floor);
    report.per_eigenspace.push_back(
        {s + 1, check.bounds, check.is_frame_generator});
    all_frames = all_frames && check.is_frame_generator;
    if (!any) {
      reduced_lower = check.bounds.lower;
      reduced_upper = check.bounds.upper;
      any = true;
    } else {
      reduced_lower = std::min(reduced_lower, check.bounds.lower);
      reduced_upper = std::max(reduced_upper, check.bounds.upper);
    }
  }
  report.projections_all_frames = all_frames;
  report.reduction = {reduced_lower, reduced_upper,
                      all_frames && reduced_lower > 0.0};

  std::vector<FiberField> iterates = iterate_fiber_system(inst, k);
  UniformFrameReport iterate_check =
      uniform_frame_check(iterates, inst.range, kDefaultMembershipTol,
                          rank_tol, scale_floor);
  report.iterate_true = iterate_check.bounds;
  report.iterates_are_frame_generator = iterate_check.is_frame_generator;

  if (all_frames) {
    double alpha_floor = std::pow(report.c_eff, 2 * diag.count);
    report.iterate_estimated =
        sufficient_iterate_bounds(reduced_lower, reduced_upper, diag.count,
                                  alpha_floor, report.operator_norm, k);
    report.bracket_ok =
        leq_with_slack(report.iterate_estimated.lower,
                       report.iterate_true.lower, slack) &&
        geq_with_slack(report.iterate_estimated.upper,
                       report.iterate_true.upper, slack);
  } else {
    report.iterate_estimated = {0.0, 0.0, false};
    report.bracket_ok = true;  // nothing claimed in this branch
  }
  report.agreement =
      report.projections_all_frames == report.iterates_are_frame_generator;
  report.verdict = report.agreement && report.bracket_ok;
  return report;
}

namespace {

json bounds_to_json(const FrameBounds& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"is_frame", b.is_frame}};
}

constexpr const char* kGridModelNote =
    "bounds and verdicts are exact for grid-defined instances; for "
    "continuum instances the grid evaluation is advisory";

}  // namespace

PipelineResult run_pipeline(const json& instance,
                            const PipelineOptions& options) {
  PipelineResult result;
  InstanceDocument doc = parse_instance(instance);
  result.digest = instance_digest(instance_to_json(doc));
  result.grid = doc.grid;
  result.window = doc.window;
  result.function_count = static_cast<int>(doc.functions.size());

  RangeFunctionField range =
      range_function_from_generators(doc.generators, options.rank_tol);
  SpectrumInfo info = spectrum_and_length(range);
  result.length = info.length;
  result.spectrum_size = info.spectrum.size();

  RangeOperatorField rf =
      realize_operator(doc, range, options.invariance_tol);
  DSInstance inst = make_ds_instance(std::move(rf), doc.functions,
                                     options.membership_tol);

  result.operator_norm = op_norm(inst.rf);
  result.effective_k =
      options.k_override >= 0 ? options.k_override : inst.length - 1;
  result.off_theorem = result.effective_k != inst.length - 1;

  result.normal = normality_check(inst.rf, options.normality_tol);
  if (!result.normal) {
    result.error =
        "operator is not normal: s-diagonalization and the frame "
        "characterization are unavailable";
    return result;
  }

  SDiagonalization diag;
  try {
    diag = s_diagonalize(inst.rf, options.cluster_tol, options.normality_tol);
  } catch (const Error& e) {
    result.error = e.what();
    return result;
  }
  result.r = diag.count;
  result.gap = diag.gap;
  result.gap_sentinel = diag.gap_is_sentinel();
  result.padding_constant = diag.padding_constant;

  SDiagonalization adjoint = adjoint_sdiag(diag);
  result.necessary = check_necessary(inst, adjoint, result.effective_k,
                                     kDefaultBracketSlack, options.rank_tol);

  try {
    result.characterization =
        check_characterization(inst, diag, options.c_min, result.effective_k,
                               kDefaultBracketSlack, options.rank_tol);
    result.have_characterization = true;
  } catch (const NoSpectralGapError& e) {
    result.error = e.what();
    return result;
  }

  result.all_verdicts =
      (result.necessary.skipped || result.necessary.verdict) &&
      result.characterization.verdict;
  return result;
}

json pipeline_to_json(const PipelineResult& result) {
  json out;
  out["instance"] = {{"digest", result.digest},
                     {"grid",
                      {{"dim", result.grid.dim},
                       {"points_per_axis", result.grid.points_per_axis}}},
                     {"window", {{"radius", result.window.radius}}},
                     {"functions", result.function_count}};
  out["quantities"] = {
      {"length", result.length},
      {"spectrum_size", result.spectrum_size},
      {"operator_norm", result.operator_norm},
      {"normal", result.normal},
      {"r", result.r},
      {"gap", result.gap_sentinel ? json("infinite") : json(result.gap)},
      {"padding_constant", result.padding_constant},
      {"k", result.effective_k},
      {"off_theorem_iteration_range", result.off_theorem}};
  out["note"] = kGridModelNote;

  if (!result.error.empty()) {
    out["error"] = result.error;
  }

  if (result.error.empty() || result.normal) {
    json necessary;
    necessary["skipped"] = result.necessary.skipped;
    if (result.necessary.skipped) {
      necessary["skip_reason"] = result.necessary.skip_reason;
    }
    necessary["iterate_bounds"] = bounds_to_json(result.necessary.iterate_bounds);
    json per = json::array();
    for (std::size_t s = 0; s < result.necessary.per_eigenspace.size(); ++s) {
      const FrameReport& rep = result.necessary.per_eigenspace[s];
      per.push_back({{"s", s + 1},
                     {"true", bounds_to_json(rep.true_bounds)},
                     {"estimated", bounds_to_json(rep.estimated_bounds)},
                     {"verdict", rep.verdict},
                     {"provenance", rep.provenance}});
    }
    necessary["per_eigenspace"] = std::move(per);
    necessary["verdict"] = result.necessary.verdict;
    out["necessary"] = std::move(necessary);
  }

  if (result.have_characterization) {
    const CharacterizationReport& c = result.characterization;
    json per = json::array();
    for (const EigenspaceFrameData& e : c.per_eigenspace) {
      per.push_back({{"s", e.index},
                     {"bounds", bounds_to_json(e.bounds)},
                     {"is_frame_generator", e.is_frame_generator}});
    }
    out["characterization"] = {
        {"per_eigenspace", std::move(per)},
        {"projections_all_frames", c.projections_all_frames},
        {"reduction", bounds_to_json(c.reduction)},
        {"iterates_true", bounds_to_json(c.iterate_true)},
        {"iterates_estimated", bounds_to_json(c.iterate_estimated)},
        {"iterates_are_frame_generator", c.iterates_are_frame_generator},
        {"agreement", c.agreement},
        {"bracket_ok", c.bracket_ok},
        {"c_eff", c.c_eff},
        {"verdict", c.verdict},
        {"provenance", "gap-characterization"}};
  }
  out["verdict"] = result.all_verdicts;
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt_bounds(const FrameBounds& b) {
  std::ostringstream os;
  os << "[" << fmt(b.lower) << ", " << fmt(b.upper) << "]"
     << (b.is_frame ? " (frame)" : " (not a frame)");
  return os.str();
}

}  // namespace

std::string pipeline_table(const PipelineResult& result) {
  std::ostringstream os;
  os << "instance " << result.digest << "\n";
  os << "  grid: dim " << result.grid.dim << ", " << result.grid.points_per_axis
     << " points/axis; window radius " << result.window.radius << "\n";
  os << "  functions m = " << result.function_count << "\n";
  os << "  length                " << result.length << "\n";
  os << "  spectrum size         " << result.spectrum_size << "\n";
  os << "  operator norm         " << fmt(result.operator_norm) << "\n";
  os << "  normal                " << (result.normal ? "yes" : "no") << "\n";
  if (result.normal) {
    os << "  distinct eigenvalues r " << result.r << "\n";
    os << "  spectral gap c        "
       << (result.gap_sentinel ? std::string("infinite (single eigenvalue)")
                               : fmt(result.gap))
       << "\n";
    os << "  padding constant K    " << fmt(result.padding_constant) << "\n";
  }
  os << "  iterations k          " << result.effective_k
     << (result.off_theorem ? "  [off-theorem override]" : "") << "\n";

  if (!result.error.empty()) {
    os << "  ERROR: " << result.error << "\n";
    return os.str();
  }

  os << "necessary direction:\n";
  if (result.necessary.skipped) {
    os << "  skipped: " << result.necessary.skip_reason << "\n";
  } else {
    os << "  iterate bounds        "
       << fmt_bounds(result.necessary.iterate_bounds) << "\n";
    for (std::size_t s = 0; s < result.necessary.per_eigenspace.size(); ++s) {
      const FrameReport& rep = result.necessary.per_eigenspace[s];
      os << "  s=" << (s + 1) << " true "
         << fmt_bounds(rep.true_bounds) << "  estimated >= "
         << fmt(rep.estimated_bounds.lower) << ", <= "
         << fmt(rep.estimated_bounds.upper) << "  "
         << (rep.verdict ? "ok" : "VIOLATED") << "\n";
    }
  }

  const CharacterizationReport& c = result.characterization;
  os << "characterization:\n";
  for (const EigenspaceFrameData& e : c.per_eigenspace) {
    os << "  s=" << e.index << " projection bounds " << fmt_bounds(e.bounds)
       << "\n";
  }
  os << "  reduction (A, B)      " << fmt_bounds(c.reduction) << "\n";
  os << "  iterates true         " << fmt_bounds(c.iterate_true) << "\n";
  if (c.projections_all_frames) {
    os << "  iterates estimated    [" << fmt(c.iterate_estimated.lower)
       << ", " << fmt(c.iterate_estimated.upper) << "]\n";
  }
  os << "  agreement             " << (c.agreement ? "yes" : "NO") << "\n";
  os << "  bracket               " << (c.bracket_ok ? "ok" : "VIOLATED")
     << "\n";
  os << "verdict: " << (result.all_verdicts ? "PASS" : "FAIL") << "\n";
  os << "note: " << kGridModelNote << "\n";
  return os.str();
}

}  // namespace shiftframe
