#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shiftframe/instance_io.hpp"
#include "shiftframe/sdiag.hpp"

namespace shiftframe {

/// A fully assembled dynamical sampling instance on the fiber model: range
/// function, range operator and the functions to iterate. The iteration
/// range is K = {0..length-1} unless explicitly overridden.
struct DSInstance {
  RangeFunctionField range;
  RangeOperatorField rf;
  std::vector<FiberField> functions;
  std::vector<std::size_t> spectrum;
  int length = 0;
};

DSInstance make_ds_instance(RangeOperatorField rf,
                            std::vector<FiberField> functions,
                            double membership_tol = kDefaultMembershipTol);

/// The iterated fiber system {R(w)^j applied to f_i}, i outer, j = 0..k
/// inner. k < 0 selects the canonical k = length - 1.
std::vector<FiberField> iterate_fiber_system(const DSInstance& inst,
                                             int k = -1);

/// Oracle bounds next to formula bounds, with the bracket verdict.
struct FrameReport {
  FrameBounds true_bounds;
  FrameBounds estimated_bounds;
  bool verdict = false;
  std::string provenance;
};

/// Per-eigenspace consequences of the iterates framing the space: each
/// projected system must frame its eigenspace, with lower bound at least
/// A / sum_{j=0..k} ||L||^{2j} and upper bound at most B. A failed
/// hypothesis (the iterates do not frame the space) produces a skip record
/// rather than an error.
struct NecessaryReport {
  bool skipped = false;
  std::string skip_reason;
  FrameBounds iterate_bounds;
  std::vector<FrameReport> per_eigenspace;  // index s-1
  bool verdict = true;
};

NecessaryReport check_necessary(const DSInstance& inst,
                                const SDiagonalization& adjoint_diag,
                                int k = -1,
                                double slack = kDefaultBracketSlack,
                                double rank_tol = kDefaultRankTol);

/// The two-sided verdict: the iterates frame the space exactly when every
/// eigenspace projection system frames its eigenspace. When they do, the
/// iterate bounds are estimated from the reduction A = min_s A_s,
/// B = max_s B_s with the gap standing in for the separation product:
///   lower >= A * ((r / c_eff^{2r}) sum_u C(r-1,u)^2 ||L||^{2u})^{-1}
///   upper <= B * r * sum_{j=0..k} ||L||^{2j}
/// where c_eff = min(measured gap, 1).
struct EigenspaceFrameData {
  int index = 0;  // s, 1-based
  FrameBounds bounds;
  bool is_frame_generator = false;
};

struct CharacterizationReport {
  std::vector<EigenspaceFrameData> per_eigenspace;
  bool projections_all_frames = false;
  FrameBounds reduction;  // (min_s A_s, max_s B_s)
  FrameBounds iterate_true;
  FrameBounds iterate_estimated;
  bool iterates_are_frame_generator = false;
  bool agreement = false;
  bool bracket_ok = false;
  bool verdict = false;
  double c_eff = 1.0;
  int r = 0;
  double operator_norm = 0.0;
};

CharacterizationReport check_characterization(
    const DSInstance& inst, const SDiagonalization& diag, double c_min,
    int k = -1, double slack = kDefaultBracketSlack,
    double rank_tol = kDefaultRankTol);

struct PipelineOptions {
  double c_min = 0.0;
  double cluster_tol = kDefaultClusterTol;
  double rank_tol = kDefaultRankTol;
  double normality_tol = kDefaultNormalityTol;
  double membership_tol = kDefaultMembershipTol;
  double invariance_tol = kDefaultInvarianceTol;
  int k_override = -1;  // iterate count override; -1 keeps k = length-1
};

struct PipelineResult {
  std::string digest;
  OmegaGrid grid;
  FiberWindow window;
  int function_count = 0;
  int length = 0;
  std::size_t spectrum_size = 0;
  double operator_norm = 0.0;
  bool normal = false;
  int r = 0;
  double gap = 0.0;
  bool gap_sentinel = false;
  double padding_constant = 0.0;
  int effective_k = 0;
  bool off_theorem = false;
  NecessaryReport necessary;
  CharacterizationReport characterization;
  bool have_characterization = false;
  std::string error;  // nonempty when a stage could not run
  bool all_verdicts = false;
};

/// Runs the full check battery on one instance document: range function,
/// spectrum and length, operator realization, normality, s-diagonalization,
/// gap measurement, the necessary-direction brackets and the two-sided
/// characterization.
PipelineResult run_pipeline(const nlohmann::json& instance,
                            const PipelineOptions& options = {});

nlohmann::json pipeline_to_json(const PipelineResult& result);
std::string pipeline_table(const PipelineResult& result);

}  // namespace shiftframe
