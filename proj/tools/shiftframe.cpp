// Command-line surface: instance generation, the full check pipeline, the
// s-diagonalization dump, finite-dimensional checks and the randomized
// oracle battery.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "shiftframe/battery.hpp"
#include "shiftframe/errors.hpp"
#include "shiftframe/finite_dim.hpp"
#include "shiftframe/generate.hpp"
#include "shiftframe/instance_io.hpp"
#include "shiftframe/linalg.hpp"
#include "shiftframe/pipeline.hpp"
#include "shiftframe/sdiag.hpp"
#include "shiftframe/version.hpp"

namespace {

using nlohmann::json;
using namespace shiftframe;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSchema = 65;

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
}

json fd_report(const IterateSystem& sys, double cluster_tol,
               double rank_tol) {
  CharacterizationResult check =
      characterization_check(sys, cluster_tol, rank_tol);

  json per = json::array();
  bool brackets_ok = true;
  for (const EigenvalueFrameData& e : check.per_eigenvalue) {
    json entry = {{"eigenvalue", complex_to_json(e.eigenvalue)},
                  {"eigenspace_dim", e.eigenspace_dim},
                  {"bounds",
                   {{"lower", e.bounds.lower},
                    {"upper", e.bounds.upper},
                    {"is_frame", e.bounds.is_frame}}}};
    if (check.iterates_frame) {
      FrameBounds transfer = necessary_projection_bounds(
          check.iterate_bounds.lower, check.iterate_bounds.upper,
          e.eigenvalue, sys.iteration_count);
      bool ok = geq_with_slack(e.bounds.lower, transfer.lower) &&
                leq_with_slack(e.bounds.upper, transfer.upper);
      entry["transfer"] = {{"lower", transfer.lower},
                           {"upper", transfer.upper},
                           {"bracket_ok", ok}};
      brackets_ok = brackets_ok && ok;
    }
    per.push_back(std::move(entry));
  }

  json out;
  out["iterates"] = {{"lower", check.iterate_bounds.lower},
                     {"upper", check.iterate_bounds.upper},
                     {"is_frame", check.iterates_frame}};
  out["projections_frames"] = check.projections_frames;
  out["per_eigenvalue"] = std::move(per);
  out["k"] = sys.iteration_count;

  if (check.projections_frames) {
    double reduced_lower = std::numeric_limits<double>::infinity();
    double reduced_upper = 0.0;
    std::vector<Complex> values;
    for (const EigenvalueFrameData& e : check.per_eigenvalue) {
      reduced_lower = std::min(reduced_lower, e.bounds.lower);
      reduced_upper = std::max(reduced_upper, e.bounds.upper);
      values.push_back(e.eigenvalue);
    }
    double alpha = eigenvalue_separation_product(values);
    FrameBounds estimate = sufficient_iterate_bounds(
        reduced_lower, reduced_upper, static_cast<int>(values.size()), alpha,
        spectral_norm(sys.op), sys.iteration_count);
    bool ok = leq_with_slack(estimate.lower, check.iterate_bounds.lower) &&
              geq_with_slack(estimate.upper, check.iterate_bounds.upper);
    out["sufficient_estimate"] = {{"lower", estimate.lower},
                                  {"upper", estimate.upper},
                                  {"alpha", alpha},
                                  {"bracket_ok", ok}};
    brackets_ok = brackets_ok && ok;
  }

  bool agreement = check.iterates_frame == check.projections_frames;
  out["agreement"] = agreement;
  out["verdict"] = agreement && brackets_ok;
  return out;
}

json sdiag_report(const SDiagonalization& diag) {
  json fields = json::array();
  for (const auto& field : diag.eigenvalue_fields) {
    json values = json::array();
    for (const Complex& v : field) values.push_back(complex_to_json(v));
    fields.push_back(std::move(values));
  }
  json dims = json::array();
  for (const auto& space : diag.eigenspaces) {
    json per_point = json::array();
    for (const ComplexMatrix& basis : space.bases) {
      per_point.push_back(static_cast<int>(basis.cols()));
    }
    dims.push_back(std::move(per_point));
  }
  return json{{"r", diag.count},
              {"padding_constant", diag.padding_constant},
              {"gap", diag.gap_is_sentinel() ? json("infinite")
                                             : json(diag.gap)},
              {"distinct_counts", diag.distinct_counts},
              {"eigenvalue_fields", std::move(fields)},
              {"eigenspace_dims", std::move(dims)},
              {"spectra", diag.spectra},
              {"partition", diag.partition},
              {"note", "eigenspace bases are not serialized; dims only"}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frame-generator diagnostics for iterated shift-preserving "
               "operators on finitely generated shift-invariant spaces"};
  app.require_subcommand(1);

  auto* cmd_version =
      app.add_subcommand("version", "print tool name and version");

  // gen
  std::string gen_preset;
  std::string gen_output = "-";
  InstanceSpec spec;
  auto* cmd_gen = app.add_subcommand("gen", "generate an instance document");
  cmd_gen->add_option("--preset", gen_preset,
                      "diag-example | gapped-random | varying-rank");
  cmd_gen->add_option("--seed", spec.seed, "instance seed");
  cmd_gen->add_option("--dim", spec.dim, "torus dimension d");
  cmd_gen->add_option("--grid", spec.points_per_axis, "grid points per axis");
  cmd_gen->add_option("--radius", spec.radius, "fiber window radius N");
  cmd_gen->add_option("--generators", spec.num_generators,
                      "number of generators (dim of J)");
  cmd_gen->add_option("--fields", spec.num_fields,
                      "number of eigenvalue fields r");
  cmd_gen->add_option("--functions", spec.num_functions,
                      "number of functions m");
  cmd_gen->add_option("--gap", spec.gap_target, "eigenvalue gap target");
  cmd_gen->add_option("--amplitude", spec.field_amplitude,
                      "eigenvalue field modulation amplitude");
  cmd_gen->add_option("--trig-degree", spec.trig_degree,
                      "modulation bandwidth");
  cmd_gen->add_option("--plant-zero", spec.planted_zero_field,
                      "zero the functions' component on this field index");
  cmd_gen->add_flag_callback(
      "--no-rotate", [&spec]() { spec.rotate_eigenvectors = false; },
      "keep eigenvectors aligned with the generator basis");
  cmd_gen->add_option("-o,--output", gen_output, "output file ('-' = stdout)");

  // check
  std::string check_instance;
  std::string check_json;
  PipelineOptions options;
  auto* cmd_check = app.add_subcommand(
      "check", "run the full pipeline on an instance document");
  cmd_check->add_option("--instance", check_instance, "instance JSON file")
      ->required();
  cmd_check->add_option("--c-min", options.c_min,
                        "required spectral gap minimum");
  cmd_check->add_option("--cluster-tol", options.cluster_tol,
                        "eigenvalue clustering tolerance");
  cmd_check->add_option("--rank-tol", options.rank_tol,
                        "numerical rank tolerance");
  cmd_check->add_option("--k", options.k_override,
                        "iterate count override (off-theorem exploration)");
  cmd_check->add_option("--json", check_json,
                        "write the JSON report here ('-' = stdout)");

  // fd-check
  std::string fd_instance;
  std::string fd_json;
  double fd_cluster_tol = kDefaultClusterTol;
  double fd_rank_tol = kDefaultRankTol;
  auto* cmd_fd = app.add_subcommand(
      "fd-check", "run the finite-dimensional checks on a matrix instance");
  cmd_fd->add_option("--instance", fd_instance, "fd instance JSON file")
      ->required();
  cmd_fd->add_option("--cluster-tol", fd_cluster_tol,
                     "eigenvalue clustering tolerance");
  cmd_fd->add_option("--rank-tol", fd_rank_tol, "numerical rank tolerance");
  cmd_fd->add_option("--json", fd_json, "write the JSON report here");

  // diag
  std::string diag_instance;
  std::string diag_json = "-";
  double diag_cluster_tol = kDefaultClusterTol;
  auto* cmd_diag = app.add_subcommand(
      "diag", "emit the s-diagonalization of an instance's operator");
  cmd_diag->add_option("--instance", diag_instance, "instance JSON file")
      ->required();
  cmd_diag->add_option("--cluster-tol", diag_cluster_tol,
                       "eigenvalue clustering tolerance");
  cmd_diag->add_option("--json", diag_json, "output file ('-' = stdout)");

  // oracle
  int oracle_n = 200;
  std::uint64_t oracle_seed = 1;
  std::string oracle_json;
  auto* cmd_oracle = app.add_subcommand(
      "oracle", "run the randomized property battery");
  cmd_oracle->add_option("--n", oracle_n, "instances per suite");
  cmd_oracle->add_option("--seed", oracle_seed, "battery seed");
  cmd_oracle->add_option("--json", oracle_json,
                         "write the JSON summary here ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_version->parsed()) {
      std::cout << kToolName << " " << kToolVersion << "\n";
      return kExitOk;
    }

    if (cmd_gen->parsed()) {
      InstanceDocument doc;
      if (!gen_preset.empty()) {
        doc = make_preset(gen_preset);
      } else {
        doc = generate_instance(spec);
      }
      write_output(gen_output, canonical_dump(instance_to_json(doc)));
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      json doc = load_json_file(check_instance);
      PipelineResult result = run_pipeline(doc, options);
      if (!check_json.empty()) {
        write_output(check_json, canonical_dump(pipeline_to_json(result)));
      }
      if (check_json != "-") {
        std::cout << pipeline_table(result);
      }
      if (!result.error.empty()) return kExitError;
      return result.all_verdicts ? kExitOk : kExitVerdict;
    }

    if (cmd_fd->parsed()) {
      json doc = load_json_file(fd_instance);
      IterateSystem sys = parse_fd_instance(doc);
      json report = fd_report(sys, fd_cluster_tol, fd_rank_tol);
      if (!fd_json.empty()) {
        write_output(fd_json, canonical_dump(report));
      }
      if (fd_json != "-") {
        std::cout << "iterates frame: "
                  << (report["iterates"]["is_frame"].get<bool>() ? "yes"
                                                                 : "no")
                  << "  projections frames: "
                  << (report["projections_frames"].get<bool>() ? "yes" : "no")
                  << "\nverdict: "
                  << (report["verdict"].get<bool>() ? "PASS" : "FAIL")
                  << "\n";
      }
      return report["verdict"].get<bool>() ? kExitOk : kExitVerdict;
    }

    if (cmd_diag->parsed()) {
      json doc = load_json_file(diag_instance);
      InstanceDocument instance = parse_instance(doc);
      RangeFunctionField range =
          range_function_from_generators(instance.generators);
      RangeOperatorField rf = realize_operator(instance, range);
      SDiagonalization diag = s_diagonalize(rf, diag_cluster_tol);
      write_output(diag_json, canonical_dump(sdiag_report(diag)));
      return kExitOk;
    }

    if (cmd_oracle->parsed()) {
      BatterySummary summary = run_battery(oracle_n, oracle_seed);
      if (!oracle_json.empty()) {
        write_output(oracle_json, canonical_dump(battery_to_json(summary)));
      }
      if (oracle_json != "-") {
        for (const SuiteResult& suite : summary.suites) {
          std::cout << (suite.ok() ? "[pass] " : "[FAIL] ") << suite.name
                    << ": " << suite.pass << "/" << suite.count << "\n";
        }
        std::cout << (summary.all_pass ? "all suites passed"
                                       : "some suites FAILED")
                  << "\n";
      }
      return summary.all_pass ? kExitOk : kExitVerdict;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
