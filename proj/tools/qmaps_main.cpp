// Command-line front end: every subcommand reads JSON, prints one JSON
// document to stdout and signals its decision through the exit code
// (0 true/success, 1 false, 2 invalid input).

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "qmaps/json_io.hpp"
#include "qmaps/selftest.hpp"

namespace {

using namespace qmaps;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitBadInput = 2;

void emit(const Json& j) { std::cout << j.dump(2) << std::endl; }

Tolerance tolerance_of(double tol) { return Tolerance{tol, tol * 0.1}; }

std::vector<double> parse_grid(const std::string& spec) {
  int count = 0;
  double lo = 0, hi = 0;
  char tail = 0;
  const int got = std::sscanf(spec.c_str(), "%d,%lf,%lf%c", &count, &lo, &hi, &tail);
  require(got == 3 && count > 0 && lo > 0 && hi >= lo, Err::BadInput,
          "--t-grid expects count,min,max with 0 < min <= max");
  return t_grid(count, lo, hi);
}

WeightKind parse_weight_kind(const std::string& name) {
  if (name == "form-f") return WeightKind::TypeII_FormF;
  if (name == "general") return WeightKind::TypeII_General;
  fail(Err::BadInput, "unknown weight kind \"" + name + "\" (use form-f or general)");
}

RankOneMap load_rank_one(const std::string& path, const Tolerance& tol) {
  const MatrixMap map = map_from_json(load_json_file(path));
  auto rank_one = RankOneMap::from_map(map, tol);
  require(rank_one.has_value(), Err::NotRankOneUnital,
          "\"" + path + "\" is not of the form A -> tr(A W) 1");
  return *rank_one;
}

// Corner blocks may arrive bare, wrapped in {"action": ...}, or as the
// {"gamma": ...} document that make-qcorner prints.
MatrixMap load_block(const std::string& path, MapShape shape) {
  Json doc = load_json_file(path);
  if (doc.is_object() && doc.contains("gamma")) doc = doc.at("gamma");
  return block_action_from_json(doc, shape);
}

int run_check_cp(const std::string& input, const Tolerance& tol) {
  const MatrixMap map = map_from_json(load_json_file(input));
  const bool verdict = is_completely_positive(map, tol);
  emit(Json{{"verdict", verdict}, {"min_choi_eig", min_choi_eigenvalue(map)}});
  return verdict ? kExitTrue : kExitFalse;
}

int run_check_qpos(const std::string& input, const std::vector<double>& grid,
                   const Tolerance& tol) {
  const MatrixMap map = map_from_json(load_json_file(input));
  try {
    const QPositivityReport report = is_q_positive(map, grid, tol);
    emit(report_to_json(report));
    return report.verdict ? kExitTrue : kExitFalse;
  } catch (const Error& e) {
    // Failing a structural precondition is a negative decision, not bad input.
    if (e.code() == Err::NotNonNegativeSpectrum || e.code() == Err::NotHermitianChoi) {
      emit(Json{{"verdict", false}, {"reason", e.what()}});
      return kExitFalse;
    }
    throw;
  }
}

int run_q_dominates(const std::string& phi_path, const std::string& psi_path,
                    const std::vector<double>& grid, const Tolerance& tol) {
  const MatrixMap phi = map_from_json(load_json_file(phi_path));
  const MatrixMap psi = map_from_json(load_json_file(psi_path));
  const QPositivityReport report = q_dominates(phi, psi, grid, tol);
  emit(report_to_json(report));
  return report.verdict ? kExitTrue : kExitFalse;
}

int run_lphi(const std::string& input, const Tolerance& tol) {
  const MatrixMap map = map_from_json(load_json_file(input));
  const MatrixMap limit = limit_idempotent(map, tol);
  // Printed in the map wire format so the output feeds straight back in.
  emit(Json{{"action", matrix_to_json(limit.action())},
            {"dim_in", limit.shape().in_rows},
            {"dim_out", limit.shape().out_rows}});
  return kExitTrue;
}

int run_eigenlist(const std::string& input, const Tolerance& tol) {
  const RankOneMap map = load_rank_one(input, tol);
  const EigenvalueList list = eigenvalue_list(map.state(), tol);
  emit(Json{{"mu", list_to_json(list)}, {"n", map.dim()}, {"q_pure", is_q_pure(map, tol)}});
  return kExitTrue;
}

int run_make_qcorner(const std::string& params_path, const Tolerance& tol) {
  const ParsedQCorner parsed = qcorner_from_json(load_json_file(params_path));
  const MatrixMap gamma = build_q_corner(parsed.mu, parsed.params, tol);
  emit(Json{{"gamma", matrix_to_json(gamma.action())},
            {"n", parsed.params.n},
            {"nprime", parsed.params.nprime},
            {"lambda_in_disk", parsed.params.lambda_in_disk()}});
  return kExitTrue;
}

int run_check_qcorner(const std::string& params_path, const std::string& input,
                      const std::string& phi_path, const std::string& psi_path,
                      const std::vector<double>& grid, const Tolerance& tol) {
  MatrixMap gamma;
  RankOneMap phi{1, State{CMatrix::Identity(1, 1)}};
  RankOneMap psi = phi;
  if (!params_path.empty()) {
    const ParsedQCorner parsed = qcorner_from_json(load_json_file(params_path));
    gamma = build_q_corner(parsed.mu, parsed.params, tol);
    phi = rank_one_from_list(parsed.mu, parsed.params.n);
    psi = rank_one_from_list(parsed.mu, parsed.params.nprime);
  } else {
    require(!input.empty() && !phi_path.empty() && !psi_path.empty(), Err::BadInput,
            "check-qcorner needs either --params or --input with --phi and --psi");
    phi = load_rank_one(phi_path, tol);
    psi = load_rank_one(psi_path, tol);
    gamma = load_block(input, MapShape{phi.dim(), psi.dim(), phi.dim(), psi.dim()});
  }
  const QPositivityReport report = is_q_corner(gamma, phi, psi, grid, tol);
  emit(report_to_json(report));
  return report.verdict ? kExitTrue : kExitFalse;
}

int run_recognize_qcorner(const std::string& input, const std::string& phi_path,
                          const std::string& psi_path, const Tolerance& tol) {
  const RankOneMap phi = load_rank_one(phi_path, tol);
  const RankOneMap psi = load_rank_one(psi_path, tol);
  const MatrixMap gamma =
      load_block(input, MapShape{phi.dim(), psi.dim(), phi.dim(), psi.dim()});
  const EigenvalueList mu = eigenvalue_list(phi.state(), tol);
  const EigenvalueList mu_psi = eigenvalue_list(psi.state(), tol);
  if (!lists_equal(mu, mu_psi)) {
    emit(Json{{"recognized", false}, {"detail", "the two spectra differ"}});
    return kExitFalse;
  }
  const CMatrix u = diagonalizing_unitary(phi.state(), tol);
  const CMatrix v = diagonalizing_unitary(psi.state(), tol);
  const MatrixMap in_frame = transport(gamma, u, v, tol);
  const auto params = recognize_q_corner(in_frame, mu, phi.dim(), psi.dim(), tol);
  if (!params) {
    emit(Json{{"recognized", false}});
    return kExitFalse;
  }
  emit(Json{{"recognized", true}, {"params", qcorner_to_json(*params, mu)}});
  return kExitTrue;
}

int run_check_hypermax(const std::string& params_path, const Tolerance& tol) {
  const ParsedQCorner parsed = qcorner_from_json(load_json_file(params_path));
  const HyperMaxVerdict verdict = is_hyper_maximal(parsed.params, parsed.mu, tol);
  emit(hypermax_to_json(verdict));
  return verdict.verdict ? kExitTrue : kExitFalse;
}

int run_decide_cocycle(const std::string& phi_path, const std::string& psi_path,
                       const std::string& weight, const std::string& eta_weight,
                       const Tolerance& tol) {
  const RankOneMap phi = load_rank_one(phi_path, tol);
  const RankOneMap psi = load_rank_one(psi_path, tol);
  PowersWeightTag nu{parse_weight_kind(weight), "shared"};
  PowersWeightTag eta = nu;
  if (!eta_weight.empty()) {
    nu.note = "nu";
    eta = PowersWeightTag{parse_weight_kind(eta_weight), "eta"};
  }
  const CocycleVerdict verdict = decide_cocycle(phi, psi, nu, eta);
  emit(cocycle_to_json(verdict));
  return verdict.outcome == CocycleOutcome::CocycleConjugate ? kExitTrue : kExitFalse;
}

int run_selftest(std::uint64_t seed) {
  const auto results = run_acceptance(seed);
  Json rows = Json::array();
  for (const auto& r : results)
    rows.push_back(Json{
        {"number", r.number}, {"name", r.name}, {"passed", r.passed}, {"note", r.note}});
  const bool good = all_passed(results);
  emit(Json{{"criteria", rows}, {"all_passed", good}, {"seed", seed}});
  return good ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical decisions about q-positive maps and their corners"};
  app.require_subcommand(1);

  double tol = 1e-9;
  std::string grid_spec = "50,1e-3,1e4";
  std::uint64_t seed = 20260822;
  std::string input, phi_path, psi_path, params_path;
  std::string weight = "form-f", eta_weight;

  app.add_option("--tol", tol, "positivity tolerance")->capture_default_str();
  app.add_option("--t-grid", grid_spec, "resolvent grid as count,min,max")
      ->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized suites")->capture_default_str();

  auto add_input = [&](CLI::App* cmd) { cmd->add_option("--input", input, "input JSON file"); };
  auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("--phi", phi_path, "first map JSON file");
    cmd->add_option("--psi", psi_path, "second map JSON file");
  };
  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--params", params_path, "template parameter JSON file");
  };

  CLI::App* check_cp = app.add_subcommand("check-cp", "is the map completely positive");
  add_input(check_cp);
  CLI::App* check_qpos = app.add_subcommand("check-qpos", "scan the resolvent family");
  add_input(check_qpos);
  CLI::App* dominates = app.add_subcommand("q-dominates", "compare two resolvent families");
  add_pair(dominates);
  CLI::App* lphi = app.add_subcommand("lphi", "large-t limit of t phi (1 + t phi)^-1");
  add_input(lphi);
  CLI::App* eigenlist = app.add_subcommand("eigenlist", "spectrum of the implementing state");
  add_input(eigenlist);
  CLI::App* make_qc = app.add_subcommand("make-qcorner", "assemble the classified block");
  add_params(make_qc);
  CLI::App* check_qc = app.add_subcommand("check-qcorner", "decide the q-corner property");
  add_params(check_qc);
  add_input(check_qc);
  add_pair(check_qc);
  CLI::App* recognize = app.add_subcommand("recognize-qcorner", "match a block to the family");
  add_input(recognize);
  add_pair(recognize);
  CLI::App* hypermax = app.add_subcommand("check-hypermax", "decide hyper-maximality");
  add_params(hypermax);
  CLI::App* cocycle = app.add_subcommand("decide-cocycle", "decide cocycle conjugacy");
  add_pair(cocycle);
  cocycle->add_option("--weight", weight, "weight kind: form-f or general")
      ->capture_default_str();
  cocycle->add_option("--eta", eta_weight, "second weight kind when it differs");
  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suites");

  // Let --tol/--t-grid/--seed appear after the subcommand name as well.
  for (CLI::App* sub : {check_cp, check_qpos, dominates, lphi, eigenlist, make_qc, check_qc,
                        recognize, hypermax, cocycle, selftest})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit(Json{{"error", {{"code", "usage"}, {"message", e.what()}}}});
    return kExitBadInput;
  }

  try {
    const Tolerance tolerance = tolerance_of(tol);
    const std::vector<double> grid = parse_grid(grid_spec);
    if (app.got_subcommand(check_cp)) return run_check_cp(input, tolerance);
    if (app.got_subcommand(check_qpos)) return run_check_qpos(input, grid, tolerance);
    if (app.got_subcommand(dominates))
      return run_q_dominates(phi_path, psi_path, grid, tolerance);
    if (app.got_subcommand(lphi)) return run_lphi(input, tolerance);
    if (app.got_subcommand(eigenlist)) return run_eigenlist(input, tolerance);
    if (app.got_subcommand(make_qc)) return run_make_qcorner(params_path, tolerance);
    if (app.got_subcommand(check_qc))
      return run_check_qcorner(params_path, input, phi_path, psi_path, grid, tolerance);
    if (app.got_subcommand(recognize))
      return run_recognize_qcorner(input, phi_path, psi_path, tolerance);
    if (app.got_subcommand(hypermax)) return run_check_hypermax(params_path, tolerance);
    if (app.got_subcommand(cocycle))
      return run_decide_cocycle(phi_path, psi_path, weight, eta_weight, tolerance);
    if (app.got_subcommand(selftest)) return run_selftest(seed);
    emit(Json{{"error", {{"code", "usage"}, {"message", "no subcommand selected"}}}});
    return kExitBadInput;
  } catch (const Error& e) {
    emit(Json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}});
    return kExitBadInput;
  } catch (const std::exception& e) {
    emit(Json{{"error", {{"code", "internal"}, {"message", e.what()}}}});
    return kExitBadInput;
  }
}
