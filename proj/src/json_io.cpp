#include "qmaps/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qmaps {

namespace {

double finite_number(const Json& j, const char* what) {
  require(j.is_number(), Err::BadInput, std::string(what) + " must be a number");
  const double x = j.get<double>();
  require(std::isfinite(x), Err::BadInput, std::string(what) + " must be finite");
  return x;
}

Complex entry_from_json(const Json& j) {
  if (j.is_number()) return Complex{finite_number(j, "matrix entry"), 0.0};
  require(j.is_array() && j.size() == 2, Err::BadInput,
          "matrix entry must be a number or an [re, im] pair");
  return Complex{finite_number(j[0], "matrix entry"), finite_number(j[1], "matrix entry")};
}

Json entry_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Index index_field(const Json& j, const char* key) {
  require(j.contains(key), Err::BadInput, std::string("missing field \"") + key + "\"");
  require(j[key].is_number_integer(), Err::BadInput, std::string(key) + " must be an integer");
  const auto v = j[key].get<long long>();
  require(v >= 0, Err::BadInput, std::string(key) + " must be nonnegative");
  return static_cast<Index>(v);
}

}  // namespace

CMatrix matrix_from_json(const Json& j) {
  require(j.is_object(), Err::BadInput, "matrix must be an object");
  const Index rows = index_field(j, "rows");
  const Index cols = index_field(j, "cols");
  require(j.contains("data") && j["data"].is_array(), Err::BadInput,
          "matrix needs a \"data\" array");
  const Json& data = j["data"];
  require(static_cast<Index>(data.size()) == rows * cols, Err::BadInput,
          "matrix data length does not match rows*cols");
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k)
      m(i, k) = entry_from_json(data[static_cast<std::size_t>(i * cols + k)]);
  return m;
}

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) data.push_back(entry_to_json(m(i, k)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

MatrixMap map_from_json(const Json& j) {
  require(j.is_object(), Err::BadInput, "map must be an object");
  if (j.contains("kraus")) {
    require(j["kraus"].is_array() && !j["kraus"].empty(), Err::BadInput,
            "\"kraus\" must be a nonempty array of matrices");
    std::vector<CMatrix> ops;
    for (const Json& item : j["kraus"]) ops.push_back(matrix_from_json(item));
    return map_from_kraus(make_kraus(std::move(ops)));
  }
  if (j.contains("action")) {
    const Index n = index_field(j, "dim_in");
    const Index m = index_field(j, "dim_out");
    return MatrixMap::algebra_map(n, m, matrix_from_json(j["action"]));
  }
  if (j.contains("rank_one_state")) {
    const CMatrix rho = matrix_from_json(j["rank_one_state"]);
    return RankOneMap(rho.rows(), State(rho)).as_map();
  }
  fail(Err::BadInput, "map needs \"kraus\", \"action\"+dims, or \"rank_one_state\"");
}

MatrixMap block_action_from_json(const Json& j, MapShape shape) {
  const CMatrix action = matrix_from_json(j.is_object() && j.contains("action") ? j["action"] : j);
  return MatrixMap(shape, action);
}

EigenvalueList list_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), Err::BadInput, "eigenvalue list must be a nonempty array");
  EigenvalueList list;
  for (const Json& item : j) list.values.push_back(finite_number(item, "eigenvalue"));
  for (std::size_t i = 0; i + 1 < list.values.size(); ++i)
    require(list.values[i] >= list.values[i + 1], Err::BadInput,
            "eigenvalue list must be descending");
  require(list.values.back() > 0, Err::BadInput, "eigenvalue list entries must be positive");
  require(std::abs(list.sum() - 1.0) <= 1e-9, Err::BadInput, "eigenvalue list must sum to one");
  return list;
}

Json list_to_json(const EigenvalueList& list) { return Json(list.values); }

ParsedQCorner qcorner_from_json(const Json& j) {
  require(j.is_object(), Err::BadInput, "q-corner parameters must be an object");
  ParsedQCorner out;
  out.params.k = index_field(j, "k");
  out.params.n = index_field(j, "n");
  out.params.nprime = index_field(j, "nprime");
  require(j.contains("X") && j.contains("E") && j.contains("lambda") && j.contains("mu"),
          Err::BadInput, "q-corner parameters need X, E, lambda, mu");
  out.params.x = matrix_from_json(j["X"]);
  out.params.e = matrix_from_json(j["E"]);
  out.params.lambda = entry_from_json(j["lambda"]);
  out.mu = list_from_json(j["mu"]);
  return out;
}

Json qcorner_to_json(const QCornerParams& params, const EigenvalueList& mu) {
  return Json{{"k", params.k},
              {"n", params.n},
              {"nprime", params.nprime},
              {"X", matrix_to_json(params.x)},
              {"E", matrix_to_json(params.e)},
              {"lambda", entry_to_json(params.lambda)},
              {"mu", list_to_json(mu)}};
}

PowersWeightTag weight_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind"), Err::BadInput, "weight needs a \"kind\"");
  PowersWeightTag tag;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == to_string(WeightKind::TypeII_FormF)) {
    tag.kind = WeightKind::TypeII_FormF;
  } else if (kind == to_string(WeightKind::TypeII_General)) {
    tag.kind = WeightKind::TypeII_General;
  } else {
    fail(Err::BadInput, "unknown weight kind \"" + kind + "\"");
  }
  if (j.contains("note")) tag.note = j["note"].get<std::string>();
  return tag;
}

Json report_to_json(const QPositivityReport& report) {
  Json out{{"verdict", report.verdict}, {"method", report.method}, {"t_grid", report.grid}};
  out["failing_t"] = report.failing_t ? Json(*report.failing_t) : Json(nullptr);
  out["min_choi_eig_at_failure"] =
      report.min_choi_eig_at_failure ? Json(*report.min_choi_eig_at_failure) : Json(nullptr);
  return out;
}

Json hypermax_to_json(const HyperMaxVerdict& verdict) {
  Json out{{"verdict", verdict.verdict}, {"reason", to_string(verdict.reason)}};
  if (verdict.witness) {
    out["witness"] = Json{{"n", verdict.witness->n},
                          {"nprime", verdict.witness->nprime},
                          {"phi", matrix_to_json(verdict.witness->phi.action())},
                          {"psi", matrix_to_json(verdict.witness->psi.action())},
                          {"gamma", matrix_to_json(verdict.witness->gamma.action())},
                          {"note", verdict.witness_note},
                          {"distance_to_original", verdict.witness_distance},
                          {"min_domination_eig", verdict.min_domination_eig},
                          {"min_witness_qpos_eig", verdict.min_witness_qpos_eig}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json cocycle_to_json(const CocycleVerdict& verdict) {
  return Json{{"verdict", to_string(verdict.outcome)},
              {"detail", verdict.detail},
              {"list_phi", list_to_json(verdict.list_phi)},
              {"list_psi", list_to_json(verdict.list_psi)},
              {"n", verdict.n},
              {"nprime", verdict.nprime}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::BadInput, "cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(Err::BadInput, std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace qmaps
