#pragma once

#include <json.hpp>
#include <string>

#include "qmaps/cocycle.hpp"

namespace qmaps {

using Json = nlohmann::json;

// Wire format for matrices: {"rows": r, "cols": c, "data": [[re, im], ...]}
// with data in row-major order; a bare number is accepted as a real entry.
// Parsing throws Error(BadInput) on malformed shapes or non-finite values.
CMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const CMatrix& m);

// A map is one of
//   {"kraus": [matrix, ...]}
//   {"action": matrix, "dim_in": n, "dim_out": m}
//   {"rank_one_state": matrix}
// the first two for general algebra maps, the last for the unital family.
MatrixMap map_from_json(const Json& j);

// Corner blocks arrive as a bare action matrix (or the same {"action": ...}
// wrapper) and take their rectangular shape from the surrounding context.
MatrixMap block_action_from_json(const Json& j, MapShape shape);

EigenvalueList list_from_json(const Json& j);
Json list_to_json(const EigenvalueList& list);

// {"k", "n", "nprime", "X": matrix, "E": matrix, "lambda": [re, im], "mu": [..]}
// mu travels with the params so one file describes the whole template.
struct ParsedQCorner {
  QCornerParams params;
  EigenvalueList mu;
};
ParsedQCorner qcorner_from_json(const Json& j);
Json qcorner_to_json(const QCornerParams& params, const EigenvalueList& mu);

// {"kind": "type-II-form-f" | "type-II-general", "note": "..."}
PowersWeightTag weight_from_json(const Json& j);

Json report_to_json(const QPositivityReport& report);
Json hypermax_to_json(const HyperMaxVerdict& verdict);
Json cocycle_to_json(const CocycleVerdict& verdict);

// File loading with parse failures mapped onto Error(BadInput).
Json load_json_file(const std::string& path);

}  // namespace qmaps
