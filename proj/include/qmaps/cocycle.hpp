#pragma once

#include <optional>
#include <string>

#include "qmaps/qcorners.hpp"

namespace qmaps {

// Symbolic tag for the boundary weight attached to each map. Weights of the
// special form carry enough structure for a full decision; for a general
// type II weight only the necessary condition is available.
enum class WeightKind { TypeII_FormF, TypeII_General };

struct PowersWeightTag {
  WeightKind kind = WeightKind::TypeII_General;
  std::string note;  // identifies the weight; equal tags mean the same weight

  bool operator==(const PowersWeightTag&) const = default;
};

enum class CocycleOutcome {
  CocycleConjugate,
  NotCocycleConjugate,
  NecessaryConditionFailed,
  Inconclusive,
};

const char* to_string(CocycleOutcome outcome);
const char* to_string(WeightKind kind);

struct CocycleVerdict {
  CocycleOutcome outcome = CocycleOutcome::Inconclusive;
  std::string detail;
  EigenvalueList list_phi;
  EigenvalueList list_psi;
  Index n = 0;
  Index nprime = 0;
};

// Decides whether the semigroups induced by (phi, nu) and (psi, eta) are
// cocycle conjugate. Matching eigenvalue lists are necessary for any type II
// weights; with one shared weight of the special form, equal lists plus equal
// dimension is also sufficient, and unequal dimension refutes.
CocycleVerdict decide_cocycle(const RankOneMap& phi, const RankOneMap& psi,
                              const PowersWeightTag& nu, const PowersWeightTag& eta,
                              double list_tol = 1e-8);

// The hyper-maximal q-corner certifying a positive decision: frame unitaries
// for both maps plus classified parameters (X = 1, E = 1, lambda = 1). The
// corner itself is transport(build_q_corner(mu, params), U*, V*). Empty when
// the dimensions or lists do not match.
struct HyperMaxCorner {
  CMatrix u;
  CMatrix v;
  QCornerParams params;
};

std::optional<HyperMaxCorner> hyper_maximal_corner_between(const RankOneMap& phi,
                                                           const RankOneMap& psi,
                                                           const Tolerance& tol = {});

}  // namespace qmaps
