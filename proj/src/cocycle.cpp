#include "qmaps/cocycle.hpp"

namespace qmaps {

const char* to_string(CocycleOutcome outcome) {
  switch (outcome) {
    case CocycleOutcome::CocycleConjugate: return "CocycleConjugate";
    case CocycleOutcome::NotCocycleConjugate: return "NotCocycleConjugate";
    case CocycleOutcome::NecessaryConditionFailed: return "NecessaryConditionFailed";
    case CocycleOutcome::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::TypeII_FormF: return "type-II-form-f";
    case WeightKind::TypeII_General: return "type-II-general";
  }
  return "unknown";
}

CocycleVerdict decide_cocycle(const RankOneMap& phi, const RankOneMap& psi,
                              const PowersWeightTag& nu, const PowersWeightTag& eta,
                              double list_tol) {
  CocycleVerdict out;
  out.n = phi.dim();
  out.nprime = psi.dim();
  out.list_phi = eigenvalue_list(phi.state());
  out.list_psi = eigenvalue_list(psi.state());

  if (!lists_equal(out.list_phi, out.list_psi, list_tol)) {
    // Necessary for any type II weights, so unequal lists always refute.
    out.outcome = CocycleOutcome::NotCocycleConjugate;
    out.detail = "eigenvalue lists differ";
    return out;
  }

  const bool shared_form_f =
      nu.kind == WeightKind::TypeII_FormF && eta.kind == WeightKind::TypeII_FormF && nu == eta;
  if (!shared_form_f) {
    out.outcome = CocycleOutcome::Inconclusive;
    out.detail = "equal lists; decision needs one shared weight of the special form";
    return out;
  }

  if (out.n == out.nprime) {
    out.outcome = CocycleOutcome::CocycleConjugate;
    out.detail = "equal lists and equal dimension over a shared special-form weight";
  } else {
    out.outcome = CocycleOutcome::NotCocycleConjugate;
    out.detail = "equal lists but different dimensions over a shared special-form weight";
  }
  return out;
}

std::optional<HyperMaxCorner> hyper_maximal_corner_between(const RankOneMap& phi,
                                                           const RankOneMap& psi,
                                                           const Tolerance& tol) {
  if (phi.dim() != psi.dim()) return std::nullopt;
  const EigenvalueList mu = eigenvalue_list(phi.state(), tol);
  const EigenvalueList r = eigenvalue_list(psi.state(), tol);
  if (!lists_equal(mu, r)) return std::nullopt;

  HyperMaxCorner out;
  out.u = diagonalizing_unitary(phi.state(), tol);
  out.v = diagonalizing_unitary(psi.state(), tol);
  out.params.k = mu.k();
  out.params.n = phi.dim();
  out.params.nprime = psi.dim();
  out.params.x = CMatrix::Identity(mu.k(), mu.k());
  out.params.e = CMatrix::Identity(phi.dim() - mu.k(), psi.dim() - mu.k());
  out.params.lambda = 1.0;
  return out;
}

}  // namespace qmaps
