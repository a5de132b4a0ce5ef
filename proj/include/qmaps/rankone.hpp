#pragma once

#include <optional>
#include <vector>

#include "qmaps/map.hpp"

namespace qmaps {

// A density matrix: positive semidefinite with unit trace.
class State {
 public:
  explicit State(CMatrix density, const Tolerance& tol = {});

  Index dim() const { return density_.rows(); }
  const CMatrix& density() const { return density_; }

  // rho(A) = tr(A * density).
  Complex value(const CMatrix& a) const;

  bool is_diagonal(double eps = 1e-10) const;
  bool is_faithful(const Tolerance& tol = {}) const;

 private:
  CMatrix density_;
};

// Strictly positive eigenvalues in descending order, summing to one. The
// length k can be smaller than the dimension of the state that produced it.
struct EigenvalueList {
  std::vector<double> values;

  Index k() const { return static_cast<Index>(values.size()); }
  double sum() const;
};

EigenvalueList eigenvalue_list(const State& rho, const Tolerance& tol = {});

bool lists_equal(const EigenvalueList& a, const EigenvalueList& b, double tol = 1e-8);

// Unitary whose columns are eigenvectors of the density matrix in descending
// eigenvalue order, so conjugating the state by it gives diag(lambda_1, ...).
CMatrix diagonalizing_unitary(const State& rho, const Tolerance& tol = {});

// The unital map A -> rho(A) * 1 implemented by a state rho.
class RankOneMap {
 public:
  RankOneMap(Index dim, State state);

  Index dim() const { return dim_; }
  const State& state() const { return state_; }
  MatrixMap as_map() const;

  // Recognizes a map of this form; empty when the action is anything else.
  static std::optional<RankOneMap> from_map(const MatrixMap& phi, const Tolerance& tol = {});

 private:
  Index dim_;
  State state_;
};

// Convenience: the map implemented by diag(list padded with zeros) on M_n.
RankOneMap rank_one_from_list(const EigenvalueList& list, Index n);

// Unitary conjugate of a map: A -> U* phi(U A U*) U.
MatrixMap conjugate_map(const MatrixMap& phi, const CMatrix& u, const Tolerance& tol = {});

// Two rank-one unital maps are conjugate exactly when they act on the same
// algebra and their eigenvalue lists agree.
bool are_conjugate(const RankOneMap& phi, const RankOneMap& psi, double tol = 1e-8);

// Faithful implementing state, i.e. the list has full length.
bool is_q_pure(const RankOneMap& phi, const Tolerance& tol = {});

}  // namespace qmaps
