#pragma once

#include <optional>
#include <string>

#include "qmaps/corners.hpp"
#include "qmaps/qpositivity.hpp"

namespace qmaps {

// Parameters of the classified corner family between two rank-one unital maps
// whose diagonal states share the eigenvalue list mu of length k:
//
//   gamma([[B, W], [Q, Y]]) = lambda * tr(X* B Omega) * [[X, 0], [0, E]]
//
// with Omega = diag(mu), X a k x k unitary commuting with Omega, E an
// (n-k) x (n'-k) contraction, and lambda a complex scalar. Such a gamma is a
// q-corner exactly when |lambda|^2 <= Re(lambda), the closed disk of radius
// 1/2 around 1/2.
struct QCornerParams {
  Index k = 0;
  Index n = 0;
  Index nprime = 0;
  CMatrix x;  // k x k
  CMatrix e;  // (n-k) x (n'-k)
  Complex lambda;

  // |lambda - 1/2| <= 1/2, boundary included, absolute tolerance 1e-10.
  bool lambda_in_disk(double eps = 1e-10) const;

  // Structural checks (dimensions, X unitary and commuting, ||E|| <= 1).
  // Deliberately does not constrain lambda: assembling a map with lambda
  // outside the disk is legal, it just fails the q-corner test.
  void validate(const EigenvalueList& mu, const Tolerance& tol = {}) const;
};

// Per-grid-point form of the disk condition: at parameter t the resolvent of
// the assembled template stays CP exactly when |lambda|^2 (1+2t) stays below
// 1 + 2t Re(lambda). At t = 0 this is |lambda| <= 1; as t grows it tightens
// to the disk.
bool disk_condition_at(Complex lambda, double t);

MatrixMap build_q_corner(const EigenvalueList& mu, const QCornerParams& params,
                         const Tolerance& tol = {});

// The full block map of the family: rank-one unital diagonal blocks from mu
// plus the classified gamma.
BlockMap assemble_template(const EigenvalueList& mu, const QCornerParams& params,
                           const Tolerance& tol = {});

// Decides whether gamma is a q-corner from phi to psi (both rank-one unital).
// Arbitrary implementing states are handled by transporting into the
// eigenbasis first. When gamma matches the classified family the verdict is
// the closed-form disk condition; otherwise the assembled block map is
// scanned over the grid.
QPositivityReport is_q_corner(const MatrixMap& gamma, const RankOneMap& phi,
                              const RankOneMap& psi, std::span<const double> grid,
                              const Tolerance& tol = {});

// Matches gamma (already in the diagonal frame) against the classified family
// with list mu; empty when it is not of that form.
std::optional<QCornerParams> recognize_q_corner(const MatrixMap& gamma, const EigenvalueList& mu,
                                                Index n, Index nprime, const Tolerance& tol = {});

enum class HyperMaxReason { DimMismatch, ENotUnitary, LambdaZero, LambdaNotOnBoundary, Pass };

const char* to_string(HyperMaxReason reason);

// Verdict of the hyper-maximality test. A false verdict carries a witness: a
// q-positive block map strictly between the assembled map and zero that keeps
// the same off-diagonal corner, certified on the witness grid (the
// certification margins are recorded alongside).
struct HyperMaxVerdict {
  bool verdict = false;
  HyperMaxReason reason = HyperMaxReason::Pass;
  std::optional<BlockMap> witness;
  std::string witness_note;
  double witness_distance = 0.0;       // operator distance to the assembled map
  double min_domination_eig = 0.0;     // worst Choi eigenvalue of theta - witness scans
  double min_witness_qpos_eig = 0.0;   // worst Choi eigenvalue of witness scans
};

// A valid q-corner of the classified family is hyper-maximal exactly when
// n = n', E is unitary and lambda sits on the disk boundary away from zero.
HyperMaxVerdict is_hyper_maximal(const QCornerParams& params, const EigenvalueList& mu,
                                 const Tolerance& tol = {});

// Frame change for corner blocks: B -> U* gamma(U B V*) V. Sends corners from
// phi to psi to corners from the U-conjugate of phi to the V-conjugate of psi
// and preserves every verdict along the way.
MatrixMap transport(const MatrixMap& gamma, const CMatrix& u, const CMatrix& v,
                    const Tolerance& tol = {});

// Exact splitting of the resolvent of an assembled template map: compressing
// to the paired k x k corners gives `core`, the complementary rows produce
// `tail`, and `tail_cut` is the E-compressed variant of the tail that the
// hyper-maximality witnesses are built from. `residual` measures how far
// core + tail, pulled back to M_{n+n'}, is from the true resolvent, and
// `gamma_formula_residual` checks the scalar closed form of the gamma block.
struct ResolventDecomposition {
  MatrixMap core;      // M_2k -> M_2k
  MatrixMap tail;      // M_2k -> M_{n+n'-2k}
  MatrixMap tail_cut;  // M_2k -> M_{n+n'-2k}
  double residual = 0.0;
  double gamma_formula_residual = 0.0;
};

ResolventDecomposition decompose_resolvent(const BlockMap& theta, double t,
                                           const Tolerance& tol = {});

}  // namespace qmaps
