#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmaps/cpmap.hpp"

namespace qmaps {

// Which grid-scan implementation to run. Results are identical slot for slot;
// the parallel path only distributes independent grid points across threads
// (and silently degrades to serial when OpenMP is unavailable).
enum class Exec { serial, parallel };

// Default grid: t = 0 plus `count` log-spaced points in [t_min, t_max].
std::vector<double> t_grid(int count, double t_min, double t_max);
std::vector<double> default_t_grid();
// Default grid extended by a couple of far-out points; used when certifying
// subordination witnesses, where violations can surface only at large t.
std::vector<double> witness_t_grid();

struct QPositivityReport {
  bool verdict = false;
  std::optional<double> failing_t;
  std::optional<double> min_choi_eig_at_failure;
  std::vector<double> grid;
  std::string method = "sampled";  // "sampled" or "closed-form"
};

// phi (1 + t phi)^{-1}. Defined for any endomorphism of a matrix space.
MatrixMap resolvent(const MatrixMap& phi, double t);

// True when no eigenvalue of the action matrix sits on the negative real axis.
bool has_no_negative_eigenvalues(const MatrixMap& phi, const Tolerance& tol = {});

// Scans the resolvent family over the grid for complete positivity.
QPositivityReport is_q_positive(const MatrixMap& phi, std::span<const double> grid,
                                const Tolerance& tol = {}, Exec exec = Exec::parallel);

// Scans resolvent(phi,t) - resolvent(psi,t) over the grid for complete
// positivity; true means phi q-dominates psi.
QPositivityReport q_dominates(const MatrixMap& phi, const MatrixMap& psi,
                              std::span<const double> grid, const Tolerance& tol = {},
                              Exec exec = Exec::parallel);

// Limit of t phi (1 + t phi)^{-1} for t -> infinity: the spectral idempotent
// of the action matrix belonging to its nonzero spectrum. Checked against the
// resolvent at large t; throws LimitDiverged when the two disagree.
MatrixMap limit_idempotent(const MatrixMap& phi, const Tolerance& tol = {});

// Shared core of limit_idempotent and sigma_limit: no contractivity
// precondition, just the spectral construction plus the large-t cross-check.
MatrixMap spectral_limit_idempotent(const MatrixMap& phi, const Tolerance& tol = {});

namespace detail {

// Evaluates eval(grid[i]) for every i, serially or under OpenMP. Each slot is
// computed independently and written to its own index, so the output does not
// depend on scheduling. Exceptions are captured per slot and the lowest-index
// one is rethrown after the loop.
std::vector<double> scan_grid(std::span<const double> grid,
                              const std::function<double(double)>& eval, Exec exec);

// Sentinel for a grid point where the resolvent does not exist (pole); the
// scan treats it as an unbounded violation.
inline constexpr double kPoleValue = -1e300;

// Min Choi eigenvalue of the resolvent (difference) across the grid, poles
// mapped to kPoleValue instead of throwing.
std::vector<double> scan_resolvent_choi(const MatrixMap& phi, const MatrixMap* psi,
                                        std::span<const double> grid, Exec exec);

QPositivityReport report_from_scan(std::span<const double> grid,
                                   const std::vector<double>& values, double threshold);

}  // namespace detail

}  // namespace qmaps
