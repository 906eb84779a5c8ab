#pragma once

// Closest separable state in Hilbert-Schmidt distance.
//
// The current approximation rho_s is a convex combination of pure product
// states. Each outer step looks for the product state rho_p maximizing
// Tr(rho_p sigma), sigma = rho - rho_s, by alternating two linked top
// eigenvector problems. If s = Tr((rho_p - rho_s) sigma) > tol the product is
// appended to the atom list and the weights are re-optimized over the whole
// simplex; atoms whose weight drops to zero are discarded. s <= tol
// certifies (up to the local nature of the product search) that rho_s is
// the closest separable state.

#include <cstdint>
#include <limits>
#include <vector>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/errors.hpp"
#include "sepgeo/qubit_geometry.hpp"
#include "sepgeo/random.hpp"

namespace sepgeo {

struct ProductOverlap {
  PureProductState state;
  /// s' = Tr(rho_p sigma) = <phi chi| sigma |phi chi>.
  double value = 0.0;
  /// s' after each half sweep of the best run; non-decreasing.
  std::vector<double> history;
  int sweeps = 0;
};

/// Alternating ascent from a given starting vector chi on subsystem B,
/// stopped when a sweep changes s' by less than `tol`.
ProductOverlap product_overlap_ascent(const CMatrix& sigma, Dims dims, CVector chi, int max_sweeps = 1000,
                                      double tol = 1e-12);

/// Best local maximum of Tr(rho_p sigma) over `restarts` random starting
/// vectors, plus `warm_chi` when given. All starts run to a loose tolerance;
/// the best one is then continued to 1e-12.
ProductOverlap max_product_overlap(const HermitianOperator& sigma, Dims dims, int restarts, Rng& rng,
                                   const CVector* warm_chi = nullptr);

struct HullProjection {
  RVector weights;
  /// F = Tr((rho - sum_k lambda_k rho_pk)^2).
  double f_min = 0.0;
  /// Most negative directional derivative of F towards a simplex vertex.
  double kkt_violation = 0.0;
  int iterations = 0;
};

/// Minimizes F over {lambda >= 0, sum lambda = 1} with an active-set
/// conjugate gradient method. `warm` may hold fewer weights than atoms; the
/// missing ones start at zero.
HullProjection hull_project(const HermitianOperator& rho, const std::vector<PureProductState>& atoms,
                            const RVector* warm = nullptr);

struct SolverOptions {
  /// Stop when the gap s drops to this value.
  double tol = 1e-7;
  int max_iter = 5000;
  int restarts = 8;
  /// Restarts used to confirm a gap below tol before declaring convergence.
  int escalated_restarts = 64;
  std::size_t atom_cap = 2000;
  /// Alternating sweeps used to move each existing atom after the weights
  /// are updated; 0 keeps atoms fixed once found.
  int refine_sweeps = 2;
  /// Levenberg-Marquardt iterations on all atoms per outer iteration.
  int polish_iterations = 5;
  /// When positive, also stop as soon as the distance drops below this
  /// value. The gap is then not certified; SeparableApproximation::stop
  /// says which test ended the run.
  double target_distance = 0.0;
  /// When positive, the gap test also passes once gap <= relative_gap *
  /// distance^2, which bounds the relative error of the distance.
  double relative_gap = 0.0;
  /// Extra product states offered to the initial weight optimization, e.g.
  /// the atoms of a solution for a nearby state.
  std::vector<PureProductState> warm_atoms;
  std::uint64_t seed = 0;
};

enum class StopReason { none, gap, target_distance };

struct SeparableApproximation {
  std::vector<WeightedProduct> atoms;
  CMatrix rho_s;
  /// rho - rho_s.
  CMatrix sigma;
  double distance = 0.0;
  /// sqrt(max(0, distance^2 - gap)): a lower bound on the true distance,
  /// valid when the product search found the global maximum.
  double distance_lower_bound = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  StopReason stop = StopReason::none;
  /// Distance after initialization and after every outer iteration.
  std::vector<double> distance_history;
  /// Total number of product states appended over the run.
  std::size_t products_generated = 0;
};

class IterationBudgetExceeded : public NonConvergence {
public:
  IterationBudgetExceeded(const std::string& what, SeparableApproximation best)
      : NonConvergence(what, best.gap), best_(std::move(best)) {}
  const SeparableApproximation& best() const noexcept { return best_; }

private:
  SeparableApproximation best_;
};

SeparableApproximation closest_separable(const BipartiteState& s, const SolverOptions& opts = {});

struct BoundaryTrace {
  /// Parameter of the separable boundary on the segment rho0 -> direction.
  double t_star = 1.0;
  BipartiteState boundary_state;
  int steps = 0;
  /// Distance reported at t_star (below tol).
  double final_distance = 0.0;
  /// Active atoms of the final approximation.
  std::size_t final_atoms = 0;
  std::vector<double> t_history;
  /// Solver distance at each entry of t_history.
  std::vector<double> distance_history;
  /// Steps taken from a stalled inner solve (no certified lower bound). Each
  /// such step may overshoot into S by up to the distance it was based on.
  int stalled_steps = 0;
};

/// Walks from `direction` towards the maximally mixed state until the
/// distance to the separable set is below `tol`. Each step has the length of
/// the certified lower bound sqrt(d^2 - gap) on that distance, so the walk
/// does not jump over the boundary. Inner solves stop once the distance is
/// below `tol` or the gap is below 1e-2 d^2 (opts.tol is ignored), with at
/// most 1000 iterations each. An inner solve that runs out of iterations
/// without a lower bound but with distance below 10 tol still gives a step,
/// of the distance itself. Throws FailsPrecondition when `direction` is not
/// positive.
BoundaryTrace boundary_trace(const BipartiteOperator& direction, double tol = 1e-6, SolverOptions opts = {});

}  // namespace sepgeo
