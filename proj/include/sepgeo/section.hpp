#pragma once

// Two-dimensional planar sections through the maximally mixed state and the
// three nested boundaries along rays in such a plane: the state boundary D
// (det rho = 0), the Peres boundary P (det rho^P = 0 or det rho = 0,
// whichever comes first) and the separable boundary S found by the solver.

#include <string>
#include <vector>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/solver.hpp"

namespace sepgeo {

struct SectionPlane {
  Dims dims;
  /// Maximally mixed state.
  CMatrix origin;
  /// Traceless, hs_inner(e1, e2) = 0 and hs_inner(ei, ei) = 2, so that
  /// rho0 + u e1 + v e2 lies at Hilbert-Schmidt distance sqrt(u^2 + v^2)
  /// from rho0.
  CMatrix e1;
  CMatrix e2;
  std::vector<std::string> anchor_names;

  CMatrix at(double u, double v) const { return origin + u * e1 + v * e2; }
};

/// e1 points from rho0 towards `first`; e2 spans the rest of the plane
/// through `second`. Throws InvalidInput when the three points are collinear.
SectionPlane make_plane(const BipartiteState& first, const BipartiteState& second, std::string first_name = "first",
                        std::string second_name = "second");

/// Default 3x3 plane: rho0, bell_state(3) and horodecki_3x3(a).
SectionPlane default_plane_3x3(double a = 0.5);

enum class BoundaryKind { state, peres, separable };
std::string to_string(BoundaryKind k);

struct SectionRow {
  int ray = 0;
  double angle = 0.0;
  BoundaryKind kind = BoundaryKind::state;
  /// Hilbert-Schmidt distance from rho0 along the ray.
  double radius = 0.0;
  double u = 0.0;
  double v = 0.0;
  /// Defining residual: min eigenvalue of rho or rho^P at the point for the
  /// state and Peres boundaries, solver distance for the separable one.
  double residual = 0.0;
  /// Separable boundary only: solver distance at the Peres point, boundary
  /// steps and active atoms at the end.
  double start_distance = 0.0;
  int steps = 0;
  std::size_t atoms = 0;
  /// Empty when the point was computed, otherwise the error message.
  std::string error;
  /// Peres boundary only: true when the PPT crossing lies beyond the state
  /// boundary, so that det rho = 0 alone sets it.
  bool limited_by_state = false;
};

struct SectionOptions {
  int rays = 72;
  /// Accuracy of all three boundaries.
  double tol = 1e-6;
  SolverOptions solver;
  /// Skip the separable boundary (the expensive part).
  bool separable = true;
};

/// Three rows per ray (state, peres, separable). Solver failures on a ray are
/// recorded in SectionRow::error; the sweep continues. Ray i uses solver seed
/// opts.solver.seed + i so each ray is reproducible on its own.
std::vector<SectionRow> map_section(const SectionPlane& plane, const SectionOptions& opts = {});

enum class Coordinates { hs, fig5 };

/// CSV with a leading '# format_version 1' comment. With Coordinates::fig5
/// radii and (u, v) are multiplied by sqrt(2).
std::string section_csv(const std::vector<SectionRow>& rows, Coordinates coords);

}  // namespace sepgeo
