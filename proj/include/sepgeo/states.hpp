#pragma once

// Named families of bipartite states used by the CLI, the section maps and
// the tests.

#include <optional>
#include <string>
#include <vector>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/solver.hpp"

namespace sepgeo {

BipartiteState maximally_mixed_state(Dims dims);

/// |Phi+><Phi+| with Phi+ = sum_i |ii> / sqrt(n), on n x n.
BipartiteState bell_state(Index n);

/// p |Phi+><Phi+| + (1 - p) 1/4 on two qubits, p in [-1/3, 1].
BipartiteState werner_state(double p);

/// The 3x3 family of P. Horodecki, Phys. Lett. A 232, 333 (1997):
///
///   1/(8a+1) * [ a 0 0 0 a 0 0 0 a ]
///              [ 0 a 0 0 0 0 0 0 0 ]
///              [ 0 0 a 0 0 0 0 0 0 ]
///              [ 0 0 0 a 0 0 0 0 0 ]
///              [ a 0 0 0 a 0 0 0 a ]
///              [ 0 0 0 0 0 a 0 0 0 ]
///              [ 0 0 0 0 0 0 b 0 c ]
///              [ 0 0 0 0 0 0 0 a 0 ]
///              [ a 0 0 0 a 0 c 0 b ]
///
/// with b = (1+a)/2, c = sqrt(1-a^2)/2. PPT and entangled for 0 < a < 1.
/// This only builds the matrix; make_state checks both properties.
BipartiteState horodecki_3x3(double a);

BipartiteState pure_product_state(const CVector& phi, const CVector& chi);

struct GeneratedState {
  BipartiteState state;
  /// Smallest eigenvalue of the partial transpose.
  double pt_min_eigenvalue = 0.0;
  /// Distance to the separable set, when the family required the solver.
  std::optional<double> distance;
};

/// Families: maximally_mixed (params: nA, nB), bell (n), werner (p),
/// ppt_entangled_3x3 (a), pure_product (phi, chi through the vector
/// arguments). Throws InvalidInput for unknown families and out-of-range
/// parameters. ppt_entangled_3x3 is checked to pass the Peres test and to
/// have solver distance above 1e-6; a failure of either throws
/// FailsPrecondition.
GeneratedState make_state(const std::string& family, const std::vector<double>& params,
                          const CVector& phi = {}, const CVector& chi = {}, const SolverOptions& opts = {});

}  // namespace sepgeo
