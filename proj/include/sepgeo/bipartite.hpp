#pragma once

// Tensor-product structure of a two-party system. Basis vectors follow
// |ij> = |i>_A (x) |j>_B, i.e. row index i * nB + j.

#include <limits>

#include "sepgeo/linalg.hpp"

namespace sepgeo {

struct Dims {
  Index a = 0;
  Index b = 0;

  Index total() const noexcept { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Density matrix of dimension nA * nB together with its factorization.
class BipartiteState {
public:
  BipartiteState(DensityMatrix rho, Dims dims);

  static BipartiteState maximally_mixed(Dims dims);

  const DensityMatrix& rho() const noexcept { return rho_; }
  const CMatrix& matrix() const noexcept { return rho_.matrix(); }
  const HermitianOperator& op() const noexcept { return rho_.op(); }
  Dims dims() const noexcept { return dims_; }

private:
  DensityMatrix rho_;
  Dims dims_;
};

/// Hermitian operator on the product space with no positivity requirement.
/// Partial transposes and points outside the state set live here.
struct BipartiteOperator {
  HermitianOperator op;
  Dims dims;

  BipartiteOperator(HermitianOperator op, Dims dims);
  BipartiteOperator(const BipartiteState& s) : BipartiteOperator(s.op(), s.dims()) {}  // NOLINT
};

/// |phi> (x) |chi> with unit-norm factors.
class PureProductState {
public:
  PureProductState(CVector phi, CVector chi);
  /// Normalizes both factors first.
  static PureProductState normalized(const CVector& phi, const CVector& chi);

  const CVector& phi() const noexcept { return phi_; }
  const CVector& chi() const noexcept { return chi_; }
  Dims dims() const noexcept { return {phi_.size(), chi_.size()}; }
  CVector vector() const { return kron(phi_, chi_); }
  CMatrix projector() const;

private:
  CVector phi_;
  CVector chi_;
};

/// Tr_B: the reduced operator on subsystem A.
CMatrix partial_trace_b(const CMatrix& m, Dims dims);
/// Tr_A: the reduced operator on subsystem B.
CMatrix partial_trace_a(const CMatrix& m, Dims dims);

/// rho^P_{ij;kl} = rho_{il;kj} (transposition of subsystem B).
BipartiteOperator partial_transpose(const BipartiteOperator& s);
/// Transposition of subsystem A, rho_{kj;il}.
BipartiteOperator partial_transpose_a(const BipartiteOperator& s);

struct PeresResult {
  bool pass = false;
  double min_eigenvalue = 0.0;
};

/// Positivity of the partial transpose, up to `tol`.
PeresResult peres_check(const BipartiteState& s, double tol = kPositivityTol);

BipartiteState product_embed(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

/// V / det(V)^(1/n) using the principal complex root.
CMatrix unit_determinant(const CMatrix& v);

/// (VA (x) VB) rho (VA (x) VB)^dagger with VA, VB scaled to determinant one.
BipartiteState product_transform(const BipartiteState& s, const CMatrix& va, const CMatrix& vb,
                                 Normalization mode = Normalization::renormalize);
BipartiteOperator product_transform(const BipartiteOperator& s, const CMatrix& va, const CMatrix& vb);

/// Smallest t > 0 at which the minimum eigenvalue of origin + t * direction
/// reaches zero, located by bisection to `tol`. The minimum eigenvalue of an
/// affine family is concave in t, so with a positive definite origin the
/// crossing is unique. Returns +infinity when no crossing exists below t_max.
double first_crossing(const CMatrix& origin, const CMatrix& direction, double tol, double t_max = 1e8);

struct SegmentMembership {
  bool in_d = false;
  bool in_p = false;
  /// Parameter where min eigenvalue of (1-t) rho0 + t rho vanishes.
  double d_boundary = std::numeric_limits<double>::infinity();
  /// Same for the partial transpose of that segment.
  double pt_boundary = std::numeric_limits<double>::infinity();
};

/// Membership of a unit-trace hermitian operator in D (positive) and in
/// P (positive with positive partial transpose), scanning the segment from
/// the maximally mixed state.
SegmentMembership segment_membership(const BipartiteOperator& rho, double tol = 1e-12,
                                     double positivity_tol = kPositivityTol);

}  // namespace sepgeo
