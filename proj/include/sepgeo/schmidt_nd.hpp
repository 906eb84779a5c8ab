#pragma once

// Operator Schmidt decomposition under SL(nA,C) x SL(nB,C) product
// transformations: any strictly positive state is mapped, after
// renormalization, to
//
//   (1/(nA nB)) (1 + sum_k xi_k J~A_k (x) J~B_k)
//
// with vanishing local Bloch vectors and orthonormal traceless J~A, J~B.

#include <vector>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/linalg.hpp"

namespace sepgeo {

/// xi_ab = Tr(rho (J^A_a (x) J^B_b)) over su_basis(nA) x su_basis(nB), so
/// that rho = sum_ab xi_ab J^A_a (x) J^B_b. Shape nA^2 x nB^2.
RMatrix correlation_expand(const BipartiteOperator& s);
HermitianOperator correlation_reconstruct(const RMatrix& xi, Dims dims);

struct HermitianFactor {
  /// Hermitian, determinant one, with rho = scale * v * v.
  CMatrix v;
  /// (det rho)^(1/n).
  double scale = 0.0;
};

/// rho = N V^2 with V = (rho / N)^(1/2), N = (det rho)^(1/n). Throws
/// SingularMatrix when rho is not strictly positive.
HermitianFactor hermitian_factorize(const DensityMatrix& rho);

/// Tr(rho (ra (x) rb)) / ((det ra)^(1/nA) (det rb)^(1/nB)) for positive
/// definite ra, rb (normalization is irrelevant).
double product_objective(const BipartiteState& s, const CMatrix& ra, const CMatrix& rb);

struct ProductMinimizeOptions {
  double strictness_tol = 1e-8;
  /// Stop when the gradient of log f in exponential coordinates is below this.
  double gradient_tol = 1e-10;
  int max_iterations = 5000;
};

struct ProductMinimum {
  DensityMatrix tau_a;
  DensityMatrix tau_b;
  double f_min = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  /// f after every block step.
  std::vector<double> objective_history;
};

/// Interior minimizer of product_objective. Throws NotStrictlyPositive or
/// NonConvergence.
ProductMinimum product_minimize(const BipartiteState& s, const ProductMinimizeOptions& opts = {});

struct SchmidtDecomposition {
  /// Non-negative coefficients in descending order, min(nA,nB)^2 - 1 of them.
  std::vector<double> xi;
  std::vector<HermitianOperator> basis_a;
  std::vector<HermitianOperator> basis_b;
  /// Determinant-one hermitian factors, tau = T^dagger T.
  CMatrix ta;
  CMatrix tb;
  /// normalize(T rho T^dagger) with T = ta (x) tb.
  BipartiteState transformed;
  /// Largest |Tr(rho~ J (x) 1)|, |Tr(rho~ 1 (x) J)| over the traceless generators.
  double gentrace_residual = 0.0;
  /// Largest entry of rho~ minus its Schmidt reconstruction.
  double reconstruction_residual = 0.0;
  double f_min = 0.0;
};

SchmidtDecomposition transform_to_schmidt(const BipartiteState& s, const ProductMinimizeOptions& opts = {});

/// Schmidt reconstruction (1/(nA nB)) (1 + sum_k xi_k J~A_k (x) J~B_k).
HermitianOperator schmidt_reconstruct(const SchmidtDecomposition& d, Dims dims);

}  // namespace sepgeo
