#pragma once

// Two-qubit geometry in four-vector language. A 2x2 hermitian matrix is
// A = (1/2) x^mu sigma_mu with the Lorentz metric g = diag(1,-1,-1,-1), so
// that 4 det A = x^mu x_mu. Determinant-one transformations V act as Lorentz
// transformations; products VA (x) VB bring any strictly positive two-qubit
// state to the diagonal standard form (1/4)(1 + sum_k d_k sigma_k (x) sigma_k).

#include <array>
#include <vector>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/linalg.hpp"

namespace sepgeo {

using FourVector = std::array<double, 4>;
using Triple = std::array<double, 3>;

FourVector to_four_vector(const HermitianOperator& a);
HermitianOperator from_four_vector(const FourVector& x);
double minkowski_dot(const FourVector& x, const FourVector& y);
double lorentz_metric(int mu, int nu);

/// Space inversion R A^T R^dagger, R = [[0,-1],[1,0]]; maps sigma_mu to
/// (1, -sigma).
HermitianOperator bar(const HermitianOperator& a);

/// exp(xi . sigma / 2): hermitian, determinant one.
CMatrix boost(const Triple& rapidity);

/// c^{mu nu} with rho = c^{mu nu} sigma_mu (x) sigma_nu.
using PauliCoefficients = Eigen::Matrix4d;
PauliCoefficients pauli_coefficients(const HermitianOperator& rho);
HermitianOperator from_pauli_coefficients(const PauliCoefficients& c);

/// (1/4)(1 + sum_k d_k sigma_k (x) sigma_k).
HermitianOperator standard_form_matrix(const Triple& d);

/// SU(2) matrix Q with Q sigma_j Q^dagger = sum_i R_ij sigma_i, R in SO(3).
CMatrix su2_from_rotation(const Eigen::Matrix3d& r);

struct StandardForm {
  /// d1 >= d2 >= |d3|.
  Triple d{};
  CMatrix va;
  CMatrix vb;
  /// Largest deviation of the Pauli coefficients of normalize(V rho V^dagger)
  /// from the standard form.
  double residual = 0.0;
  /// Minimum of f(m, n), equal to c~^{00} = Tr(V rho V^dagger) / 4.
  double f_min = 0.0;
  int iterations = 0;
  /// f after every block step, starting from the untransformed state.
  std::vector<double> objective_history;
};

struct Schmidt2x2Options {
  /// Inputs need min eigenvalue above this value.
  double strictness_tol = 1e-8;
  /// Stop when all local Bloch components of the transformed state are below.
  double stationarity_tol = 1e-10;
  int max_iterations = 500;
};

/// Minimizes f(m, n) over product boosts, then rotates the correlation
/// matrix to diagonal form. Throws NotStrictlyPositive or NonConvergence.
StandardForm schmidt_2x2(const BipartiteState& s, const Schmidt2x2Options& opts = {});

/// {(1 + (d1-d2) + d3)/4, (1 - (d1-d2) + d3)/4, (1 + (d1+d2) - d3)/4, (1 - (d1+d2) - d3)/4}.
std::array<double, 4> standard_form_eigenvalues(const Triple& d);

/// |d1| + |d2| + |d3| <= 1 (+1e-12).
bool octahedron_separable(const Triple& d);

struct WeightedProduct {
  double weight = 0.0;
  PureProductState state;
};

/// The two weight-1/2 product projectors whose mixture is
/// (1/4)(1 + sign sigma_k (x) sigma_k), axis k in {1,2,3}.
std::vector<WeightedProduct> corner_decomposition(int axis, int sign);

/// Sum of weight * projector.
CMatrix mixture_matrix(const std::vector<WeightedProduct>& atoms);

struct Separability2x2 {
  bool separable = false;
  /// Weight eps of the maximally mixed state mixed into a singular input.
  double perturbation = 0.0;
  StandardForm form;
  /// Product-state decomposition of the (perturbed) input when separable.
  std::vector<WeightedProduct> decomposition;
  double reconstruction_residual = 0.0;
  /// Smallest eigenvalue of the partial transpose; negative certifies entanglement.
  double pt_min_eigenvalue = 0.0;
};

/// Exact two-qubit separability test through the standard form.
Separability2x2 separable_2x2(const BipartiteState& s, const Schmidt2x2Options& opts = {},
                              double perturbation = 1e-7);

}  // namespace sepgeo
