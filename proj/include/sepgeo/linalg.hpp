#pragma once

// Dense hermitian-matrix algebra: the operator and state types, a cyclic
// Jacobi eigensolver, orthonormal operator bases and the Hilbert-Schmidt
// metric.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sepgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kJacobiTol = 1e-13;

/// How a non-unitary conjugation treats the trace of the result.
enum class Normalization { renormalize, preserve };

/// An n x n complex hermitian matrix. Hermiticity is checked on construction
/// (relative to the matrix scale) and then enforced exactly.
class HermitianOperator {
public:
  HermitianOperator() = default;
  explicit HermitianOperator(const CMatrix& m, double tol = kHermiticityTol);

  /// Hermitian part of `m`, without any check.
  static HermitianOperator hermitian_part(const CMatrix& m);
  static HermitianOperator identity(Index n);
  static HermitianOperator zero(Index n);

  Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

private:
  struct Unchecked {};
  HermitianOperator(CMatrix m, Unchecked) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
public:
  explicit DensityMatrix(HermitianOperator op, double positivity_tol = kPositivityTol);
  explicit DensityMatrix(const CMatrix& m, double positivity_tol = kPositivityTol)
      : DensityMatrix(HermitianOperator(m), positivity_tol) {}

  static DensityMatrix maximally_mixed(Index n);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const CVector& psi);
  /// Divides a positive hermitian operator by its trace.
  static DensityMatrix normalized(const HermitianOperator& op,
                                  double positivity_tol = kPositivityTol);

  Index dim() const noexcept { return op_.dim(); }
  const HermitianOperator& op() const noexcept { return op_; }
  const CMatrix& matrix() const noexcept { return op_.matrix(); }
  operator const HermitianOperator&() const noexcept { return op_; }

private:
  HermitianOperator op_;
};

/// Eigenvalues sorted descending; column k of `vectors` belongs to values[k].
struct Spectrum {
  RVector values;
  CMatrix vectors;
};

/// Cyclic Jacobi diagonalization of the hermitian part of `m`.
Spectrum jacobi_eigensystem(const CMatrix& m);
Spectrum spectral_decompose(const HermitianOperator& a);
double min_eigenvalue(const CMatrix& m);
inline double min_eigenvalue(const HermitianOperator& a) { return min_eigenvalue(a.matrix()); }

/// Applies a real function to the spectrum of a hermitian matrix.
CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& f);

/// Orthonormal basis of the hermitian n x n matrices, Tr(J_a J_b) = delta_ab.
///
/// Element 0 is identity/sqrt(n). The traceless elements follow in a fixed
/// order: symmetric pairs (|j><k| + |k><j|)/sqrt(2) for j < k in
/// lexicographic order, antisymmetric pairs (-i|j><k| + i|k><j|)/sqrt(2) in
/// the same order, then the diagonal elements
/// (sum_{j<l} |j><j| - l|l><l|)/sqrt(l(l+1)) for l = 1..n-1.
/// For n = 2 this is {1, sigma_1, sigma_2, sigma_3}/sqrt(2).
struct OperatorBasis {
  Index dim = 0;
  std::vector<HermitianOperator> elements;

  std::size_t size() const noexcept { return elements.size(); }
  const HermitianOperator& operator[](std::size_t a) const { return elements[a]; }
};

OperatorBasis su_basis(Index n);

/// Real coordinates xi_a = Tr(A J_a), so that A = sum_a xi_a J_a.
RVector expand(const HermitianOperator& a, const OperatorBasis& basis);
HermitianOperator reconstruct(const RVector& coefficients, const OperatorBasis& basis);

/// Tr(AB).
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);
/// sqrt(Tr((A-B)^2) / 2).
double hs_distance(const HermitianOperator& a, const HermitianOperator& b);
inline double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return hs_distance(a.op(), b.op());
}

/// von Neumann entropy -Tr(rho ln rho) with 0 ln 0 = 0.
double entropy(const DensityMatrix& rho);

/// V A V^dagger. Throws SingularMatrix when V is not invertible.
HermitianOperator conjugate(const HermitianOperator& a, const CMatrix& v);
/// V rho V^dagger as a state. With Normalization::preserve the trace must
/// already be one (V unitary), otherwise InvalidInput is thrown.
DensityMatrix conjugate(const DensityMatrix& rho, const CMatrix& v, Normalization mode);

HermitianOperator transpose(const HermitianOperator& a);
DensityMatrix transpose(const DensityMatrix& rho);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Throws SingularMatrix unless `v` is square and numerically invertible.
void require_invertible(const CMatrix& v, const char* what);

/// Pauli matrices sigma_0 (identity) to sigma_3.
const CMatrix& pauli(int mu);

}  // namespace sepgeo
