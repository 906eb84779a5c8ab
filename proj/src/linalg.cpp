#include "sepgeo/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sepgeo/errors.hpp"

namespace sepgeo {

namespace {

constexpr int kMaxJacobiSweeps = 100;

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidDimension("hermitian operator must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol * scale)) {
    std::ostringstream os;
    os << "matrix is not hermitian (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::hermitian_part(const CMatrix& m) {
  return HermitianOperator(CMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOperator HermitianOperator::identity(Index n) {
  return HermitianOperator(CMatrix(CMatrix::Identity(n, n)), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Index n) {
  return HermitianOperator(CMatrix(CMatrix::Zero(n, n)), Unchecked{});
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("operator dimensions differ");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionMismatch("operator dimensions differ");
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(HermitianOperator op, double positivity_tol) : op_(std::move(op)) {
  const double tr = op_.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTol)) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw InvalidInput(os.str());
  }
  const double lmin = min_eigenvalue(op_);
  if (!(lmin >= -positivity_tol)) {
    std::ostringstream os;
    os << "density matrix is not positive (min eigenvalue " << lmin << ")";
    throw InvalidInput(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Index n) {
  if (n < 1) throw InvalidDimension("dimension must be positive");
  return DensityMatrix(HermitianOperator::identity(n) * (1.0 / static_cast<double>(n)));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double nrm = psi.norm();
  if (psi.size() == 0 || nrm == 0.0) throw InvalidInput("pure state vector must be non-zero");
  const CVector u = psi / nrm;
  return DensityMatrix(HermitianOperator::hermitian_part(u * u.adjoint()));
}

DensityMatrix DensityMatrix::normalized(const HermitianOperator& op, double positivity_tol) {
  const double tr = op.trace();
  if (!(tr > 0.0)) throw InvalidInput("cannot normalize an operator with non-positive trace");
  return DensityMatrix(op * (1.0 / tr), positivity_tol);
}

// ---------------------------------------------------------------------------
// Spectral analysis

Spectrum jacobi_eigensystem(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidDimension("eigensystem of a non-square matrix");
  const Index n = m.rows();
  CMatrix a = 0.5 * (m + m.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= kJacobiTol * scale) break;

    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Remove the phase of a_pq, then apply the symmetric Schur rotation.
        const Complex phase = std::conj(apq / mag);
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() > a(j, j).real(); });
  Spectrum out{RVector(n), CMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

Spectrum spectral_decompose(const HermitianOperator& a) { return jacobi_eigensystem(a.matrix()); }

double min_eigenvalue(const CMatrix& m) {
  const Spectrum s = jacobi_eigensystem(m);
  return s.values(s.values.size() - 1);
}

CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& f) {
  const Spectrum s = jacobi_eigensystem(m);
  RVector fv(s.values.size());
  for (Index k = 0; k < fv.size(); ++k) fv(k) = f(s.values(k));
  CMatrix out = s.vectors * fv.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

// ---------------------------------------------------------------------------
// Operator bases

OperatorBasis su_basis(Index n) {
  if (n < 2) throw InvalidDimension("su_basis requires n >= 2");
  OperatorBasis basis;
  basis.dim = n;
  basis.elements.reserve(static_cast<std::size_t>(n * n));
  const double r2 = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);

  basis.elements.push_back(HermitianOperator::identity(n) * (1.0 / std::sqrt(static_cast<double>(n))));
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      CMatrix e = CMatrix::Zero(n, n);
      e(j, k) = r2;
      e(k, j) = r2;
      basis.elements.emplace_back(e);
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      CMatrix e = CMatrix::Zero(n, n);
      e(j, k) = -i1 * r2;
      e(k, j) = i1 * r2;
      basis.elements.emplace_back(e);
    }
  }
  for (Index l = 1; l < n; ++l) {
    CMatrix e = CMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index j = 0; j < l; ++j) e(j, j) = norm;
    e(l, l) = -static_cast<double>(l) * norm;
    basis.elements.emplace_back(e);
  }
  return basis;
}

RVector expand(const HermitianOperator& a, const OperatorBasis& basis) {
  if (a.dim() != basis.dim) throw DimensionMismatch("basis and operator dimensions differ");
  RVector xi(static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) xi(static_cast<Index>(k)) = hs_inner(a, basis[k]);
  return xi;
}

HermitianOperator reconstruct(const RVector& coefficients, const OperatorBasis& basis) {
  if (coefficients.size() != static_cast<Index>(basis.size()))
    throw DimensionMismatch("coefficient count does not match basis size");
  CMatrix m = CMatrix::Zero(basis.dim, basis.dim);
  for (std::size_t k = 0; k < basis.size(); ++k) m += coefficients(static_cast<Index>(k)) * basis[k].matrix();
  return HermitianOperator::hermitian_part(m);
}

// ---------------------------------------------------------------------------
// Metric and entropy

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("hs_inner: dimensions differ");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double hs_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("hs_distance: dimensions differ");
  return std::sqrt(0.5 * (a.matrix() - b.matrix()).squaredNorm());
}

double entropy(const DensityMatrix& rho) {
  const Spectrum s = spectral_decompose(rho.op());
  double h = 0.0;
  for (Index k = 0; k < s.values.size(); ++k) {
    const double p = s.values(k);
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

// ---------------------------------------------------------------------------
// Conjugations

void require_invertible(const CMatrix& v, const char* what) {
  if (v.rows() != v.cols() || v.rows() == 0) throw InvalidDimension(std::string(what) + ": matrix must be square");
  Eigen::JacobiSVD<CMatrix> svd(v);
  const RVector& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-13 * sv(0))) throw SingularMatrix(std::string(what) + ": matrix is singular");
}

HermitianOperator conjugate(const HermitianOperator& a, const CMatrix& v) {
  if (v.cols() != a.dim()) throw DimensionMismatch("conjugate: dimensions differ");
  require_invertible(v, "conjugate");
  return HermitianOperator::hermitian_part(v * a.matrix() * v.adjoint());
}

DensityMatrix conjugate(const DensityMatrix& rho, const CMatrix& v, Normalization mode) {
  const HermitianOperator out = conjugate(rho.op(), v);
  if (mode == Normalization::renormalize) return DensityMatrix::normalized(out);
  return DensityMatrix(out);
}

HermitianOperator transpose(const HermitianOperator& a) {
  return HermitianOperator::hermitian_part(a.matrix().transpose());
}

DensityMatrix transpose(const DensityMatrix& rho) { return DensityMatrix(transpose(rho.op())); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

const CMatrix& pauli(int mu) {
  static const std::array<CMatrix, 4> sigma = [] {
    const Complex i1(0.0, 1.0);
    std::array<CMatrix, 4> s;
    s[0] = CMatrix::Identity(2, 2);
    s[1] = CMatrix::Zero(2, 2);
    s[1](0, 1) = 1.0;
    s[1](1, 0) = 1.0;
    s[2] = CMatrix::Zero(2, 2);
    s[2](0, 1) = -i1;
    s[2](1, 0) = i1;
    s[3] = CMatrix::Zero(2, 2);
    s[3](0, 0) = 1.0;
    s[3](1, 1) = -1.0;
    return s;
  }();
  if (mu < 0 || mu > 3) throw InvalidInput("pauli index must be in 0..3");
  return sigma[static_cast<std::size_t>(mu)];
}

}  // namespace sepgeo
