#include "sepgeo/schmidt_nd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sepgeo/errors.hpp"

namespace sepgeo {

namespace {

/// det(M)^(1/(2n)) M^(-1/2): the determinant-one congruence that maps the
/// positive definite M to a multiple of the identity.
CMatrix whitening(const CMatrix& m) {
  const Spectrum s = jacobi_eigensystem(m);
  const Index n = m.rows();
  if (!(s.values(n - 1) > 0.0)) throw NonConvergence("reduced operator lost positive definiteness", s.values(n - 1));
  double log_det = 0.0;
  for (Index k = 0; k < n; ++k) log_det += std::log(s.values(k));
  const double scale = std::exp(log_det / (2.0 * static_cast<double>(n)));
  RVector d(n);
  for (Index k = 0; k < n; ++k) d(k) = scale / std::sqrt(s.values(k));
  return s.vectors * d.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

/// Norm of the local Bloch components Tr(rho J (x) 1), Tr(rho 1 (x) J),
/// relative to Tr(rho), with J running over the traceless generators.
/// Equals the gradient of log f in exponential coordinates at the identity.
struct LocalGradient {
  double norm = 0.0;
  double max_abs = 0.0;
};

LocalGradient local_gradient(const CMatrix& rho, Dims dims, const OperatorBasis& ba, const OperatorBasis& bb) {
  const CMatrix ra = partial_trace_b(rho, dims);
  const CMatrix rb = partial_trace_a(rho, dims);
  const double tr = rho.trace().real();
  LocalGradient g;
  double sq = 0.0;
  for (std::size_t k = 1; k < ba.size(); ++k) {
    const double v = hs_inner(HermitianOperator::hermitian_part(ra), ba[k]) / tr;
    sq += v * v;
    g.max_abs = std::max(g.max_abs, std::abs(v));
  }
  for (std::size_t k = 1; k < bb.size(); ++k) {
    const double v = hs_inner(HermitianOperator::hermitian_part(rb), bb[k]) / tr;
    sq += v * v;
    g.max_abs = std::max(g.max_abs, std::abs(v));
  }
  g.norm = std::sqrt(sq);
  return g;
}

void require_strictly_positive(const BipartiteState& s, double tol, const char* what) {
  const double lmin = min_eigenvalue(s.op());
  if (!(lmin > tol)) {
    std::ostringstream os;
    os << what << ": state is not strictly positive (min eigenvalue " << lmin << ")";
    throw NotStrictlyPositive(os.str(), lmin);
  }
}

}  // namespace

RMatrix correlation_expand(const BipartiteOperator& s) {
  const OperatorBasis ba = su_basis(s.dims.a);
  const OperatorBasis bb = su_basis(s.dims.b);
  RMatrix xi(static_cast<Index>(ba.size()), static_cast<Index>(bb.size()));
  for (std::size_t a = 0; a < ba.size(); ++a)
    for (std::size_t b = 0; b < bb.size(); ++b) {
      const HermitianOperator jab = HermitianOperator::hermitian_part(kron(ba[a].matrix(), bb[b].matrix()));
      xi(static_cast<Index>(a), static_cast<Index>(b)) = hs_inner(s.op, jab);
    }
  return xi;
}

HermitianOperator correlation_reconstruct(const RMatrix& xi, Dims dims) {
  const OperatorBasis ba = su_basis(dims.a);
  const OperatorBasis bb = su_basis(dims.b);
  if (xi.rows() != static_cast<Index>(ba.size()) || xi.cols() != static_cast<Index>(bb.size()))
    throw DimensionMismatch("correlation_reconstruct: array shape does not match dims");
  CMatrix m = CMatrix::Zero(dims.total(), dims.total());
  for (std::size_t a = 0; a < ba.size(); ++a)
    for (std::size_t b = 0; b < bb.size(); ++b)
      m += xi(static_cast<Index>(a), static_cast<Index>(b)) * kron(ba[a].matrix(), bb[b].matrix());
  return HermitianOperator::hermitian_part(m);
}

HermitianFactor hermitian_factorize(const DensityMatrix& rho) {
  const Spectrum s = spectral_decompose(rho.op());
  const Index n = rho.dim();
  if (!(s.values(n - 1) > 0.0)) throw SingularMatrix("hermitian_factorize: density matrix is singular");
  double log_det = 0.0;
  for (Index k = 0; k < n; ++k) log_det += std::log(s.values(k));
  HermitianFactor out;
  out.scale = std::exp(log_det / static_cast<double>(n));
  RVector root(n);
  for (Index k = 0; k < n; ++k) root(k) = std::sqrt(s.values(k) / out.scale);
  const CMatrix v = s.vectors * root.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  out.v = 0.5 * (v + v.adjoint());
  return out;
}

double product_objective(const BipartiteState& s, const CMatrix& ra, const CMatrix& rb) {
  const Dims d = s.dims();
  if (ra.rows() != d.a || rb.rows() != d.b) throw DimensionMismatch("product_objective: factor dimensions");
  const double det_a = ra.determinant().real();
  const double det_b = rb.determinant().real();
  if (!(det_a > 0.0 && det_b > 0.0)) throw InvalidInput("product_objective: factors must be positive definite");
  const double num = (s.matrix() * kron(ra, rb)).trace().real();
  return num / (std::pow(det_a, 1.0 / static_cast<double>(d.a)) * std::pow(det_b, 1.0 / static_cast<double>(d.b)));
}

ProductMinimum product_minimize(const BipartiteState& s, const ProductMinimizeOptions& opts) {
  require_strictly_positive(s, opts.strictness_tol, "product_minimize");
  const Dims dims = s.dims();
  if (dims.a < 2 || dims.b < 2) throw InvalidDimension("product_minimize: subsystems must have dimension >= 2");
  const OperatorBasis ba = su_basis(dims.a);
  const OperatorBasis bb = su_basis(dims.b);

  // rho~ = (TA (x) TB) rho (TA (x) TB)^dagger with det TA = det TB = 1, and
  // tau = T^dagger T. Then f(tauA, tauB) = Tr(rho~). Each block step replaces
  // one factor by the exact minimizer with the other held fixed.
  CMatrix ta = CMatrix::Identity(dims.a, dims.a);
  CMatrix tb = CMatrix::Identity(dims.b, dims.b);
  auto transformed = [&] {
    const CMatrix t = kron(ta, tb);
    CMatrix r = t * s.matrix() * t.adjoint();
    return CMatrix(0.5 * (r + r.adjoint()));
  };

  ProductMinimum out{DensityMatrix::maximally_mixed(dims.a), DensityMatrix::maximally_mixed(dims.b), 0.0, 0.0, 0, {}};
  CMatrix current = transformed();
  out.objective_history.push_back(current.trace().real());
  LocalGradient g = local_gradient(current, dims, ba, bb);
  int it = 0;
  while (g.norm >= opts.gradient_tol) {
    if (it >= opts.max_iterations)
      throw NonConvergence("product_minimize: gradient did not vanish within the iteration budget", g.norm);
    ta = unit_determinant(whitening(partial_trace_b(current, dims)) * ta);
    current = transformed();
    out.objective_history.push_back(current.trace().real());
    tb = unit_determinant(whitening(partial_trace_a(current, dims)) * tb);
    current = transformed();
    out.objective_history.push_back(current.trace().real());
    g = local_gradient(current, dims, ba, bb);
    ++it;
  }

  out.tau_a = DensityMatrix::normalized(HermitianOperator::hermitian_part(ta.adjoint() * ta));
  out.tau_b = DensityMatrix::normalized(HermitianOperator::hermitian_part(tb.adjoint() * tb));
  out.f_min = current.trace().real();
  out.gradient_norm = g.norm;
  out.iterations = it;
  return out;
}

SchmidtDecomposition transform_to_schmidt(const BipartiteState& s, const ProductMinimizeOptions& opts) {
  const ProductMinimum pm = product_minimize(s, opts);
  const Dims dims = s.dims();
  const CMatrix ta = hermitian_factorize(pm.tau_a).v;
  const CMatrix tb = hermitian_factorize(pm.tau_b).v;
  const CMatrix t = kron(ta, tb);
  const HermitianOperator raw = HermitianOperator::hermitian_part(t * s.matrix() * t.adjoint());
  const BipartiteState transformed(DensityMatrix::normalized(raw), dims);

  const OperatorBasis ba = su_basis(dims.a);
  const OperatorBasis bb = su_basis(dims.b);
  const double nab = static_cast<double>(dims.total());
  const Index ka = static_cast<Index>(ba.size()) - 1;
  const Index kb = static_cast<Index>(bb.size()) - 1;

  const RMatrix full = correlation_expand(transformed);
  // rho~ = (1/(nA nB)) (1 + sum_kl xi_kl J_k (x) J_l) and Tr(J_k J_l) = delta.
  const RMatrix corr = nab * full.bottomRightCorner(ka, kb);

  Eigen::JacobiSVD<RMatrix> svd(corr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RMatrix u = svd.matrixU();
  RMatrix w = svd.matrixV();
  const RVector& sv = svd.singularValues();
  const Index rank = sv.size();

  SchmidtDecomposition out{{}, {}, {}, ta, tb, transformed};
  out.f_min = pm.f_min;
  for (Index k = 0; k < rank; ++k) {
    // Sign convention: the largest component of each left vector is positive.
    Index arg = 0;
    u.col(k).cwiseAbs().maxCoeff(&arg);
    if (u(arg, k) < 0.0) {
      u.col(k) *= -1.0;
      w.col(k) *= -1.0;
    }
    CMatrix ja = CMatrix::Zero(dims.a, dims.a);
    CMatrix jb = CMatrix::Zero(dims.b, dims.b);
    for (Index i = 0; i < ka; ++i) ja += u(i, k) * ba[static_cast<std::size_t>(i + 1)].matrix();
    for (Index j = 0; j < kb; ++j) jb += w(j, k) * bb[static_cast<std::size_t>(j + 1)].matrix();
    out.xi.push_back(sv(k));
    out.basis_a.push_back(HermitianOperator::hermitian_part(ja));
    out.basis_b.push_back(HermitianOperator::hermitian_part(jb));
  }

  out.gentrace_residual = local_gradient(transformed.matrix(), dims, ba, bb).max_abs;
  out.reconstruction_residual =
      (schmidt_reconstruct(out, dims).matrix() - transformed.matrix()).cwiseAbs().maxCoeff();
  return out;
}

HermitianOperator schmidt_reconstruct(const SchmidtDecomposition& d, Dims dims) {
  CMatrix m = CMatrix::Identity(dims.total(), dims.total());
  for (std::size_t k = 0; k < d.xi.size(); ++k) m += d.xi[k] * kron(d.basis_a[k].matrix(), d.basis_b[k].matrix());
  return HermitianOperator::hermitian_part(m / static_cast<double>(dims.total()));
}

}  // namespace sepgeo
