#include "sepgeo/bipartite.hpp"

#include <cmath>

#include "sepgeo/errors.hpp"

namespace sepgeo {

namespace {

void check_dims(Dims dims, Index n) {
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("subsystem dimensions must be positive");
  if (dims.total() != n) throw DimensionMismatch("subsystem dimensions do not multiply to the matrix dimension");
}

CMatrix partial_transpose_matrix(const CMatrix& m, Dims d, bool on_b) {
  CMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < d.a; ++i)
    for (Index j = 0; j < d.b; ++j)
      for (Index k = 0; k < d.a; ++k)
        for (Index l = 0; l < d.b; ++l) {
          const Index row = i * d.b + j, col = k * d.b + l;
          out(row, col) = on_b ? m(i * d.b + l, k * d.b + j) : m(k * d.b + j, i * d.b + l);
        }
  return out;
}

}  // namespace

BipartiteState::BipartiteState(DensityMatrix rho, Dims dims) : rho_(std::move(rho)), dims_(dims) {
  check_dims(dims_, rho_.dim());
}

BipartiteState BipartiteState::maximally_mixed(Dims dims) {
  return {DensityMatrix::maximally_mixed(dims.total()), dims};
}

BipartiteOperator::BipartiteOperator(HermitianOperator o, Dims d) : op(std::move(o)), dims(d) {
  check_dims(dims, op.dim());
}

PureProductState::PureProductState(CVector phi, CVector chi) : phi_(std::move(phi)), chi_(std::move(chi)) {
  if (phi_.size() == 0 || chi_.size() == 0) throw InvalidDimension("product state factors must be non-empty");
  if (std::abs(phi_.norm() - 1.0) > 1e-12 || std::abs(chi_.norm() - 1.0) > 1e-12)
    throw InvalidInput("product state factors must have unit norm");
}

PureProductState PureProductState::normalized(const CVector& phi, const CVector& chi) {
  const double np = phi.norm(), nc = chi.norm();
  if (np == 0.0 || nc == 0.0) throw InvalidInput("product state factor is zero");
  return {phi / np, chi / nc};
}

CMatrix PureProductState::projector() const {
  const CVector v = vector();
  return v * v.adjoint();
}

CMatrix partial_trace_b(const CMatrix& m, Dims d) {
  CMatrix out = CMatrix::Zero(d.a, d.a);
  for (Index i = 0; i < d.a; ++i)
    for (Index k = 0; k < d.a; ++k)
      for (Index j = 0; j < d.b; ++j) out(i, k) += m(i * d.b + j, k * d.b + j);
  return out;
}

CMatrix partial_trace_a(const CMatrix& m, Dims d) {
  CMatrix out = CMatrix::Zero(d.b, d.b);
  for (Index j = 0; j < d.b; ++j)
    for (Index l = 0; l < d.b; ++l)
      for (Index i = 0; i < d.a; ++i) out(j, l) += m(i * d.b + j, i * d.b + l);
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& s) {
  return {HermitianOperator::hermitian_part(partial_transpose_matrix(s.op.matrix(), s.dims, true)), s.dims};
}

BipartiteOperator partial_transpose_a(const BipartiteOperator& s) {
  return {HermitianOperator::hermitian_part(partial_transpose_matrix(s.op.matrix(), s.dims, false)), s.dims};
}

PeresResult peres_check(const BipartiteState& s, double tol) {
  const double lmin = min_eigenvalue(partial_transpose(s).op);
  return {lmin >= -tol, lmin};
}

BipartiteState product_embed(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  return {DensityMatrix(HermitianOperator::hermitian_part(kron(rho_a.matrix(), rho_b.matrix()))),
          {rho_a.dim(), rho_b.dim()}};
}

CMatrix unit_determinant(const CMatrix& v) {
  require_invertible(v, "unit_determinant");
  const Complex det = v.determinant();
  return v / std::pow(det, 1.0 / static_cast<double>(v.rows()));
}

BipartiteOperator product_transform(const BipartiteOperator& s, const CMatrix& va, const CMatrix& vb) {
  if (va.rows() != s.dims.a || vb.rows() != s.dims.b)
    throw DimensionMismatch("product_transform: factor dimensions differ from subsystem dimensions");
  const CMatrix v = kron(unit_determinant(va), unit_determinant(vb));
  return {HermitianOperator::hermitian_part(v * s.op.matrix() * v.adjoint()), s.dims};
}

BipartiteState product_transform(const BipartiteState& s, const CMatrix& va, const CMatrix& vb,
                                 Normalization mode) {
  const BipartiteOperator out = product_transform(BipartiteOperator(s), va, vb);
  if (mode == Normalization::renormalize) return {DensityMatrix::normalized(out.op), s.dims()};
  return {DensityMatrix(out.op), s.dims()};
}

double first_crossing(const CMatrix& origin, const CMatrix& direction, double tol, double t_max) {
  auto lmin = [&](double t) { return min_eigenvalue(CMatrix(origin + t * direction)); };
  if (!(lmin(0.0) > 0.0)) throw FailsPrecondition("first_crossing: origin must be positive definite");
  double lo = 0.0, hi = 1.0;
  while (lmin(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > t_max) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (lmin(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

SegmentMembership segment_membership(const BipartiteOperator& rho, double tol, double positivity_tol) {
  if (std::abs(rho.op.trace() - 1.0) > kTraceTol) throw InvalidInput("segment_membership: trace must be one");
  const Index n = rho.dims.total();
  const CMatrix origin = CMatrix::Identity(n, n) / static_cast<double>(n);
  const CMatrix direction = rho.op.matrix() - origin;
  const CMatrix pt_direction = partial_transpose(rho).op.matrix() - origin;

  SegmentMembership out;
  out.d_boundary = first_crossing(origin, direction, tol);
  out.pt_boundary = first_crossing(origin, pt_direction, tol);
  out.in_d = min_eigenvalue(rho.op) >= -positivity_tol;
  out.in_p = out.in_d && min_eigenvalue(partial_transpose(rho).op) >= -positivity_tol;
  return out;
}

}  // namespace sepgeo
