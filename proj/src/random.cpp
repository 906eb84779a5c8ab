#include "sepgeo/random.hpp"

#include "sepgeo/errors.hpp"

namespace sepgeo {

CMatrix random_ginibre(Index n, Index m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

CVector random_unit_vector(Index n, Rng& rng) {
  CVector v = random_ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_unitary(Index n, Rng& rng) {
  const CMatrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

DensityMatrix random_density_matrix(Index n, Index rank, Rng& rng) {
  if (rank < 1 || rank > n) throw InvalidInput("random_density_matrix: rank must be in 1..n");
  const CMatrix g = random_ginibre(n, rank, rng);
  return DensityMatrix::normalized(HermitianOperator::hermitian_part(g * g.adjoint()));
}

HermitianOperator random_hermitian(Index n, Rng& rng) {
  return HermitianOperator::hermitian_part(random_ginibre(n, n, rng));
}

}  // namespace sepgeo
