#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sepgeo/errors.hpp"
#include "sepgeo/linalg.hpp"
#include "sepgeo/random.hpp"

using namespace sepgeo;

namespace {

CMatrix basis_gram(const OperatorBasis& b) {
  const auto n = static_cast<Index>(b.size());
  CMatrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = (b[i].matrix() * b[j].matrix()).trace();
  return g;
}

}  // namespace

TEST_CASE("su_basis is orthonormal with the identity first") {
  for (Index n = 2; n <= 5; ++n) {
    const OperatorBasis b = su_basis(n);
    REQUIRE(b.size() == static_cast<std::size_t>(n * n));
    const CMatrix g = basis_gram(b);
    CHECK((g - CMatrix::Identity(n * n, n * n)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b[0].matrix() - CMatrix::Identity(n, n) / std::sqrt(double(n))).norm() < 1e-15);
    for (std::size_t a = 1; a < b.size(); ++a) CHECK(std::abs(b[a].trace()) < 1e-15);
  }
}

TEST_CASE("su_basis(2) is the Pauli basis over sqrt 2") {
  const OperatorBasis b = su_basis(2);
  for (int k = 0; k < 4; ++k) CHECK((b[k].matrix() - oracle::pauli(k) / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("su_basis rejects n < 2") {
  CHECK_THROWS_AS(su_basis(1), InvalidDimension);
  CHECK_THROWS_AS(su_basis(0), InvalidDimension);
}

TEST_CASE("expansion of a state has xi_0 = 1/sqrt(n) and round-trips") {
  Rng rng(11);
  for (Index n : {2, 3, 4, 6}) {
    const DensityMatrix rho = random_density_matrix(n, n, rng);
    const OperatorBasis b = su_basis(n);
    const RVector xi = expand(rho.op(), b);
    CHECK(xi(0) == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-13));
    CHECK((reconstruct(xi, b).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Jacobi eigenvalues agree with Eigen's solver") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 3, 4, 6, 9, 12, 16}) {
    for (int rep = 0; rep < 5; ++rep) {
      const CMatrix a = oracle::random_hermitian(n, rng);
      const Spectrum s = spectral_decompose(HermitianOperator(a));
      const Eigen::VectorXd ref = oracle::eigenvalues(a);
      for (int k = 0; k < n; ++k) CHECK(s.values(k) == doctest::Approx(ref(n - 1 - k)).epsilon(1e-12).scale(1.0));
      // reconstruction and orthonormality
      const CMatrix rec = s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
      CHECK((rec - a).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((s.vectors.adjoint() * s.vectors - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
      // sum = trace, product = det
      CHECK(s.values.sum() == doctest::Approx(a.trace().real()).epsilon(1e-9).scale(1.0));
      const double det = a.determinant().real();
      CHECK(s.values.prod() == doctest::Approx(det).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("spectra of simple states") {
  const Spectrum mm = spectral_decompose(DensityMatrix::maximally_mixed(5).op());
  for (Index k = 0; k < 5; ++k) CHECK(mm.values(k) == doctest::Approx(0.2));
  CVector e0 = CVector::Zero(4);
  e0(0) = 1.0;
  const Spectrum p = spectral_decompose(DensityMatrix::pure(e0).op());
  CHECK(p.values(0) == 1.0);
  for (Index k = 1; k < 4; ++k) CHECK(p.values(k) == 0.0);
}

TEST_CASE("Jacobi copes with degenerate and diagonal input") {
  CMatrix d = CMatrix::Zero(6, 6);
  d.diagonal() << 1, 1, 1, -2, 0, 0;
  const Spectrum s = jacobi_eigensystem(d);
  CHECK(s.values(0) == 1.0);
  CHECK(s.values(5) == -2.0);
  std::mt19937_64 rng(5);
  const CMatrix u = random_unitary(6, rng);
  const Spectrum t = jacobi_eigensystem(u * d * u.adjoint());
  for (Index k = 0; k < 6; ++k) CHECK(t.values(k) == doctest::Approx(s.values(k)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("hs_inner of pure states is the squared overlap") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const CVector psi = oracle::random_vector(4, rng);
    const CVector phi = oracle::random_vector(4, rng);
    const double ov = std::norm(psi.dot(phi));
    CHECK(hs_inner(DensityMatrix::pure(psi), DensityMatrix::pure(phi)) == doctest::Approx(ov).epsilon(1e-13));
  }
  CVector a = CVector::Zero(3), b = CVector::Zero(3);
  a(0) = 1.0;
  b(2) = 1.0;
  CHECK(std::abs(hs_inner(DensityMatrix::pure(a), DensityMatrix::pure(b))) < 1e-15);
  CHECK(hs_distance(DensityMatrix::pure(a), DensityMatrix::pure(b)) == doctest::Approx(1.0));
}

TEST_CASE("hs_inner is symmetric and bilinear") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOperator a(oracle::random_hermitian(5, rng));
    const HermitianOperator b(oracle::random_hermitian(5, rng));
    const HermitianOperator c(oracle::random_hermitian(5, rng));
    const double x = 0.37, y = -1.9;
    CHECK(hs_inner(a, b) == doctest::Approx(hs_inner(b, a)).epsilon(1e-13));
    CHECK(hs_inner(x * a + y * b, c) ==
          doctest::Approx(x * hs_inner(a, c) + y * hs_inner(b, c)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("hs_distance special values") {
  std::mt19937_64 rng(9);
  const DensityMatrix rho(oracle::random_state(4, 2, rng));
  CHECK(hs_distance(rho, rho) == 0.0);
  // n = 9: the maximally mixed state is 2/3 from every pure state
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix pure = DensityMatrix::pure(oracle::random_vector(9, rng));
    CHECK(hs_distance(DensityMatrix::maximally_mixed(9), pure) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  const DensityMatrix sigma(oracle::random_state(4, 3, rng));
  CHECK(hs_distance(rho, sigma) == doctest::Approx(oracle::hs_distance(rho.matrix(), sigma.matrix())).epsilon(1e-13));
}

TEST_CASE("entropy") {
  std::mt19937_64 rng(10);
  CHECK(std::abs(entropy(DensityMatrix::pure(oracle::random_vector(5, rng)))) < 1e-12);
  for (Index n : {2, 3, 7}) CHECK(entropy(DensityMatrix::maximally_mixed(n)) == doctest::Approx(std::log(double(n))));
  // Werner p = 1/2 from its spectrum {(1+3p)/4, (1-p)/4 x3}
  const double p = 0.5;
  CMatrix bell = CMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const DensityMatrix w(CMatrix(p * bell + (1 - p) * CMatrix::Identity(4, 4) / 4.0));
  Eigen::VectorXd spec(4);
  spec << (1 + 3 * p) / 4, (1 - p) / 4, (1 - p) / 4, (1 - p) / 4;
  CHECK(entropy(w) == doctest::Approx(oracle::entropy_from(spec)).epsilon(1e-13));
}

TEST_CASE("entropy is invariant under unitary conjugation") {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(6, 3, rng);
    const DensityMatrix r2 = conjugate(rho, random_unitary(6, rng), Normalization::preserve);
    CHECK(entropy(r2) == doctest::Approx(entropy(rho)).epsilon(1e-10));
  }
}

TEST_CASE("conjugation") {
  Rng rng(13);
  const DensityMatrix mm = DensityMatrix::maximally_mixed(3);
  const DensityMatrix c = conjugate(mm, random_unitary(3, rng), Normalization::preserve);
  CHECK((c.matrix() - mm.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  // exp(xi sigma_3 / 2) on 1/2 gives (1 + tanh(xi) sigma_3) / 2
  const double xi = 0.8;
  CMatrix v = CMatrix::Zero(2, 2);
  v(0, 0) = std::exp(xi / 2);
  v(1, 1) = std::exp(-xi / 2);
  const DensityMatrix b = conjugate(DensityMatrix::maximally_mixed(2), v, Normalization::renormalize);
  const CMatrix expect = 0.5 * (oracle::pauli(0) + std::tanh(xi) * oracle::pauli(3));
  CHECK((b.matrix() - expect).cwiseAbs().maxCoeff() < 1e-15);

  // det V = 1 keeps det rho
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(3, 3, rng);
    CMatrix w = random_ginibre(3, 3, rng);
    w /= std::pow(w.determinant(), 1.0 / 3.0);
    const HermitianOperator t = conjugate(rho.op(), w);
    CHECK(std::abs(t.matrix().determinant() - rho.matrix().determinant()) < 1e-12);
  }
  CHECK_THROWS_AS(conjugate(mm, CMatrix::Zero(3, 3), Normalization::renormalize), SingularMatrix);
  CHECK_THROWS_AS(conjugate(mm, CMatrix::Identity(3, 3) * 2.0, Normalization::preserve), InvalidInput);
}

TEST_CASE("transpose") {
  const DensityMatrix y(CMatrix(0.5 * (oracle::pauli(0) + oracle::pauli(2))));
  const DensityMatrix yt = transpose(y);
  CHECK((yt.matrix() - 0.5 * (oracle::pauli(0) - oracle::pauli(2))).cwiseAbs().maxCoeff() == 0.0);
  Rng rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(5, 5, rng);
    CHECK(transpose(transpose(rho)).matrix() == rho.matrix());
    const Eigen::VectorXd a = oracle::eigenvalues(rho.matrix());
    const Eigen::VectorXd b = oracle::eigenvalues(transpose(rho).matrix());
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
  CMatrix real = CMatrix::Zero(2, 2);
  real << 0.7, 0.2, 0.2, 0.3;
  CHECK(transpose(DensityMatrix(real)).matrix() == real);
}

TEST_CASE("state invariants are enforced on construction") {
  CMatrix nh = CMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(HermitianOperator{nh}, InvalidInput);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg.diagonal() << 1.2, -0.2;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvalidInput);
  CHECK_THROWS_AS(DensityMatrix{CMatrix(CMatrix::Identity(2, 2))}, InvalidInput);
  CHECK_THROWS_AS(HermitianOperator{CMatrix(2, 3)}, InvalidDimension);

  Rng rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix rho = random_density_matrix(4, 1 + rep % 4, rng);
    CHECK(std::abs(rho.op().trace() - 1.0) < 1e-12);
    CHECK(oracle::min_eig(rho.matrix()) >= -1e-10);
  }
}
