#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sepgeo/bipartite.hpp"
#include "sepgeo/errors.hpp"
#include "sepgeo/qubit_geometry.hpp"
#include "sepgeo/random.hpp"
#include "sepgeo/states.hpp"

using namespace sepgeo;

namespace {

const Dims kShapes[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}};

BipartiteState random_bipartite(Dims d, int rank, std::mt19937_64& rng) {
  return BipartiteState(DensityMatrix(oracle::random_state(int(d.total()), rank, rng)), d);
}

}  // namespace

TEST_CASE("partial transpose matches the index formula") {
  std::mt19937_64 rng(21);
  for (Dims d : kShapes) {
    const BipartiteState s = random_bipartite(d, int(d.total()), rng);
    const CMatrix pt = partial_transpose(s).op.matrix();
    CHECK(pt == oracle::partial_transpose_b(s.matrix(), int(d.a), int(d.b)));
    CHECK(std::abs(pt.trace().real() - 1.0) < 1e-13);
  }
}

TEST_CASE("partial transpose is an involution and an isometry") {
  std::mt19937_64 rng(22);
  for (Dims d : kShapes) {
    const BipartiteState s = random_bipartite(d, 2, rng);
    const BipartiteState t = random_bipartite(d, 3, rng);
    CHECK(partial_transpose(partial_transpose(s)).op.matrix() == s.matrix());
    const double before = hs_distance(s.op(), t.op());
    const double after = hs_distance(partial_transpose(s).op, partial_transpose(t).op);
    CHECK(after == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("partial transpose of simple states") {
  const BipartiteState mm = BipartiteState::maximally_mixed({3, 3});
  CHECK(partial_transpose(mm).op.matrix() == mm.matrix());

  std::mt19937_64 rng(23);
  const CMatrix ra = oracle::random_state(2, 2, rng);
  const CMatrix rb = oracle::random_state(3, 3, rng);
  const BipartiteState prod = product_embed(DensityMatrix(ra), DensityMatrix(rb));
  const CMatrix expect = oracle::kron(ra, rb.transpose());
  CHECK((partial_transpose(prod).op.matrix() - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(oracle::min_eig(expect) > -1e-14);

  const PeresResult bell = peres_check(bell_state(2));
  CHECK_FALSE(bell.pass);
  CHECK(bell.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(peres_check(mm).pass);
}

TEST_CASE("Peres verdict does not depend on the transposed side or on local unitaries") {
  Rng rng(24);
  std::mt19937_64 orng(24);
  int entangled = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Dims d = kShapes[rep % 5];
    const BipartiteState s = random_bipartite(d, 1 + rep % 3, orng);
    const PeresResult r = peres_check(s);
    entangled += r.pass ? 0 : 1;
    const double alt = oracle::min_eig(partial_transpose_a(s).op.matrix());
    CHECK(alt == doctest::Approx(r.min_eigenvalue).epsilon(1e-10).scale(1.0));
    const BipartiteState u = product_transform(s, random_unitary(d.a, rng), random_unitary(d.b, rng));
    CHECK(peres_check(u).pass == r.pass);
  }
  CHECK(entangled > 0);  // the low-rank draws are mostly entangled
}

TEST_CASE("separable mixtures pass the Peres test") {
  std::mt19937_64 rng(25);
  for (int rep = 0; rep < 50; ++rep) {
    const Dims d = kShapes[rep % 5];
    const CMatrix rho = oracle::random_separable(int(d.a), int(d.b), 1 + rep % 6, rng);
    CHECK(peres_check(BipartiteState(DensityMatrix(rho), d)).pass);
  }
  // mixtures of the octahedron corners
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    CMatrix rho = CMatrix::Zero(4, 4);
    double total = 0.0;
    for (int axis = 1; axis <= 3; ++axis)
      for (int sign : {1, -1}) {
        const double w = u(rng);
        rho += w * mixture_matrix(corner_decomposition(axis, sign));
        total += w;
      }
    CHECK(peres_check(BipartiteState(DensityMatrix(CMatrix(rho / total)), {2, 2})).pass);
  }
}

TEST_CASE("product_embed") {
  const BipartiteState mm = product_embed(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3));
  CHECK((mm.matrix() - CMatrix::Identity(6, 6) / 6.0).cwiseAbs().maxCoeff() < 1e-16);
  CHECK(mm.dims() == Dims{2, 3});

  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2), e01 = CVector::Zero(4);
  e0(0) = 1.0;
  e1(1) = 1.0;
  e01(1) = 1.0;
  CHECK(product_embed(DensityMatrix::pure(e0), DensityMatrix::pure(e1)).matrix() == DensityMatrix::pure(e01).matrix());

  std::mt19937_64 rng(26);
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix a = oracle::random_state(3, 2, rng), b = oracle::random_state(2, 2, rng);
    const CMatrix p = product_embed(DensityMatrix(a), DensityMatrix(b)).matrix();
    const double lhs = (p * p).trace().real();
    CHECK(lhs == doctest::Approx((a * a).trace().real() * (b * b).trace().real()).epsilon(1e-13));
  }
}

TEST_CASE("partial traces") {
  std::mt19937_64 rng(27);
  const CMatrix a = oracle::random_state(2, 2, rng), b = oracle::random_state(3, 2, rng);
  const CMatrix p = oracle::kron(a, b);
  CHECK((partial_trace_b(p, {2, 3}) - a).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((partial_trace_a(p, {2, 3}) - b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("product_transform") {
  Rng rng(28);
  const BipartiteState bell = bell_state(2);
  CHECK((product_transform(bell, CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)).matrix() - bell.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  for (int rep = 0; rep < 10; ++rep) {
    const BipartiteState u = product_transform(bell, random_unitary(2, rng), random_unitary(2, rng));
    CHECK_FALSE(peres_check(u).pass);
  }
  // boosts keep a PPT state PPT
  std::mt19937_64 orng(28);
  for (int rep = 0; rep < 20; ++rep) {
    const Dims d = kShapes[rep % 5];
    const BipartiteState s(DensityMatrix(oracle::random_separable(int(d.a), int(d.b), 5, orng)), d);
    const CMatrix va = random_ginibre(d.a, d.a, rng), vb = random_ginibre(d.b, d.b, rng);
    const BipartiteState t = product_transform(s, va, vb);
    CHECK(std::abs(t.op().trace() - 1.0) < 1e-12);
    CHECK(oracle::min_eig(oracle::partial_transpose_b(t.matrix(), int(d.a), int(d.b))) > -1e-10);
  }
  CHECK_THROWS_AS(product_transform(bell, CMatrix::Identity(3, 3), CMatrix::Identity(2, 2)), DimensionMismatch);
}

TEST_CASE("segment membership") {
  const SegmentMembership mm = segment_membership(BipartiteState::maximally_mixed({3, 3}));
  CHECK(mm.in_d);
  CHECK(mm.in_p);
  CHECK(mm.d_boundary > 1.0);
  CHECK(mm.pt_boundary > 1.0);

  const SegmentMembership bell = segment_membership(bell_state(2));
  CHECK(bell.in_d);
  CHECK_FALSE(bell.in_p);
  // PT of the Werner segment: (1 - 3t)/4 = 0 at t = 1/3
  CHECK(bell.pt_boundary == doctest::Approx(1.0 / 3.0).epsilon(1e-11));

  const SegmentMembership h = segment_membership(horodecki_3x3(0.5));
  CHECK(h.in_d);
  CHECK(h.in_p);
  // oracle: the state itself and its partial transpose are positive
  const CMatrix m = horodecki_3x3(0.5).matrix();
  CHECK(oracle::min_eig(m) > -1e-12);
  CHECK(oracle::min_eig(oracle::partial_transpose_b(m, 3, 3)) > -1e-12);

  // a point outside D
  CMatrix out = CMatrix::Identity(4, 4) / 4.0;
  out += 0.5 * (bell_state(2).matrix() - out) * 3.0;
  const SegmentMembership o = segment_membership(BipartiteOperator(HermitianOperator(out), {2, 2}));
  CHECK_FALSE(o.in_d);
  CHECK_FALSE(o.in_p);
  CHECK(o.d_boundary == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("first_crossing finds the smallest root of the minimum eigenvalue") {
  const CMatrix origin = CMatrix::Identity(4, 4) / 4.0;
  const CMatrix dir = bell_state(2).matrix() - origin;
  // origin + t dir has eigenvalues (1 - t)/4 (x3) and (1 + 3t)/4
  CHECK(first_crossing(origin, dir, 1e-13) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(first_crossing(origin, -dir, 1e-13) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::isinf(first_crossing(origin, CMatrix::Zero(4, 4), 1e-12)));
  CHECK_THROWS_AS(first_crossing(CMatrix::Zero(4, 4), dir, 1e-12), FailsPrecondition);
}

TEST_CASE("bipartite construction errors") {
  CHECK_THROWS_AS(BipartiteState(DensityMatrix::maximally_mixed(6), {2, 2}), DimensionMismatch);
  CHECK_THROWS_AS(BipartiteState(DensityMatrix::maximally_mixed(4), {0, 4}), InvalidDimension);
  CVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureProductState(v, v), InvalidInput);
  const PureProductState p = PureProductState::normalized(v, v);
  CHECK(std::abs(p.phi().norm() - 1.0) < 1e-15);
  CHECK(std::abs(p.chi().norm() - 1.0) < 1e-15);
}
