#include "sepgeo/states.hpp"

#include <cmath>
#include <sstream>

#include "sepgeo/errors.hpp"

namespace sepgeo {

namespace {

void require_params(const std::string& family, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    std::ostringstream os;
    os << "make_state: family '" << family << "' takes " << n << " parameter(s), got " << params.size();
    throw InvalidInput(os.str());
  }
}

Index as_dimension(double x, const char* what) {
  if (!(x >= 2.0) || x != std::floor(x) || x > 64.0) {
    std::ostringstream os;
    os << "make_state: " << what << " must be an integer >= 2, got " << x;
    throw InvalidInput(os.str());
  }
  return static_cast<Index>(x);
}

}  // namespace

BipartiteState maximally_mixed_state(Dims dims) {
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("maximally_mixed_state: dimensions must be positive");
  return BipartiteState::maximally_mixed(dims);
}

BipartiteState bell_state(Index n) {
  if (n < 2) throw InvalidDimension("bell_state: n must be >= 2");
  CVector v = CVector::Zero(n * n);
  for (Index i = 0; i < n; ++i) v(i * n + i) = 1.0;
  v /= std::sqrt(static_cast<double>(n));
  return BipartiteState(DensityMatrix::pure(v), {n, n});
}

BipartiteState werner_state(double p) {
  if (!(p >= -1.0 / 3.0 - 1e-15 && p <= 1.0)) throw InvalidInput("werner_state: p must lie in [-1/3, 1]");
  const CMatrix bell = bell_state(2).matrix();
  const CMatrix m = p * bell + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0;
  return BipartiteState(DensityMatrix(HermitianOperator::hermitian_part(m)), {2, 2});
}

BipartiteState horodecki_3x3(double a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("horodecki_3x3: a must lie in (0, 1)");
  CMatrix m = CMatrix::Zero(9, 9);
  for (Index i : {0, 1, 2, 3, 4, 5, 7}) m(i, i) = a;
  for (Index i : {0, 4, 8})
    for (Index j : {0, 4, 8}) m(i, j) = a;
  m(6, 6) = m(8, 8) = (1.0 + a) / 2.0;
  m(6, 8) = m(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
  m /= 8.0 * a + 1.0;
  return BipartiteState(DensityMatrix(HermitianOperator(m)), {3, 3});
}

BipartiteState pure_product_state(const CVector& phi, const CVector& chi) {
  const PureProductState p = PureProductState::normalized(phi, chi);
  return BipartiteState(DensityMatrix::pure(p.vector()), p.dims());
}

GeneratedState make_state(const std::string& family, const std::vector<double>& params, const CVector& phi,
                          const CVector& chi, const SolverOptions& opts) {
  auto finish = [](BipartiteState s) {
    const double pt = peres_check(s).min_eigenvalue;
    return GeneratedState{std::move(s), pt, std::nullopt};
  };
  if (family == "maximally_mixed") {
    require_params(family, params, 2);
    return finish(maximally_mixed_state({as_dimension(params[0], "nA"), as_dimension(params[1], "nB")}));
  }
  if (family == "bell") {
    require_params(family, params, 1);
    return finish(bell_state(as_dimension(params[0], "n")));
  }
  if (family == "werner") {
    require_params(family, params, 1);
    return finish(werner_state(params[0]));
  }
  if (family == "pure_product") {
    require_params(family, params, 0);
    if (phi.size() < 1 || chi.size() < 1) throw InvalidInput("make_state: pure_product needs phi and chi");
    return finish(pure_product_state(phi, chi));
  }
  if (family == "ppt_entangled_3x3") {
    require_params(family, params, 1);
    GeneratedState g = finish(horodecki_3x3(params[0]));
    if (!peres_check(g.state).pass) {
      std::ostringstream os;
      os << "make_state: ppt_entangled_3x3 fails the Peres test (min eigenvalue " << g.pt_min_eigenvalue << ")";
      throw FailsPrecondition(os.str());
    }
    double distance = 0.0;
    try {
      distance = closest_separable(g.state, opts).distance;
    } catch (const IterationBudgetExceeded& e) {
      distance = e.best().distance_lower_bound;
    }
    if (!(distance > 1e-6)) {
      std::ostringstream os;
      os << "make_state: ppt_entangled_3x3 with a = " << params[0] << " looks separable (distance " << distance << ")";
      throw FailsPrecondition(os.str());
    }
    g.distance = distance;
    return g;
  }
  throw InvalidInput("make_state: unknown family '" + family + "'");
}

}  // namespace sepgeo
