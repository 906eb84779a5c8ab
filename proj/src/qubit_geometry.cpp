#include "sepgeo/qubit_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sepgeo/errors.hpp"

namespace sepgeo {

namespace {

void require_qubit(const HermitianOperator& a, const char* what) {
  if (a.dim() != 2) throw InvalidDimension(std::string(what) + ": expected a 2x2 matrix");
}

const Dims kTwoQubits{2, 2};

/// det(M)^(1/4) M^(-1/2) for a positive definite 2x2 matrix M. Conjugating
/// with it maps M to a multiple of the identity with the smallest trace
/// among determinant-one congruences.
CMatrix whitening(const CMatrix& m) {
  const Spectrum s = jacobi_eigensystem(m);
  const double l0 = s.values(0), l1 = s.values(1);
  if (!(l1 > 0.0)) throw NonConvergence("reduced state lost positive definiteness", l1);
  RVector inv_sqrt(2);
  const double scale = std::pow(l0 * l1, 0.25);
  inv_sqrt << scale / std::sqrt(l0), scale / std::sqrt(l1);
  return s.vectors * inv_sqrt.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

/// Largest |Tr(rho sigma_k (x) 1)| or |Tr(rho 1 (x) sigma_k)| relative to Tr(rho).
double local_bloch_norm(const CMatrix& rho) {
  const CMatrix ra = partial_trace_b(rho, kTwoQubits);
  const CMatrix rb = partial_trace_a(rho, kTwoQubits);
  const double tr = rho.trace().real();
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    worst = std::max(worst, std::abs((ra * pauli(k)).trace().real()) / tr);
    worst = std::max(worst, std::abs((rb * pauli(k)).trace().real()) / tr);
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// Four-vectors

FourVector to_four_vector(const HermitianOperator& a) {
  require_qubit(a, "to_four_vector");
  FourVector x{};
  for (int mu = 0; mu < 4; ++mu) x[static_cast<std::size_t>(mu)] = (a.matrix() * pauli(mu)).trace().real();
  return x;
}

HermitianOperator from_four_vector(const FourVector& x) {
  CMatrix m = CMatrix::Zero(2, 2);
  for (int mu = 0; mu < 4; ++mu) m += 0.5 * x[static_cast<std::size_t>(mu)] * pauli(mu);
  return HermitianOperator::hermitian_part(m);
}

double lorentz_metric(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

double minkowski_dot(const FourVector& x, const FourVector& y) {
  return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

HermitianOperator bar(const HermitianOperator& a) {
  require_qubit(a, "bar");
  CMatrix r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  return HermitianOperator::hermitian_part(r * a.matrix().transpose() * r.adjoint());
}

CMatrix boost(const Triple& xi) {
  const double len = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  if (!std::isfinite(len)) throw InvalidInput("boost: rapidity must be finite");
  CMatrix v = std::cosh(0.5 * len) * pauli(0);
  if (len > 0.0) {
    const double sh = std::sinh(0.5 * len) / len;
    for (int k = 1; k <= 3; ++k) v += sh * xi[static_cast<std::size_t>(k - 1)] * pauli(k);
  }
  return v;
}

PauliCoefficients pauli_coefficients(const HermitianOperator& rho) {
  if (rho.dim() != 4) throw InvalidDimension("pauli_coefficients: expected a 4x4 matrix");
  PauliCoefficients c;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) c(mu, nu) = 0.25 * (rho.matrix() * kron(pauli(mu), pauli(nu))).trace().real();
  return c;
}

HermitianOperator from_pauli_coefficients(const PauliCoefficients& c) {
  CMatrix m = CMatrix::Zero(4, 4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) m += c(mu, nu) * kron(pauli(mu), pauli(nu));
  return HermitianOperator::hermitian_part(m);
}

HermitianOperator standard_form_matrix(const Triple& d) {
  PauliCoefficients c = PauliCoefficients::Zero();
  c(0, 0) = 0.25;
  for (int k = 1; k <= 3; ++k) c(k, k) = 0.25 * d[static_cast<std::size_t>(k - 1)];
  return from_pauli_coefficients(c);
}

CMatrix su2_from_rotation(const Eigen::Matrix3d& r) {
  // Shepperd's method for the unit quaternion (w, x, y, z) of r.
  double w, x, y, z;
  const double tr = r.trace();
  if (tr > 0.0) {
    const double s = 2.0 * std::sqrt(tr + 1.0);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  const Complex i1(0.0, 1.0);
  return (w * pauli(0) - i1 * (x * pauli(1) + y * pauli(2) + z * pauli(3))) / n;
}

// ---------------------------------------------------------------------------
// Standard form

StandardForm schmidt_2x2(const BipartiteState& s, const Schmidt2x2Options& opts) {
  if (!(s.dims() == kTwoQubits)) throw InvalidDimension("schmidt_2x2: expected a two-qubit state");
  const double lmin = min_eigenvalue(s.op());
  if (!(lmin > opts.strictness_tol)) {
    std::ostringstream os;
    os << "schmidt_2x2: state is not strictly positive (min eigenvalue " << lmin << ")";
    throw NotStrictlyPositive(os.str(), lmin);
  }

  const CMatrix& rho = s.matrix();
  StandardForm out;
  CMatrix va = CMatrix::Identity(2, 2);
  CMatrix vb = CMatrix::Identity(2, 2);
  auto transformed = [&] {
    const CMatrix v = kron(va, vb);
    CMatrix t = v * rho * v.adjoint();
    return CMatrix(0.5 * (t + t.adjoint()));
  };

  CMatrix current = transformed();
  out.objective_history.push_back(0.25 * current.trace().real());
  double stationarity = local_bloch_norm(current);
  int it = 0;
  // Joint Newton step on the six rapidities. Near the maximally entangled
  // corner the alternating sweeps contract at a rate close to one, so they
  // alone need ~1/lambda_min iterations; this step restores quadratic
  // convergence there. Only accepted if it lowers the trace.
  auto newton_step = [&] {
    Eigen::Matrix4d c;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) c(mu, nu) = (current * kron(pauli(mu), pauli(nu))).trace().real();
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Identity() * c(0, 0);
    h.block<3, 3>(0, 3) = c.block<3, 3>(1, 1);
    h.block<3, 3>(3, 0) = c.block<3, 3>(1, 1).transpose();
    Eigen::Matrix<double, 6, 1> g;
    g << c.block<3, 1>(1, 0), c.block<1, 3>(0, 1).transpose();
    const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return;
    const Eigen::Matrix<double, 6, 1> step = -ldlt.solve(g);
    if (!step.allFinite()) return;
    const double f0 = current.trace().real();
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      const CMatrix na = boost({t * step(0), t * step(1), t * step(2)}) * va;
      const CMatrix nb = boost({t * step(3), t * step(4), t * step(5)}) * vb;
      const CMatrix v = kron(na, nb);
      const CMatrix trial = v * rho * v.adjoint();
      if (trial.trace().real() < f0) {
        va = na;
        vb = nb;
        current = transformed();
        return;
      }
    }
  };
  // Alternating exact minimization over the A and B boosts: with the other
  // factor fixed, the optimal determinant-one congruence whitens the reduced
  // state, which zeroes that side's Bloch vector and lowers f.
  while (stationarity >= opts.stationarity_tol) {
    if (it >= opts.max_iterations) {
      throw NonConvergence("schmidt_2x2: local Bloch vectors did not vanish within the iteration budget",
                           stationarity);
    }
    newton_step();
    va = whitening(partial_trace_b(current, kTwoQubits)) * va;
    current = transformed();
    out.objective_history.push_back(0.25 * current.trace().real());
    vb = whitening(partial_trace_a(current, kTwoQubits)) * vb;
    current = transformed();
    out.objective_history.push_back(0.25 * current.trace().real());
    // Keep the factors on the determinant-one shell despite rounding.
    va = unit_determinant(va);
    vb = unit_determinant(vb);
    stationarity = local_bloch_norm(current);
    ++it;
  }
  out.iterations = it;
  out.f_min = 0.25 * current.trace().real();

  // Rotate the 3x3 correlation block to diagonal form with proper rotations.
  const CMatrix normalized = current / current.trace().real();
  Eigen::Matrix3d corr;
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) corr(k - 1, l - 1) = (normalized * kron(pauli(k), pauli(l))).trace().real();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(corr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d w = svd.matrixV();
  Eigen::Vector3d sv = svd.singularValues();
  if (u.determinant() < 0.0) {
    u.col(2) *= -1.0;
    sv(2) = -sv(2);
  }
  if (w.determinant() < 0.0) {
    w.col(2) *= -1.0;
    sv(2) = -sv(2);
  }
  va = su2_from_rotation(u.transpose()) * va;
  vb = su2_from_rotation(w.transpose()) * vb;
  out.d = {sv(0), sv(1), sv(2)};
  out.va = va;
  out.vb = vb;

  const CMatrix final_state = transformed();
  const PauliCoefficients c = pauli_coefficients(HermitianOperator::hermitian_part(final_state / final_state.trace().real()));
  double residual = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double target = 0.0;
      if (mu == 0 && nu == 0) target = 0.25;
      else if (mu == nu) target = 0.25 * out.d[static_cast<std::size_t>(mu - 1)];
      residual = std::max(residual, 4.0 * std::abs(c(mu, nu) - target));
    }
  out.residual = residual;
  return out;
}

std::array<double, 4> standard_form_eigenvalues(const Triple& d) {
  return {0.25 * (1.0 + (d[0] - d[1]) + d[2]), 0.25 * (1.0 - (d[0] - d[1]) + d[2]),
          0.25 * (1.0 + (d[0] + d[1]) - d[2]), 0.25 * (1.0 - (d[0] + d[1]) - d[2])};
}

bool octahedron_separable(const Triple& d) {
  return std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]) <= 1.0 + 1e-12;
}

std::vector<WeightedProduct> corner_decomposition(int axis, int sign) {
  if (axis < 1 || axis > 3) throw InvalidInput("corner_decomposition: axis must be 1, 2 or 3");
  if (sign != 1 && sign != -1) throw InvalidInput("corner_decomposition: sign must be +1 or -1");
  const double r2 = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  CVector up(2), down(2);
  switch (axis) {
    case 1: up << r2, r2; down << r2, -r2; break;
    case 2: up << r2, i1 * r2; down << r2, -i1 * r2; break;
    default: up << 1.0, 0.0; down << 0.0, 1.0; break;
  }
  const CVector& b_first = sign > 0 ? up : down;
  const CVector& b_second = sign > 0 ? down : up;
  return {{0.5, PureProductState(up, b_first)}, {0.5, PureProductState(down, b_second)}};
}

CMatrix mixture_matrix(const std::vector<WeightedProduct>& atoms) {
  if (atoms.empty()) throw InvalidInput("mixture_matrix: empty decomposition");
  const Index n = atoms.front().state.dims().total();
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& a : atoms) m += a.weight * a.state.projector();
  return m;
}

Separability2x2 separable_2x2(const BipartiteState& s, const Schmidt2x2Options& opts, double perturbation) {
  if (!(s.dims() == kTwoQubits)) throw InvalidDimension("separable_2x2: expected a two-qubit state");
  Separability2x2 out;
  out.pt_min_eigenvalue = peres_check(s).min_eigenvalue;

  BipartiteState work = s;
  if (!(min_eigenvalue(s.op()) > opts.strictness_tol)) {
    out.perturbation = perturbation;
    const HermitianOperator mixed =
        s.op() * (1.0 - perturbation) + HermitianOperator::identity(4) * (0.25 * perturbation);
    work = BipartiteState(DensityMatrix(mixed), kTwoQubits);
  }

  out.form = schmidt_2x2(work, opts);
  out.separable = octahedron_separable(out.form.d);
  if (!out.separable) return out;

  // Decompose the standard form into octahedron corners (plus the centre),
  // then pull every product vector back through the inverse transformation.
  std::vector<WeightedProduct> standard;
  double centre = 1.0;
  for (int k = 1; k <= 3; ++k) {
    const double dk = out.form.d[static_cast<std::size_t>(k - 1)];
    centre -= std::abs(dk);
    if (dk == 0.0) continue;
    for (auto& a : corner_decomposition(k, dk > 0.0 ? 1 : -1)) {
      a.weight *= std::abs(dk);
      standard.push_back(std::move(a));
    }
  }
  centre = std::max(centre, 0.0);
  if (centre > 0.0) {
    for (int sign : {1, -1})
      for (auto& a : corner_decomposition(3, sign)) {
        a.weight *= 0.5 * centre;
        standard.push_back(std::move(a));
      }
  }

  const CMatrix ia = out.form.va.inverse();
  const CMatrix ib = out.form.vb.inverse();
  double total = 0.0;
  for (const auto& a : standard) {
    const CVector phi = ia * a.state.phi();
    const CVector chi = ib * a.state.chi();
    const double w = a.weight * phi.squaredNorm() * chi.squaredNorm();
    total += w;
    out.decomposition.push_back({w, PureProductState::normalized(phi, chi)});
  }
  for (auto& a : out.decomposition) a.weight /= total;
  out.reconstruction_residual = (mixture_matrix(out.decomposition) - work.matrix()).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace sepgeo
