#include "sepgeo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace sepgeo {

namespace {

constexpr double kOverlapTol = 1e-12;
constexpr double kScreenTol = 1e-8;
constexpr double kKktTol = 1e-10;
constexpr double kCgTol = 1e-13;
constexpr int kMaxBoundarySteps = 1000;
constexpr double kMaxSecantFactor = 20.0;
constexpr int kBoundaryInnerIter = 1000;
// Eigenvalues of rho at or below this count as kernel for the face polish.
constexpr double kKernelTol = 1e-12;
constexpr int kFaceAttempts = 5;
constexpr int kFaceIterations = 1000;
// Stalled inner solves are accepted as steps when the distance is below
// this multiple of the boundary tolerance.
constexpr double kStallDistanceFactor = 10.0;

/// A_ik = sum_jl conj(chi_j) sigma_{ij;kl} chi_l.
CMatrix reduce_with_b(const CMatrix& sigma, Dims d, const CVector& chi) {
  CMatrix a(d.a, d.a);
  for (Index i = 0; i < d.a; ++i)
    for (Index k = 0; k < d.a; ++k)
      a(i, k) = chi.dot(sigma.block(i * d.b, k * d.b, d.b, d.b) * chi);
  return 0.5 * (a + a.adjoint());
}

/// B_jl = sum_ik conj(phi_i) sigma_{ij;kl} phi_k.
CMatrix reduce_with_a(const CMatrix& sigma, Dims d, const CVector& phi) {
  CMatrix b = CMatrix::Zero(d.b, d.b);
  for (Index i = 0; i < d.a; ++i)
    for (Index k = 0; k < d.a; ++k) b += std::conj(phi(i)) * phi(k) * sigma.block(i * d.b, k * d.b, d.b, d.b);
  return 0.5 * (b + b.adjoint());
}

CMatrix mixture(const std::vector<WeightedProduct>& atoms, Index n) {
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& a : atoms) {
    const CVector v = a.state.vector();
    m += a.weight * (v * v.adjoint());
  }
  return 0.5 * (m + m.adjoint());
}

double half_norm(const CMatrix& m) { return std::sqrt(0.5 * m.squaredNorm()); }

/// Levenberg-Marquardt on the atoms themselves. With
/// rho_s = sum_k (u_k u_k^dagger) (x) (v_k v_k^dagger), where the weights are
/// absorbed into u_k, minimizes |rho - rho_s|^2 + (Tr rho_s - 1)^2 over the
/// real and imaginary parts of all u_k, v_k. When rho is separable the
/// residual can reach zero, and Gauss-Newton steps then converge much
/// faster than adding one atom at a time. Returns the polished atoms
/// (weights renormalized), or nothing when no step helped.
///
/// With a nonempty `kernel` (orthonormal columns spanning ker rho) the blocks
/// of rho - rho_s that touch the kernel are replaced by the overlaps
/// <k|u (x) v>. Those blocks are quadratic in the overlaps, so near a
/// separable rho on the boundary of the state space the plain residual has a
/// singular Jacobian and the iteration crawls; the overlaps are linear.
std::optional<std::vector<WeightedProduct>> polish_atoms(const CMatrix& rho, Dims dims,
                                                         const std::vector<WeightedProduct>& atoms, int iterations,
                                                         const CMatrix& kernel = CMatrix()) {
  const Index na = dims.a, nb = dims.b, n = dims.total();
  const Index k = static_cast<Index>(atoms.size());
  const Index per = 2 * (na + nb);
  const Index np = per * k;
  const Index nk = kernel.cols();
  const Index nr = n * n + 1 + 2 * k * nk;
  const CMatrix range = CMatrix::Identity(n, n) - kernel * kernel.adjoint();
  auto restrict = [&](const CMatrix& m) { return nk == 0 ? m : CMatrix(range * m * range); };

  RVector x(np);
  for (Index a = 0; a < k; ++a) {
    const auto& at = atoms[static_cast<std::size_t>(a)];
    const CVector u = std::sqrt(at.weight) * at.state.phi();
    const CVector& v = at.state.chi();
    for (Index i = 0; i < na; ++i) {
      x(a * per + 2 * i) = u(i).real();
      x(a * per + 2 * i + 1) = u(i).imag();
    }
    for (Index j = 0; j < nb; ++j) {
      x(a * per + 2 * (na + j)) = v(j).real();
      x(a * per + 2 * (na + j) + 1) = v(j).imag();
    }
  }
  auto unpack = [&](const RVector& p, Index a, CVector& u, CVector& v) {
    u.resize(na);
    v.resize(nb);
    for (Index i = 0; i < na; ++i) u(i) = Complex(p(a * per + 2 * i), p(a * per + 2 * i + 1));
    for (Index j = 0; j < nb; ++j) v(j) = Complex(p(a * per + 2 * (na + j)), p(a * per + 2 * (na + j) + 1));
  };
  // Hermitian n x n matrix to a real vector with the same Frobenius norm.
  auto flatten = [&](const CMatrix& m, double trace_term, Eigen::Ref<RVector> out) {
    Index r = 0;
    const double s2 = std::sqrt(2.0);
    for (Index i = 0; i < n; ++i) {
      out(r++) = m(i, i).real();
      for (Index j = i + 1; j < n; ++j) {
        out(r++) = s2 * m(i, j).real();
        out(r++) = s2 * m(i, j).imag();
      }
    }
    out(r) = trace_term;
  };
  auto residual = [&](const RVector& p) {
    CMatrix rs = CMatrix::Zero(n, n);
    CVector u, v;
    for (Index a = 0; a < k; ++a) {
      unpack(p, a, u, v);
      rs += kron(CMatrix(u * u.adjoint()), CMatrix(v * v.adjoint()));
    }
    RVector r(nr);
    flatten(restrict(rho - rs), rs.trace().real() - 1.0, r.head(n * n + 1));
    for (Index a = 0; a < k && nk > 0; ++a) {
      unpack(p, a, u, v);
      const CVector o = kernel.adjoint() * kron(u, v);
      for (Index j = 0; j < nk; ++j) {
        r(n * n + 1 + 2 * (a * nk + j)) = o(j).real();
        r(n * n + 1 + 2 * (a * nk + j) + 1) = o(j).imag();
      }
    }
    return r;
  };

  RVector r = residual(x);
  double cost = r.squaredNorm();
  const double start_cost = cost;
  double mu = 1e-3;
  RMatrix jac(nr, np);
  for (int it = 0; it < iterations; ++it) {
    CVector u, v;
    for (Index a = 0; a < k; ++a) {
      unpack(x, a, u, v);
      const CMatrix uu = u * u.adjoint();
      const CMatrix vv = v * v.adjoint();
      for (Index q = 0; q < per; ++q) {
        const Complex unit = (q % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        const Index slot = q / 2;
        CMatrix d;
        CVector dw;
        double dtrace = 0.0;
        if (slot < na) {
          CVector e = CVector::Zero(na);
          e(slot) = unit;
          const CMatrix du = e * u.adjoint() + u * e.adjoint();
          d = kron(du, vv);
          dtrace = du.trace().real() * vv.trace().real();
          if (nk > 0) dw = kron(e, v);
        } else {
          CVector e = CVector::Zero(nb);
          e(slot - na) = unit;
          const CMatrix dv = e * v.adjoint() + v * e.adjoint();
          d = kron(uu, dv);
          dtrace = uu.trace().real() * dv.trace().real();
          if (nk > 0) dw = kron(u, e);
        }
        const Index col = a * per + q;
        flatten(restrict(-d), dtrace, jac.col(col).head(n * n + 1));
        if (nk > 0) {
          jac.col(col).tail(2 * k * nk).setZero();
          const CVector o = kernel.adjoint() * dw;
          for (Index j = 0; j < nk; ++j) {
            jac(n * n + 1 + 2 * (a * nk + j), col) = o(j).real();
            jac(n * n + 1 + 2 * (a * nk + j) + 1, col) = o(j).imag();
          }
        }
      }
    }
    // There are far fewer residuals than parameters, so solve the damped
    // normal equations in residual space: step = -J^T (J J^T + mu)^-1 r.
    const RMatrix jjt = jac * jac.transpose();
    const double scale = std::max(1.0, jjt.diagonal().maxCoeff());
    bool improved = false;
    for (int tries = 0; tries < 10 && !improved; ++tries) {
      RMatrix lhs = jjt;
      lhs.diagonal().array() += mu * scale;
      const RVector step = -jac.transpose() * lhs.ldlt().solve(r);
      const RVector trial = x + step;
      const RVector rt = residual(trial);
      const double ct = rt.squaredNorm();
      if (ct < cost) {
        x = trial;
        r = rt;
        cost = ct;
        mu = std::max(mu * 0.1, 1e-12);
        improved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved || cost < 1e-30) break;
  }
  if (!(cost < start_cost)) return std::nullopt;

  std::vector<WeightedProduct> result;
  double total = 0.0;
  for (Index a = 0; a < k; ++a) {
    CVector u, v;
    unpack(x, a, u, v);
    const double w = u.squaredNorm() * v.squaredNorm();
    if (!(w > 0.0)) continue;
    result.push_back({w, PureProductState::normalized(u, v)});
    total += w;
  }
  for (auto& a : result) a.weight /= total;
  return result;
}

/// Block coordinate pass over the atoms: with all other atoms and all
/// weights fixed, atom k is moved to a better local maximizer of
/// Tr(P (sigma + lambda_k P_k)), which lowers Tr(sigma^2). The weights are
/// then re-optimized. Plain Frank-Wolfe steps only converge sublinearly when
/// the closest point sits on a curved part of the boundary; moving the atoms
/// themselves fixes that.
void refine_atoms(const BipartiteState& s, SeparableApproximation& out, int sweeps) {
  const Dims dims = s.dims();
  for (auto& atom : out.atoms) {
    const CMatrix pk = atom.state.projector();
    const CMatrix sigma_k = out.sigma + atom.weight * pk;
    const double before = (pk * sigma_k).trace().real();
    ProductOverlap moved = product_overlap_ascent(sigma_k, dims, atom.state.chi(), sweeps);
    if (!(moved.value > before)) continue;
    atom.state = moved.state;
    out.sigma = sigma_k - atom.weight * atom.state.projector();
  }
  std::vector<PureProductState> states;
  RVector weights(static_cast<Index>(out.atoms.size()));
  for (std::size_t a = 0; a < out.atoms.size(); ++a) {
    states.push_back(out.atoms[a].state);
    weights(static_cast<Index>(a)) = out.atoms[a].weight;
  }
  const HullProjection hp = hull_project(s.op(), states, &weights);
  std::vector<WeightedProduct> kept;
  for (std::size_t a = 0; a < states.size(); ++a) {
    const double w = hp.weights(static_cast<Index>(a));
    if (w > 0.0) kept.push_back({w, states[a]});
  }
  out.atoms = std::move(kept);
  out.rho_s = mixture(out.atoms, dims.total());
  out.sigma = s.matrix() - out.rho_s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Product-state search

ProductOverlap product_overlap_ascent(const CMatrix& sigma, Dims dims, CVector chi, int max_sweeps, double tol) {
  chi /= chi.norm();
  CVector phi = CVector::Zero(dims.a);
  ProductOverlap out{PureProductState(CVector::Unit(dims.a, 0), CVector::Unit(dims.b, 0)), 0.0, {}, 0};
  double previous = -std::numeric_limits<double>::infinity();
  double value = previous;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    const Spectrum ea = jacobi_eigensystem(reduce_with_b(sigma, dims, chi));
    phi = ea.vectors.col(0);
    out.history.push_back(ea.values(0));
    const Spectrum eb = jacobi_eigensystem(reduce_with_a(sigma, dims, phi));
    chi = eb.vectors.col(0);
    value = eb.values(0);
    out.history.push_back(value);
    if (std::abs(value - previous) < tol) {
      ++sweep;
      break;
    }
    previous = value;
  }
  out.state = PureProductState::normalized(phi, chi);
  out.value = value;
  out.sweeps = sweep;
  return out;
}

ProductOverlap max_product_overlap(const HermitianOperator& sigma, Dims dims, int restarts, Rng& rng,
                                   const CVector* warm_chi) {
  if (sigma.dim() != dims.total()) throw DimensionMismatch("max_product_overlap: dims do not match sigma");
  if (restarts < 1 && warm_chi == nullptr) throw InvalidInput("max_product_overlap: need at least one start");
  std::optional<ProductOverlap> best;
  auto consider = [&](ProductOverlap candidate) {
    if (!best || candidate.value > best->value) best = std::move(candidate);
  };
  if (warm_chi != nullptr) consider(product_overlap_ascent(sigma.matrix(), dims, *warm_chi, 1000, kScreenTol));
  for (int r = 0; r < restarts; ++r)
    consider(product_overlap_ascent(sigma.matrix(), dims, random_unit_vector(dims.b, rng), 1000, kScreenTol));
  ProductOverlap finished = product_overlap_ascent(sigma.matrix(), dims, best->state.chi(), 1000, kOverlapTol);
  return finished.value >= best->value ? finished : std::move(*best);
}

// ---------------------------------------------------------------------------
// Quadratic program over the simplex

HullProjection hull_project(const HermitianOperator& rho, const std::vector<PureProductState>& atoms,
                            const RVector* warm) {
  const Index k = static_cast<Index>(atoms.size());
  if (k == 0) throw InvalidInput("hull_project: atom list is empty");

  std::vector<CVector> vecs;
  vecs.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (a.dims().total() != rho.dim()) throw DimensionMismatch("hull_project: atom and state dimensions differ");
    vecs.push_back(a.vector());
  }
  // F(lambda) = Tr(rho^2) - 2 b.lambda + lambda.G.lambda
  RMatrix gram(k, k);
  RVector lin(k);
  for (Index a = 0; a < k; ++a) {
    lin(a) = vecs[static_cast<std::size_t>(a)].dot(rho.matrix() * vecs[static_cast<std::size_t>(a)]).real();
    for (Index b = 0; b <= a; ++b) {
      gram(a, b) = gram(b, a) = std::norm(vecs[static_cast<std::size_t>(a)].dot(vecs[static_cast<std::size_t>(b)]));
    }
  }
  const double constant = rho.matrix().squaredNorm();

  RVector lambda = RVector::Zero(k);
  if (warm != nullptr) {
    const Index m = std::min(k, warm->size());
    lambda.head(m) = warm->head(m).cwiseMax(0.0);
  }
  if (!(lambda.sum() > 0.0)) lambda.setConstant(1.0 / static_cast<double>(k));
  lambda /= lambda.sum();

  std::vector<bool> free(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) free[static_cast<std::size_t>(i)] = lambda(i) > 0.0;

  auto project = [&](const RVector& g) {
    double mean = 0.0;
    int count = 0;
    for (Index i = 0; i < k; ++i)
      if (free[static_cast<std::size_t>(i)]) {
        mean += g(i);
        ++count;
      }
    mean /= std::max(count, 1);
    RVector r = RVector::Zero(k);
    for (Index i = 0; i < k; ++i)
      if (free[static_cast<std::size_t>(i)]) r(i) = g(i) - mean;
    return r;
  };

  HullProjection out;
  RVector g = 2.0 * (gram * lambda - lin);
  const int max_outer = 20 * static_cast<int>(k) + 200;
  int outer = 0;
  int face_restarts = 0;
  for (; outer < max_outer; ++outer) {
    // Conjugate gradients on the current face {lambda_i = 0 for i not free}.
    RVector r = project(g);
    RVector p = -r;
    double rr = r.squaredNorm();
    bool blocked = false;
    const int n_free = static_cast<int>(std::count(free.begin(), free.end(), true));
    for (int it = 0; it < n_free + 2 && std::sqrt(rr) > kCgTol * (1.0 + g.norm()); ++it) {
      const RVector gp = gram * p;
      const double curvature = p.dot(gp);
      const double slope = g.dot(p);
      double step = curvature > 1e-300 ? -slope / (2.0 * curvature) : std::numeric_limits<double>::infinity();
      Index blocking = -1;
      for (Index i = 0; i < k; ++i) {
        if (free[static_cast<std::size_t>(i)] && p(i) < 0.0) {
          const double limit = -lambda(i) / p(i);
          if (limit <= step) {
            step = limit;
            blocking = i;
          }
        }
      }
      if (!std::isfinite(step)) break;
      lambda += step * p;
      g += 2.0 * step * gp;
      if (blocking >= 0) {
        lambda(blocking) = 0.0;
        free[static_cast<std::size_t>(blocking)] = false;
        blocked = true;
        break;
      }
      const RVector r_new = project(g);
      const double rr_new = r_new.squaredNorm();
      p = -r_new + (rr_new / rr) * p;
      r = r_new;
      rr = rr_new;
    }
    for (Index i = 0; i < k; ++i) {
      if (lambda(i) <= 0.0) {
        lambda(i) = 0.0;
        free[static_cast<std::size_t>(i)] = false;
      }
    }
    lambda /= lambda.sum();
    g = 2.0 * (gram * lambda - lin);
    if (blocked) {
      face_restarts = 0;
      continue;
    }
    // Rounding can keep the projected gradient above the CG tolerance; a few
    // restarts on the same face are enough before checking the bounds.
    if (project(g).norm() > kCgTol * (1.0 + g.norm()) && ++face_restarts < 3) continue;
    face_restarts = 0;

    // Face optimum: release the bound constraint with the most negative
    // directional derivative, if any.
    const double mu = g.dot(lambda);
    Index entering = -1;
    double worst = -kKktTol;
    for (Index i = 0; i < k; ++i) {
      if (!free[static_cast<std::size_t>(i)] && g(i) - mu < worst) {
        worst = g(i) - mu;
        entering = i;
      }
    }
    if (entering < 0) break;
    free[static_cast<std::size_t>(entering)] = true;
  }

  const double mu = g.dot(lambda);
  double violation = 0.0;
  for (Index i = 0; i < k; ++i) violation = std::min(violation, g(i) - mu);
  out.weights = lambda;
  out.f_min = std::max(0.0, constant - 2.0 * lin.dot(lambda) + lambda.dot(gram * lambda));
  out.kkt_violation = violation;
  out.iterations = outer;
  return out;
}

// ---------------------------------------------------------------------------
// Outer loop

SeparableApproximation closest_separable(const BipartiteState& s, const SolverOptions& opts) {
  const Dims dims = s.dims();
  const Index n = dims.total();
  const CMatrix& rho = s.matrix();
  Rng rng(opts.seed);

  // Start from the maximally mixed state, written as the uniform mixture of
  // the computational product basis, plus any warm-start atoms.
  SeparableApproximation out;
  for (Index i = 0; i < dims.a; ++i)
    for (Index j = 0; j < dims.b; ++j)
      out.atoms.push_back({1.0 / static_cast<double>(n), PureProductState(CVector::Unit(dims.a, i), CVector::Unit(dims.b, j))});
  if (!opts.warm_atoms.empty()) {
    std::vector<PureProductState> states;
    for (const auto& a : out.atoms) states.push_back(a.state);
    for (const auto& w : opts.warm_atoms) {
      if (!(w.dims() == dims)) throw DimensionMismatch("closest_separable: warm atoms have the wrong dims");
      states.push_back(w);
    }
    const HullProjection hp = hull_project(s.op(), states);
    out.atoms.clear();
    for (std::size_t a = 0; a < states.size(); ++a)
      if (hp.weights(static_cast<Index>(a)) > 0.0) out.atoms.push_back({hp.weights(static_cast<Index>(a)), states[a]});
  }
  out.rho_s = mixture(out.atoms, n);
  out.sigma = rho - out.rho_s;
  out.distance = half_norm(out.sigma);
  out.distance_history.push_back(out.distance);

  // Replace the atoms by polished ones when that lowers the distance.
  auto try_polish = [&](int iterations, const CMatrix& kern) {
    const auto polished = polish_atoms(rho, dims, out.atoms, iterations, kern);
    if (!polished) return false;
    std::vector<PureProductState> states;
    RVector weights(static_cast<Index>(polished->size()));
    for (std::size_t a = 0; a < polished->size(); ++a) {
      states.push_back((*polished)[a].state);
      weights(static_cast<Index>(a)) = (*polished)[a].weight;
    }
    const HullProjection pp = hull_project(s.op(), states, &weights);
    std::vector<WeightedProduct> kept;
    for (std::size_t a = 0; a < states.size(); ++a)
      if (pp.weights(static_cast<Index>(a)) > 0.0) kept.push_back({pp.weights(static_cast<Index>(a)), states[a]});
    CMatrix rho_s = mixture(kept, n);
    if (!(half_norm(rho - rho_s) < half_norm(out.sigma))) return false;
    out.atoms = std::move(kept);
    out.rho_s = std::move(rho_s);
    out.sigma = rho - out.rho_s;
    return true;
  };

  // A singular rho lies on the boundary of the state space. If it is also
  // separable, the gap only bounds the distance by sqrt(gap), and the plain
  // iteration approaches zero slowly, so a passing gap test that does not
  // exclude zero distance triggers a polish restricted to the face.
  CMatrix kernel;
  {
    const Spectrum sp = jacobi_eigensystem(s.op().matrix());
    Index nk = 0;
    while (nk < n && sp.values(n - 1 - nk) <= kKernelTol) ++nk;
    if (nk > 0 && nk < n) kernel = sp.vectors.rightCols(nk);
  }
  int face_attempts = 0;

  std::optional<CVector> warm;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    out.iterations = iter;
    if (out.distance < opts.target_distance) {
      out.converged = true;
      out.stop = StopReason::target_distance;
      break;
    }
    const HermitianOperator sigma = HermitianOperator::hermitian_part(out.sigma);
    const double baseline = (out.rho_s * out.sigma).trace().real();
    ProductOverlap best = max_product_overlap(sigma, dims, opts.restarts, rng, warm ? &*warm : nullptr);
    double gap = best.value - baseline;
    const double gap_tol = std::max(opts.tol, opts.relative_gap * out.distance * out.distance);
    if (gap <= gap_tol && opts.escalated_restarts > opts.restarts) {
      ProductOverlap wider = max_product_overlap(sigma, dims, opts.escalated_restarts, rng);
      if (wider.value > best.value) {
        best = std::move(wider);
        gap = best.value - baseline;
      }
    }
    out.gap = gap;
    if (gap <= gap_tol && kernel.cols() > 0 && gap >= out.distance * out.distance && face_attempts < kFaceAttempts) {
      ++face_attempts;
      if (try_polish(kFaceIterations, kernel)) {
        out.distance = half_norm(out.sigma);
        out.distance_history.push_back(out.distance);
        continue;
      }
    }
    if (gap <= gap_tol) {
      out.converged = true;
      out.stop = StopReason::gap;
      break;
    }
    warm = best.state.chi();

    // Kept in case rounding makes this step lengthen sigma.
    const std::vector<WeightedProduct> before = out.atoms;
    const CMatrix before_rho_s = out.rho_s;
    const CMatrix before_sigma = out.sigma;

    std::vector<PureProductState> candidates;
    RVector previous(static_cast<Index>(out.atoms.size()));
    for (std::size_t a = 0; a < out.atoms.size(); ++a) {
      candidates.push_back(out.atoms[a].state);
      previous(static_cast<Index>(a)) = out.atoms[a].weight;
    }
    candidates.push_back(best.state);
    ++out.products_generated;
    const HullProjection hp = hull_project(s.op(), candidates, &previous);

    std::vector<WeightedProduct> kept;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      const double w = hp.weights(static_cast<Index>(a));
      if (w > 0.0) kept.push_back({w, candidates[a]});
    }
    out.atoms = std::move(kept);
    out.rho_s = mixture(out.atoms, n);
    out.sigma = rho - out.rho_s;
    if (opts.refine_sweeps > 0) refine_atoms(s, out, opts.refine_sweeps);
    if (opts.polish_iterations > 0) try_polish(opts.polish_iterations, CMatrix());
    if (half_norm(out.sigma) > out.distance) {
      out.atoms = before;
      out.rho_s = before_rho_s;
      out.sigma = before_sigma;
    }
    out.distance = half_norm(out.sigma);
    out.distance_history.push_back(out.distance);

    if (out.atoms.size() > opts.atom_cap) {
      out.distance_lower_bound = std::sqrt(std::max(0.0, out.distance * out.distance - std::max(out.gap, 0.0)));
      throw IterationBudgetExceeded("closest_separable: atom cap exceeded", std::move(out));
    }
  }
  out.distance_lower_bound = std::sqrt(std::max(0.0, out.distance * out.distance - std::max(out.gap, 0.0)));
  if (!out.converged) {
    std::ostringstream os;
    os << "closest_separable: gap " << out.gap << " above tolerance after " << opts.max_iter << " iterations";
    throw IterationBudgetExceeded(os.str(), std::move(out));
  }
  return out;
}

BoundaryTrace boundary_trace(const BipartiteOperator& direction, double tol, SolverOptions opts) {
  const Dims dims = direction.dims;
  const Index n = dims.total();
  if (std::abs(direction.op.trace() - 1.0) > kTraceTol)
    throw FailsPrecondition("boundary_trace: direction state must have unit trace");
  if (min_eigenvalue(direction.op) < -kPositivityTol)
    throw FailsPrecondition("boundary_trace: direction state is not a density matrix");

  const CMatrix origin = CMatrix::Identity(n, n) / static_cast<double>(n);
  const CMatrix delta = direction.op.matrix() - origin;
  const double length = half_norm(delta);
  opts.target_distance = tol;
  opts.relative_gap = 1e-2;
  opts.tol = 0.0;
  opts.max_iter = std::min(opts.max_iter, kBoundaryInnerIter);

  auto state_at = [&](double t) {
    return BipartiteState(DensityMatrix(HermitianOperator::hermitian_part(origin + t * delta)), dims);
  };

  double t = 1.0;
  int steps = 0;
  int stalled = 0;
  std::vector<double> history{t};
  std::vector<double> distances;
  for (;;) {
    const BipartiteState current = state_at(t);
    SeparableApproximation approx;
    bool upper_bound_step = false;
    try {
      approx = closest_separable(current, opts);
    } catch (const IterationBudgetExceeded& e) {
      // Very close to the boundary the gap can stall near d^2. A stalled
      // point is still usable: the distance is an upper bound, so a step of
      // that length overshoots into S by at most the distance itself.
      approx = e.best();
      if (!(approx.distance_lower_bound > 0.0)) {
        if (!(approx.distance < kStallDistanceFactor * tol)) throw;
        upper_bound_step = true;
        ++stalled;
      }
    }
    distances.push_back(approx.distance);
    if (approx.distance < tol || length == 0.0) {
      return {t, current, steps, approx.distance, approx.atoms.size(), std::move(history), std::move(distances), stalled};
    }
    if (steps >= kMaxBoundarySteps)
      throw NonConvergence("boundary_trace: distance did not drop below tol", approx.distance);

    // The certified step never crosses the boundary. Near the boundary the
    // distance is close to linear in t, and when the ray meets the boundary
    // at a shallow angle the certified steps shrink only geometrically; a
    // secant step through the last two distances, kept just short of the
    // predicted crossing, cuts that tail.
    double step = (upper_bound_step ? approx.distance : approx.distance_lower_bound) / length;
    if (distances.size() >= 2 && !upper_bound_step) {
      const double d_prev = distances[distances.size() - 2];
      const double t_prev = history[history.size() - 2];
      if (d_prev > approx.distance) {
        const double secant = approx.distance * (t_prev - t) / (d_prev - approx.distance) - 0.5 * tol / length;
        step = std::clamp(secant, step, kMaxSecantFactor * step);
      }
    }
    t = std::max(0.0, t - step);
    opts.warm_atoms.clear();
    for (const auto& a : approx.atoms) opts.warm_atoms.push_back(a.state);
    ++steps;
    history.push_back(t);
  }
}

}  // namespace sepgeo
