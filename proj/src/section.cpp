#include "sepgeo/section.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "sepgeo/errors.hpp"
#include "sepgeo/matrix_io.hpp"
#include "sepgeo/states.hpp"

namespace sepgeo {

namespace {

// hs_inner(e, e) = 2
CMatrix normalize_direction(const CMatrix& m) { return m * (std::sqrt(2.0) / m.norm()); }

}  // namespace

SectionPlane make_plane(const BipartiteState& first, const BipartiteState& second, std::string first_name,
                        std::string second_name) {
  if (!(first.dims() == second.dims())) throw DimensionMismatch("make_plane: anchors have different dims");
  const Dims dims = first.dims();
  const Index n = dims.total();
  SectionPlane p;
  p.dims = dims;
  p.origin = CMatrix::Identity(n, n) / static_cast<double>(n);
  const CMatrix d1 = first.matrix() - p.origin;
  CMatrix d2 = second.matrix() - p.origin;
  if (d1.norm() < 1e-12) throw InvalidInput("make_plane: first anchor coincides with the maximally mixed state");
  p.e1 = normalize_direction(d1);
  d2 -= (0.5 * (p.e1.adjoint() * d2).trace().real()) * p.e1;
  if (d2.norm() < 1e-10) throw InvalidInput("make_plane: anchors are collinear with the maximally mixed state");
  p.e2 = normalize_direction(d2);
  p.anchor_names = {std::move(first_name), std::move(second_name)};
  return p;
}

SectionPlane default_plane_3x3(double a) {
  std::ostringstream name;
  name << "ppt_entangled_3x3(" << a << ")";
  return make_plane(bell_state(3), horodecki_3x3(a), "bell(3)", name.str());
}

std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::state:
      return "D";
    case BoundaryKind::peres:
      return "P";
    case BoundaryKind::separable:
      return "S";
  }
  return "?";
}

std::vector<SectionRow> map_section(const SectionPlane& plane, const SectionOptions& opts) {
  if (opts.rays < 1) throw InvalidInput("map_section: need at least one ray");
  if (!(opts.tol > 0.0)) throw InvalidInput("map_section: tol must be positive");
  const Dims dims = plane.dims;
  std::vector<SectionRow> rows;
  rows.reserve(static_cast<std::size_t>(3 * opts.rays));

  for (int i = 0; i < opts.rays; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / opts.rays;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const CMatrix w = c * plane.e1 + s * plane.e2;
    // The direction w has unit Hilbert-Schmidt length, so the crossing
    // parameter is the radius.
    const CMatrix w_pt = partial_transpose(BipartiteOperator(HermitianOperator::hermitian_part(w), dims)).op.matrix();

    auto base = [&](BoundaryKind kind, double radius) {
      SectionRow r;
      r.ray = i;
      r.angle = angle;
      r.kind = kind;
      r.radius = radius;
      r.u = radius * c;
      r.v = radius * s;
      return r;
    };

    const double r_d = first_crossing(plane.origin, w, 1e-11);
    const double r_pt = first_crossing(plane.origin, w_pt, 1e-11);

    SectionRow d = base(BoundaryKind::state, r_d);
    d.residual = min_eigenvalue(HermitianOperator::hermitian_part(plane.origin + r_d * w));
    rows.push_back(d);

    const double r_p = std::min(r_d, r_pt);
    SectionRow p = base(BoundaryKind::peres, r_p);
    const CMatrix at_p = plane.origin + r_p * w;
    p.limited_by_state = r_d <= r_pt;
    p.residual = std::min(min_eigenvalue(HermitianOperator::hermitian_part(at_p)),
                          min_eigenvalue(HermitianOperator::hermitian_part(plane.origin + r_p * w_pt)));
    rows.push_back(p);

    if (!opts.separable) continue;
    SectionRow sep = base(BoundaryKind::separable, r_p);
    try {
      SolverOptions so = opts.solver;
      so.seed = opts.solver.seed + static_cast<std::uint64_t>(i);
      const BoundaryTrace bt =
          boundary_trace(BipartiteOperator(HermitianOperator::hermitian_part(at_p), dims), opts.tol, so);
      sep = base(BoundaryKind::separable, bt.t_star * r_p);
      sep.residual = bt.final_distance;
      sep.start_distance = bt.distance_history.front();
      sep.steps = bt.steps;
      sep.atoms = bt.final_atoms;
    } catch (const Error& e) {
      sep.error = e.what();
      sep.residual = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(sep);
  }
  return rows;
}

std::string section_csv(const std::vector<SectionRow>& rows, Coordinates coords) {
  const double scale = coords == Coordinates::fig5 ? std::sqrt(2.0) : 1.0;
  std::ostringstream os;
  os << "# format_version " << kFormatVersion << ", coordinates " << (coords == Coordinates::fig5 ? "fig5" : "hs")
     << "\n";
  os << "ray,angle,boundary,radius,u,v,residual,start_distance,steps,atoms,limited_by_state,error\n";
  os << std::setprecision(17);
  for (const SectionRow& r : rows) {
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    os << r.ray << ',' << r.angle << ',' << to_string(r.kind) << ',' << scale * r.radius << ',' << scale * r.u << ','
       << scale * r.v << ',' << r.residual << ',' << r.start_distance << ',' << r.steps << ',' << r.atoms << ','
       << (r.limited_by_state ? 1 : 0) << ',' << err << '\n';
  }
  return os.str();
}

}  // namespace sepgeo
