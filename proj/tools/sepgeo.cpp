// sepgeo: command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 non-convergence, 1 anything else.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepgeo/bipartite.hpp"
#include "sepgeo/errors.hpp"
#include "sepgeo/matrix_io.hpp"
#include "sepgeo/qubit_geometry.hpp"
#include "sepgeo/schmidt_nd.hpp"
#include "sepgeo/section.hpp"
#include "sepgeo/solver.hpp"
#include "sepgeo/states.hpp"

using nlohmann::json;
using namespace sepgeo;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNonConvergence = 3;

struct Common {
  std::string input;
  std::string dims;
  std::string out;
  double tol = -1.0;
  std::uint64_t seed = 0;
  int max_iter = -1;
};

Dims parse_dims(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b) || a.empty() || b.empty())
    throw InvalidInput("--dims expects nA,nB");
  try {
    std::size_t pa = 0, pb = 0;
    const long na = std::stol(a, &pa);
    const long nb = std::stol(b, &pb);
    if (pa != a.size() || pb != b.size() || na < 1 || nb < 1) throw InvalidInput("--dims expects positive integers");
    return {na, nb};
  } catch (const std::logic_error&) {
    throw InvalidInput("--dims expects nA,nB");
  }
}

BipartiteState load_state(const Common& c, std::optional<Dims> forced = std::nullopt) {
  const MatrixDocument doc = read_matrix_file(c.input);
  Dims dims{};
  if (!c.dims.empty()) {
    dims = parse_dims(c.dims);
  } else if (doc.dims) {
    dims = {doc.dims->first, doc.dims->second};
  } else if (forced) {
    dims = *forced;
  } else {
    throw InvalidInput("no --dims given and the matrix file has no \"dims\" field");
  }
  if (forced && !(dims == *forced)) throw InvalidDimension("this command needs dims 2,2");
  return BipartiteState(DensityMatrix(doc.op), dims);
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidInput("cannot open '" + c.out + "' for writing");
  f << text;
  if (!f) throw Error("writing '" + c.out + "' failed");
}

void emit(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

json header(const char* kind) { return json{{"format_version", kFormatVersion}, {"kind", kind}}; }

json triple_to_json(const Triple& t) { return json::array({t[0], t[1], t[2]}); }

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  if (c.tol > 0.0) o.tol = c.tol;
  if (c.max_iter > 0) o.max_iter = c.max_iter;
  o.seed = c.seed;
  return o;
}

json approximation_to_json(const SeparableApproximation& a) {
  json atoms = json::array();
  for (const auto& w : a.atoms)
    atoms.push_back({{"lambda", w.weight}, {"phi", vector_to_json(w.state.phi())}, {"chi", vector_to_json(w.state.chi())}});
  json j = header("distance");
  j["distance"] = a.distance;
  j["distance_lower_bound"] = a.distance_lower_bound;
  j["gap"] = std::isfinite(a.gap) ? json(a.gap) : json(nullptr);
  j["converged"] = a.converged;
  j["iterations"] = a.iterations;
  j["atoms"] = std::move(atoms);
  return j;
}

// ---------------------------------------------------------------------------

int run_peres(const Common& c) {
  const BipartiteState s = load_state(c);
  const PeresResult r = peres_check(s, c.tol > 0.0 ? c.tol : kPositivityTol);
  json j = header("peres");
  j["pass"] = r.pass;
  j["min_eigenvalue"] = r.min_eigenvalue;
  emit(c, j);
  return 0;
}

int run_standard_form(const Common& c) {
  const BipartiteState s = load_state(c, Dims{2, 2});
  const Separability2x2 r = separable_2x2(s);
  json j = header("standard-form");
  j["d"] = triple_to_json(r.form.d);
  j["va"] = dense_to_json(r.form.va);
  j["vb"] = dense_to_json(r.form.vb);
  j["residual"] = r.form.residual;
  j["f_min"] = r.form.f_min;
  j["iterations"] = r.form.iterations;
  j["perturbation"] = r.perturbation;
  j["separable"] = r.separable;
  j["pt_min_eigenvalue"] = r.pt_min_eigenvalue;
  emit(c, j);
  return 0;
}

int run_schmidt(const Common& c) {
  const BipartiteState s = load_state(c);
  const SchmidtDecomposition d = transform_to_schmidt(s);
  json j = header("schmidt");
  j["xi"] = d.xi;
  json ba = json::array(), bb = json::array();
  for (const auto& m : d.basis_a) ba.push_back(dense_to_json(m.matrix()));
  for (const auto& m : d.basis_b) bb.push_back(dense_to_json(m.matrix()));
  j["basis_a"] = std::move(ba);
  j["basis_b"] = std::move(bb);
  j["ta"] = dense_to_json(d.ta);
  j["tb"] = dense_to_json(d.tb);
  j["gentrace_residual"] = d.gentrace_residual;
  j["reconstruction_residual"] = d.reconstruction_residual;
  j["f_min"] = d.f_min;
  emit(c, j);
  return 0;
}

int run_distance(const Common& c) {
  const BipartiteState s = load_state(c);
  try {
    emit(c, approximation_to_json(closest_separable(s, solver_options(c))));
    return 0;
  } catch (const IterationBudgetExceeded& e) {
    emit(c, approximation_to_json(e.best()));
    std::cerr << "sepgeo: " << e.what() << "\n";
    return kExitNonConvergence;
  }
}

struct SectionArgs {
  int rays = 72;
  double a = 0.5;
  std::string anchor1, anchor2;
  std::string coords = "hs";
  bool no_separable = false;
};

int run_map_section(const Common& c, const SectionArgs& sa) {
  SectionPlane plane;
  if (sa.anchor1.empty() != sa.anchor2.empty()) throw InvalidInput("--anchor1 and --anchor2 go together");
  if (!sa.anchor1.empty()) {
    Common c1 = c, c2 = c;
    c1.input = sa.anchor1;
    c2.input = sa.anchor2;
    plane = make_plane(load_state(c1), load_state(c2), sa.anchor1, sa.anchor2);
  } else {
    plane = default_plane_3x3(sa.a);
  }
  SectionOptions so;
  so.rays = sa.rays;
  if (c.tol > 0.0) so.tol = c.tol;
  so.solver = solver_options(Common{});
  if (c.max_iter > 0) so.solver.max_iter = c.max_iter;
  so.solver.seed = c.seed;
  so.separable = !sa.no_separable;
  const std::vector<SectionRow> rows = map_section(plane, so);
  emit(c, section_csv(rows, sa.coords == "fig5" ? Coordinates::fig5 : Coordinates::hs));
  for (const auto& r : rows)
    if (!r.error.empty()) std::cerr << "sepgeo: ray " << r.ray << ": " << r.error << "\n";
  return 0;
}

struct StateArgs {
  std::string family;
  std::vector<double> params;
  std::string phi, chi;
};

int run_make_state(const Common& c, const StateArgs& sa) {
  CVector phi, chi;
  try {
    if (!sa.phi.empty()) phi = vector_from_json(json::parse(sa.phi));
    if (!sa.chi.empty()) chi = vector_from_json(json::parse(sa.chi));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("--phi/--chi: ") + e.what());
  }
  const GeneratedState g = make_state(sa.family, sa.params, phi, chi, solver_options(c));
  const Dims d = g.state.dims();
  json j = matrix_to_json(g.state.op(), std::make_pair(d.a, d.b));
  j["family"] = sa.family;
  j["params"] = sa.params;
  j["pt_min_eigenvalue"] = g.pt_min_eigenvalue;
  if (g.distance) j["distance"] = *g.distance;
  emit(c, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability geometry of bipartite density matrices"};
  app.require_subcommand(1);
  Common c;
  SectionArgs section;
  StateArgs state;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("matrix", c.input, "Matrix JSON file")->required();
    sub->add_option("--dims", c.dims, "Subsystem dimensions nA,nB");
    sub->add_option("--tol", c.tol, "Tolerance");
    sub->add_option("--seed", c.seed, "Random seed")->default_val(0);
    sub->add_option("--max-iter", c.max_iter, "Iteration budget");
    sub->add_option("--out", c.out, "Output file (default stdout)");
  };

  CLI::App* peres = app.add_subcommand("peres", "Partial transpose test");
  add_common(peres, true);
  CLI::App* sf = app.add_subcommand("standard-form", "Two-qubit standard form and separability");
  add_common(sf, true);
  CLI::App* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition under product transformations");
  add_common(schmidt, true);
  CLI::App* distance = app.add_subcommand("distance", "Distance to the closest separable state");
  add_common(distance, true);
  CLI::App* map = app.add_subcommand("map-section", "Boundaries along rays in a plane through 1/n");
  add_common(map, false);
  map->add_option("--rays", section.rays, "Number of rays")->default_val(72)->check(CLI::PositiveNumber);
  map->add_option("--a", section.a, "Parameter of the default PPT entangled anchor")->default_val(0.5);
  map->add_option("--anchor1", section.anchor1, "First anchor matrix (replaces bell(3))");
  map->add_option("--anchor2", section.anchor2, "Second anchor matrix (replaces the PPT entangled state)");
  map->add_option("--coords", section.coords, "Coordinate convention")
      ->check(CLI::IsMember({"hs", "fig5"}))
      ->default_val("hs");
  map->add_flag("--no-separable", section.no_separable, "Skip the separable boundary");
  CLI::App* make = app.add_subcommand("make-state", "Generate a named state");
  add_common(make, false);
  make->add_option("family", state.family, "maximally_mixed, bell, werner, ppt_entangled_3x3, pure_product")
      ->required();
  make->add_option("--param", state.params, "Family parameter (repeatable)");
  make->add_option("--phi", state.phi, "pure_product: JSON vector for subsystem A");
  make->add_option("--chi", state.chi, "pure_product: JSON vector for subsystem B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*peres) return run_peres(c);
    if (*sf) return run_standard_form(c);
    if (*schmidt) return run_schmidt(c);
    if (*distance) return run_distance(c);
    if (*map) return run_map_section(c, section);
    if (*make) return run_make_state(c, state);
  } catch (const InvalidInput& e) {
    std::cerr << "sepgeo: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NonConvergence& e) {
    std::cerr << "sepgeo: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "sepgeo: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
