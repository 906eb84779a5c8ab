#include "sepgeo/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "sepgeo/errors.hpp"

namespace sepgeo {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidInput("complex entry must be a number or a [re, im] pair");
}

json matrix_to_json(const HermitianOperator& op, std::optional<std::pair<Index, Index>> dims) {
  const Index n = op.dim();
  json rows = json::array();
  for (Index i = 0; i < n; ++i) {
    json row = json::array();
    for (Index j = 0; j < n; ++j) {
      Complex z;
      if (i == j) z = {op(i, i).real(), 0.0};
      else if (i < j) z = op(i, j);
      else z = std::conj(op(j, i));
      row.push_back(complex_to_json(z));
    }
    rows.push_back(std::move(row));
  }
  json doc = {{"format_version", kFormatVersion}, {"dim", n}};
  if (dims) doc["dims"] = json::array({dims->first, dims->second});
  doc["entries"] = std::move(rows);
  return doc;
}

MatrixDocument matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries")) throw InvalidInput("matrix JSON needs an \"entries\" field");
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.empty()) throw InvalidInput("\"entries\" must be a non-empty array");
  const Index n = static_cast<Index>(entries.size());
  if (j.contains("dim") && j.at("dim").get<Index>() != n) throw InvalidInput("\"dim\" disagrees with entries");

  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) throw InvalidInput("matrix rows must have length dim");
    for (Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }

  MatrixDocument doc{HermitianOperator(m), std::nullopt};
  if (j.contains("dims")) {
    const json& d = j.at("dims");
    if (!d.is_array() || d.size() != 2) throw InvalidInput("\"dims\" must be [nA, nB]");
    doc.dims = std::make_pair(d[0].get<Index>(), d[1].get<Index>());
  }
  return doc;
}

json dense_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix dense_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput("dense matrix must be an array of rows");
  const Index r = static_cast<Index>(j.size());
  const Index c = static_cast<Index>(j[0].size());
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (static_cast<Index>(j[static_cast<std::size_t>(i)].size()) != c) throw InvalidInput("ragged matrix rows");
    for (Index k = 0; k < c; ++k) m(i, k) = complex_from_json(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("vector must be a non-empty array");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

MatrixDocument read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  try {
    return matrix_from_json(j);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sepgeo
