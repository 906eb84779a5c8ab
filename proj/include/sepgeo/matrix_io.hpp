#pragma once

// Matrix JSON format shared by every command:
//
//   {"format_version": 1, "dim": n, "dims": [nA, nB],
//    "entries": [[[re, im], ...], ...]}
//
// Entries are row-major. On read the upper triangle (including the real part
// of the diagonal) is authoritative and the lower triangle is rebuilt as its
// conjugate; "dims" and "format_version" are optional. Writers emit the lower
// triangle as the exact conjugate of the upper one.

#include <optional>
#include <string>

#include <json.hpp>

#include "sepgeo/linalg.hpp"

namespace sepgeo {

inline constexpr int kFormatVersion = 1;

struct MatrixDocument {
  HermitianOperator op;
  std::optional<std::pair<Index, Index>> dims;
};

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const HermitianOperator& op,
                              std::optional<std::pair<Index, Index>> dims = std::nullopt);
MatrixDocument matrix_from_json(const nlohmann::json& j);

/// Dense complex matrix (not necessarily hermitian) as nested [re, im] rows.
nlohmann::json dense_to_json(const CMatrix& m);
CMatrix dense_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);

MatrixDocument read_matrix_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sepgeo
