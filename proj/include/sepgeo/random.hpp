#pragma once

// Seeded random generators for vectors, unitaries and states.

#include <cstdint>
#include <random>

#include "sepgeo/linalg.hpp"

namespace sepgeo {

using Rng = std::mt19937_64;

/// Complex vector with i.i.d. standard normal entries, normalized.
CVector random_unit_vector(Index n, Rng& rng);
/// n x m matrix of i.i.d. complex standard normal entries.
CMatrix random_ginibre(Index n, Index m, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
CMatrix random_unitary(Index n, Rng& rng);
/// G G^dagger / Tr with G an n x rank Ginibre matrix.
DensityMatrix random_density_matrix(Index n, Index rank, Rng& rng);
HermitianOperator random_hermitian(Index n, Rng& rng);

}  // namespace sepgeo
