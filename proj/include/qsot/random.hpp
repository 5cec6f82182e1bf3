// random.hpp: seeded generators for test harnesses and property sweeps

#pragma once

#include "qsot/algebra.hpp"

#include <cstdint>
#include <random>

namespace qsot {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. standard complex Gaussian entries.
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
Matrix haar_unitary(std::size_t d, Rng& rng);

/// Blockwise Haar unitary element.
AlgebraElement random_unitary(const AlgebraShape& shape, std::uint64_t seed);

/// Random column-stochastic matrix with strictly positive entries.
Eigen::MatrixXd random_stochastic(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Random probability vector with full support.
std::vector<double> random_distribution(std::size_t size, std::uint64_t seed);

}  // namespace qsot
