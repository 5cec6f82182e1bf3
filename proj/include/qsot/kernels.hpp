// kernels.hpp: the dense inner loops shared by every module
//
// Each kernel exists twice: a serial reference written entry by entry for
// readability, and an OpenMP version with the same contract that the library
// calls. Tests pin the two against each other; bench/ times them.

#pragma once

#include "qsot/algebra.hpp"

#include <span>
#include <vector>

namespace qsot::kernels {

/// kron_to_flat[k] is the flattened HS coordinate of the Kronecker-ordered
/// coordinate tuple (alpha_0, ..., alpha_n) with lexicographic index k.
std::vector<std::size_t> kron_to_flat(std::span<const AlgebraShape> factors);

namespace serial {

/// (id_G (x) E)(B_G(x)) for a map E : G -> B given by its HS matrix
/// (B.total_dim() x G.total_dim()). The result lives on tensor_shape(G, B).
AlgebraElement bloom(const Matrix& map, const AlgebraShape& target, const AlgebraElement& x);

/// Partial trace of a flattened element over the factors missing from keep
/// (keep sorted ascending, non-empty). Returns the element over the kept
/// factors, flattened.
AlgebraElement partial_trace(std::span<const AlgebraShape> factors, const AlgebraElement& x,
                             std::span<const std::size_t> keep);

/// Apply a map on factor k only: (id (x) ... (x) M (x) ... (x) id). The map
/// goes from factors[k] to new_factor. Coordinates in and out are flat.
Vector factor_apply(std::span<const AlgebraShape> factors, const Vector& x, std::size_t k,
                    const Matrix& map, const AlgebraShape& new_factor);

}  // namespace serial

namespace parallel {

AlgebraElement bloom(const Matrix& map, const AlgebraShape& target, const AlgebraElement& x);

AlgebraElement partial_trace(std::span<const AlgebraShape> factors, const AlgebraElement& x,
                             std::span<const std::size_t> keep);

Vector factor_apply(std::span<const AlgebraShape> factors, const Vector& x, std::size_t k,
                    const Matrix& map, const AlgebraShape& new_factor);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace qsot::kernels
