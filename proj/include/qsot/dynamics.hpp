// dynamics.hpp: unitary chains from a time-independent Hamiltonian

#pragma once

#include "qsot/chanmap.hpp"

#include <vector>

namespace qsot {

/// exp(-i H t), blockwise through the eigendecomposition of H.
AlgebraElement evolution_operator(const AlgebraElement& h, double t, double tol = kDefaultTol);

/// Chain of Ad_{exp(-i H t_k)}; each t_k is the duration of step k, so the
/// composite is evolution by the total time.
Chain unitary_chain(const AlgebraElement& h, const std::vector<double>& durations, double tol = kDefaultTol);

/// U H U^dag.
AlgebraElement transform_hamiltonian(const AlgebraElement& h, const AlgebraElement& u, double tol = kDefaultTol);

}  // namespace qsot
