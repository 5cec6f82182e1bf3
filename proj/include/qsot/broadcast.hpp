// broadcast.hpp: multiplication maps, SWAP and canonical broadcasting

#pragma once

#include "qsot/chanmap.hpp"

#include <cstdint>

namespace qsot {

/// A (x) A -> A, a (x) b -> ab.
LinearOperatorMap mu(const AlgebraShape& shape);
/// A (x) A -> A, a (x) b -> ba.
LinearOperatorMap mu_tilde(const AlgebraShape& shape);

/// sum_ij |i><j| (x) |j><i| on a single-block algebra.
FactoredElement swap_element(const AlgebraShape& shape);

/// Canonical broadcasting map as half the sum of the HS adjoints of the
/// multiplication maps. Dense: total_dim^2 x total_dim.
LinearOperatorMap broadcast_map(const AlgebraShape& shape);

/// Canonical broadcast of a single element, computed entrywise without
/// building the map.
FactoredElement broadcast(const AlgebraElement& a);

/// 1/2 {A (x) 1, SWAP}; single-block algebras only.
FactoredElement broadcast_anticommutator(const AlgebraElement& a);

/// delta_x -> delta_x (x) delta_x on a classical algebra.
LinearOperatorMap classical_broadcast(const AlgebraShape& shape);

struct BroadcastAxiomsReport {
    bool holds = false;
    std::size_t trials = 0;
    double covariance_deviation = 0.0;
    double permutation_deviation = 0.0;
    double classical_deviation = 0.0;
};

/// Covariance under random unitaries, SWAP invariance and classical
/// consistency on M_d, each as a max deviation over the trials.
BroadcastAxiomsReport check_broadcast_axioms(std::size_t d, std::size_t trials, std::uint64_t seed,
                                             double tol = 1e-10);

}  // namespace qsot
