// bayes.hpp: Bayesian inverses for the canonical state over time

#pragma once

#include "qsot/covariance.hpp"

#include <optional>

namespace qsot {

/// gamma : B (x) A -> A (x) B, b (x) a -> a (x) b.
LinearOperatorMap gamma_swap(const AlgebraShape& a, const AlgebraShape& b);

struct BayesSolution {
    /// Minimum-norm solution of the linear system; present even when the
    /// residual is too large to call it an inverse.
    LinearOperatorMap inverse;
    bool exists = false;
    double residual = 0.0;
    double tp_deviation = 0.0;
    double hp_deviation = 0.0;
    bool cp = false;
    double min_choi_eigenvalue = 0.0;
    /// Dimension of the solution space (zero when the solution is unique).
    std::size_t degeneracy = 0;
};

/// Solve (id (x) F)(B_B(sigma)) = gamma^{-1}(E * rho) for F : B -> A with
/// sigma = E(rho). `exists` is set iff the residual is within tol.
BayesSolution solve_bayes(const LinearOperatorMap& e, const AlgebraElement& rho, double tol = kDefaultTol);

struct BayesReport {
    bool holds = false;
    double deviation = 0.0;
};

/// E * rho against gamma(F * E(rho)).
BayesReport verify_bayes(const LinearOperatorMap& e, const AlgebraElement& rho, const LinearOperatorMap& inverse,
                         double tol = kDefaultTol);

struct BayesCovarianceReport {
    bool holds = false;
    /// The untransformed rule failed, so the check is vacuous.
    bool vacuous = false;
    double precondition_deviation = 0.0;
    double deviation = 0.0;
};

/// Transform E' = psi o E o phi^-1, F' = phi o F o psi^-1, rho' = phi(rho)
/// and check the rule for the primed data.
BayesCovarianceReport check_bayes_covariance(const LinearOperatorMap& e, const AlgebraElement& rho,
                                             const LinearOperatorMap& inverse, const StarIsomorphism& phi,
                                             const StarIsomorphism& psi, double tol = kDefaultTol);

/// (phi (x) psi) o gamma against gamma' o (psi (x) phi), for phi : A -> A',
/// psi : B -> B'. Returns the max deviation.
double swap_lemma_deviation(const StarIsomorphism& phi, const StarIsomorphism& psi);

}  // namespace qsot
