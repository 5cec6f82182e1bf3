// covariance.hpp: *-isomorphisms and covariance checks

#pragma once

#include "qsot/sot.hpp"

#include <cstdint>
#include <vector>

namespace qsot {

/// *-isomorphism in classified form: target block t receives source block
/// perm[t], conjugated by unitaries[t]. perm may only match equal-size blocks.
class StarIsomorphism {
public:
    StarIsomorphism(AlgebraShape source, AlgebraShape target, std::vector<std::size_t> perm,
                    std::vector<Matrix> unitaries, double tol = kDefaultTol);

    static StarIsomorphism identity(const AlgebraShape& shape);
    /// Ad_U on U's own shape.
    static StarIsomorphism conjugation(const AlgebraElement& u, double tol = kDefaultTol);
    /// Pure block permutation on one shape.
    static StarIsomorphism block_permutation(const AlgebraShape& shape, std::vector<std::size_t> perm);

    const AlgebraShape& source() const { return source_; }
    const AlgebraShape& target() const { return target_; }
    const std::vector<std::size_t>& perm() const { return perm_; }
    const std::vector<Matrix>& unitaries() const { return unitaries_; }

    bool permutes_blocks() const;

private:
    AlgebraShape source_, target_;
    std::vector<std::size_t> perm_;
    std::vector<Matrix> unitaries_;
};

AlgebraElement apply_iso(const StarIsomorphism& phi, const AlgebraElement& a);
LinearOperatorMap as_map(const StarIsomorphism& phi);
StarIsomorphism inverse(const StarIsomorphism& phi);
StarIsomorphism compose(const StarIsomorphism& f, const StarIsomorphism& g);

/// phi_0 (x) ... (x) phi_n as a single isomorphism of the flattened product.
StarIsomorphism tensor_iso(const std::vector<StarIsomorphism>& isos);
/// Same, as a dense map with factor lists attached.
LinearOperatorMap tensor_iso_map(const std::vector<StarIsomorphism>& isos);
/// Factorwise application to an element of A_0 (x) ... (x) A_n.
FactoredElement apply_iso(const std::vector<StarIsomorphism>& isos, const FactoredElement& x);

/// Haar unitaries per block and a uniformly random permutation among blocks
/// of equal size; source == target == shape.
StarIsomorphism random_iso(const AlgebraShape& shape, std::uint64_t seed);

/// E'_i = phi_i o E_i o phi_{i-1}^{-1}.
Chain conjugate_chain(const Chain& chain, const std::vector<StarIsomorphism>& isos);

struct CovarianceReport {
    bool holds = false;
    double deviation = 0.0;
};

/// B_{A'} o phi against (phi (x) phi) o B_A as maps.
CovarianceReport check_broadcast_covariance(const StarIsomorphism& phi, double tol = kDefaultTol);

struct BloomCovarianceReport {
    bool holds = false;
    /// True when psi o E != E' o phi beyond tol; the conclusion then says
    /// nothing about the theorem.
    bool vacuous = false;
    double hypothesis_deviation = 0.0;
    double deviation = 0.0;
};

/// (phi (x) psi) o bloom(E) against bloom(E') o phi, given psi o E = E' o phi.
BloomCovarianceReport check_bloom_covariance(const LinearOperatorMap& e, const LinearOperatorMap& e_prime,
                                             const StarIsomorphism& phi, const StarIsomorphism& psi,
                                             double tol = kDefaultTol);

struct ChainCovarianceReport {
    bool holds = false;
    /// Transformed state over time against the state over time of the
    /// transformed data.
    double state_deviation = 0.0;
    /// (phi_0 (x) ... (x) phi_n) o bloom(chain) against bloom(chain') o phi_0.
    double map_deviation = 0.0;
    /// Intermediate identities along the recursive form; negative when not run.
    double ladder_deviation = -1.0;
};

ChainCovarianceReport check_chain_covariance(const Chain& chain, const std::vector<StarIsomorphism>& isos,
                                             const AlgebraElement& rho, double tol = kDefaultTol,
                                             bool check_ladder = false);

}  // namespace qsot
