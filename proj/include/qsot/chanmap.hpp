// chanmap.hpp: linear maps between algebras in Hilbert–Schmidt coordinates

#pragma once

#include "qsot/algebra.hpp"

#include <cstdint>
#include <vector>

namespace qsot {

/// Linear map stored as its matrix in the orthonormal matrix-unit bases of
/// source and target (target.total_dim() x source.total_dim()). Source and
/// target carry factor lists so maps into tensor products keep their
/// factorization; the matrix is always indexed by the flattened coordinates.
class LinearOperatorMap {
public:
    LinearOperatorMap(std::vector<AlgebraShape> source, std::vector<AlgebraShape> target, Matrix matrix);
    LinearOperatorMap(const AlgebraShape& source, const AlgebraShape& target, Matrix matrix);

    static LinearOperatorMap identity(const AlgebraShape& shape);
    static LinearOperatorMap identity(std::vector<AlgebraShape> factors);

    const std::vector<AlgebraShape>& source_factors() const { return source_factors_; }
    const std::vector<AlgebraShape>& target_factors() const { return target_factors_; }
    const AlgebraShape& source() const { return source_; }
    const AlgebraShape& target() const { return target_; }
    const Matrix& matrix() const { return matrix_; }

    /// Same matrix, regrouped factor lists (flattened shapes must agree).
    LinearOperatorMap with_factors(std::vector<AlgebraShape> source, std::vector<AlgebraShape> target) const;

private:
    std::vector<AlgebraShape> source_factors_, target_factors_;
    AlgebraShape source_, target_;
    Matrix matrix_;
};

AlgebraElement apply(const LinearOperatorMap& m, const AlgebraElement& a);
FactoredElement apply(const LinearOperatorMap& m, const FactoredElement& a);

/// f o g.
LinearOperatorMap compose(const LinearOperatorMap& f, const LinearOperatorMap& g);

/// f (x) g, acting factorwise; factor lists are concatenated.
LinearOperatorMap tensor(const LinearOperatorMap& f, const LinearOperatorMap& g);

/// Apply m to factor k of x, leaving the other factors alone.
FactoredElement apply_on_factor(const LinearOperatorMap& m, const FactoredElement& x, std::size_t k);

/// The map E^* with tr(E(A)^dag B) = tr(A^dag E^*(B)); conjugate transpose in
/// HS coordinates.
LinearOperatorMap hs_adjoint(const LinearOperatorMap& m);

/// A -> U A U^dag. Throws unless U is unitary within tol.
LinearOperatorMap ad_unitary(const AlgebraElement& u, double tol = kDefaultTol);

/// |i><j| -> delta_ij |i><i| on a single-block algebra.
LinearOperatorMap decoherence_map(const AlgebraShape& shape);

/// Classical channel C^X -> C^Y from a |Y| x |X| column-stochastic matrix.
LinearOperatorMap classical_channel(const Eigen::MatrixXd& stochastic, double tol = kDefaultTol);

/// A_0 (x) ... (x) A_n -> A_n, tracing out all but the right-most factor.
LinearOperatorMap trace_map(const std::vector<AlgebraShape>& product);

/// Partial trace onto the listed factors as a dense map.
LinearOperatorMap partial_trace_map(const std::vector<AlgebraShape>& product, std::vector<std::size_t> keep);

/// X -> pinch(sum_m K_m X K_m^dag) with X block-diagonally embedded.
/// Each K_m is target.hilbert_dim() x source.hilbert_dim().
LinearOperatorMap from_kraus(const AlgebraShape& source, const AlgebraShape& target,
                             const std::vector<Matrix>& kraus);

struct PredicateReport {
    bool holds = false;
    double deviation = 0.0;
};

struct CptpReport {
    bool holds = false;
    bool tp = false;
    bool cp = false;
    double tp_deviation = 0.0;
    /// Smallest eigenvalue over all per-block Choi operators.
    double min_choi_eigenvalue = 0.0;
};

PredicateReport is_tp(const LinearOperatorMap& m, double tol = kDefaultTol);
PredicateReport is_hp(const LinearOperatorMap& m, double tol = kDefaultTol);
CptpReport is_cptp(const LinearOperatorMap& m, double tol = kDefaultTol);

/// Choi operators C_{b,c} = sum_ij e^b_ij (x) E(e^b_ij)|_c for every source
/// block b and target block c.
std::vector<Matrix> choi_blocks(const LinearOperatorMap& m);

/// A composable sequence of maps A_0 -> A_1 -> ... -> A_n with n >= 1.
class Chain {
public:
    explicit Chain(std::vector<LinearOperatorMap> maps);

    const std::vector<LinearOperatorMap>& maps() const { return maps_; }
    const LinearOperatorMap& operator[](std::size_t i) const { return maps_.at(i); }
    std::size_t length() const { return maps_.size(); }

    /// Algebra A_i, 0 <= i <= n.
    const AlgebraShape& algebra(std::size_t i) const;
    std::vector<AlgebraShape> algebras() const;

    /// Sub-chain of maps [first, last).
    Chain slice(std::size_t first, std::size_t last) const;

    CptpReport is_cptp(double tol = kDefaultTol) const;

private:
    std::vector<LinearOperatorMap> maps_;
};

/// Stinespring construction: random isometry into target (x) environment,
/// pinched onto target blocks, environment traced out.
LinearOperatorMap random_cptp(const AlgebraShape& source, const AlgebraShape& target, std::uint64_t seed);

/// (1 + s) E_1 - s E_2 for random CPTP E_1, E_2 and s in (0, 1): TP and HP,
/// usually not CP.
LinearOperatorMap random_hptp(const AlgebraShape& source, const AlgebraShape& target, std::uint64_t seed);

double max_abs_diff(const LinearOperatorMap& a, const LinearOperatorMap& b);

}  // namespace qsot
