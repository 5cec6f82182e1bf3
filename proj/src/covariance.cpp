#include "qsot/covariance.hpp"

#include "qsot/broadcast.hpp"
#include "qsot/random.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsot {

StarIsomorphism::StarIsomorphism(AlgebraShape source, AlgebraShape target, std::vector<std::size_t> perm,
                                 std::vector<Matrix> unitaries, double tol)
    : source_(std::move(source)), target_(std::move(target)), perm_(std::move(perm)), unitaries_(std::move(unitaries)) {
    const std::size_t k = target_.num_blocks();
    if (source_.num_blocks() != k || perm_.size() != k || unitaries_.size() != k)
        throw std::invalid_argument("StarIsomorphism: block counts of source, target, perm and unitaries differ");
    std::vector<bool> seen(k, false);
    for (std::size_t t = 0; t < k; ++t) {
        if (perm_[t] >= k || seen[perm_[t]])
            throw std::invalid_argument("StarIsomorphism: block map is not a permutation");
        seen[perm_[t]] = true;
        if (source_.block(perm_[t]) != target_.block(t))
            throw std::invalid_argument("StarIsomorphism: target block " + std::to_string(t) + " has size " +
                                        std::to_string(target_.block(t)) + " but source block " +
                                        std::to_string(perm_[t]) + " has size " +
                                        std::to_string(source_.block(perm_[t])));
        const Matrix& u = unitaries_[t];
        const auto n = static_cast<Eigen::Index>(target_.block(t));
        if (u.rows() != n || u.cols() != n)
            throw std::invalid_argument("StarIsomorphism: unitary " + std::to_string(t) + " has the wrong size");
        if ((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("StarIsomorphism: block " + std::to_string(t) + " is not unitary");
    }
}

StarIsomorphism StarIsomorphism::identity(const AlgebraShape& shape) {
    std::vector<std::size_t> perm(shape.num_blocks());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Matrix> us;
    for (std::size_t n : shape.blocks())
        us.push_back(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    return {shape, shape, std::move(perm), std::move(us)};
}

StarIsomorphism StarIsomorphism::conjugation(const AlgebraElement& u, double tol) {
    std::vector<std::size_t> perm(u.shape().num_blocks());
    std::iota(perm.begin(), perm.end(), 0);
    return {u.shape(), u.shape(), std::move(perm), u.blocks(), tol};
}

StarIsomorphism StarIsomorphism::block_permutation(const AlgebraShape& shape, std::vector<std::size_t> perm) {
    std::vector<Matrix> us;
    for (std::size_t n : shape.blocks())
        us.push_back(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    return {shape, shape, std::move(perm), std::move(us)};
}

bool StarIsomorphism::permutes_blocks() const {
    for (std::size_t t = 0; t < perm_.size(); ++t)
        if (perm_[t] != t) return true;
    return false;
}

AlgebraElement apply_iso(const StarIsomorphism& phi, const AlgebraElement& a) {
    if (!(a.shape() == phi.source()))
        throw std::invalid_argument("apply_iso: element shape " + a.shape().to_string() + " does not match " +
                                    phi.source().to_string());
    std::vector<Matrix> out;
    for (std::size_t t = 0; t < phi.perm().size(); ++t) {
        const Matrix& u = phi.unitaries()[t];
        out.push_back(u * a.block(phi.perm()[t]) * u.adjoint());
    }
    return {phi.target(), std::move(out)};
}

LinearOperatorMap as_map(const StarIsomorphism& phi) {
    const AlgebraShape& s = phi.source();
    Matrix m(static_cast<Eigen::Index>(phi.target().total_dim()), static_cast<Eigen::Index>(s.total_dim()));
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t i = 0; i < s.block(b); ++i)
            for (std::size_t j = 0; j < s.block(b); ++j)
                m.col(static_cast<Eigen::Index>(s.coord(b, i, j))) =
                    apply_iso(phi, AlgebraElement::matrix_unit(s, b, i, j)).coords();
    return {s, phi.target(), std::move(m)};
}

StarIsomorphism inverse(const StarIsomorphism& phi) {
    const std::size_t k = phi.perm().size();
    std::vector<std::size_t> perm(k);
    std::vector<Matrix> us(k);
    for (std::size_t t = 0; t < k; ++t) {
        perm[phi.perm()[t]] = t;
        us[phi.perm()[t]] = phi.unitaries()[t].adjoint();
    }
    return {phi.target(), phi.source(), std::move(perm), std::move(us)};
}

StarIsomorphism compose(const StarIsomorphism& f, const StarIsomorphism& g) {
    if (!(f.source() == g.target())) throw std::invalid_argument("compose: isomorphisms are not composable");
    const std::size_t k = f.perm().size();
    std::vector<std::size_t> perm(k);
    std::vector<Matrix> us(k);
    for (std::size_t t = 0; t < k; ++t) {
        perm[t] = g.perm()[f.perm()[t]];
        us[t] = f.unitaries()[t] * g.unitaries()[f.perm()[t]];
    }
    return {g.source(), f.target(), std::move(perm), std::move(us)};
}

StarIsomorphism tensor_iso(const std::vector<StarIsomorphism>& isos) {
    if (isos.empty()) throw std::invalid_argument("tensor_iso: empty list");
    std::vector<AlgebraShape> src, tgt;
    for (const auto& p : isos) {
        src.push_back(p.source());
        tgt.push_back(p.target());
    }
    const BlockIndexer src_index(src), tgt_index(tgt);
    std::vector<std::size_t> perm(tgt_index.size());
    std::vector<Matrix> us(tgt_index.size());
    for (std::size_t t = 0; t < tgt_index.size(); ++t) {
        const auto tuple = tgt_index.tuple(t);
        std::vector<std::size_t> from(tuple.size());
        Matrix u = Matrix::Identity(1, 1);
        for (std::size_t j = 0; j < tuple.size(); ++j) {
            from[j] = isos[j].perm()[tuple[j]];
            u = Eigen::kroneckerProduct(u, isos[j].unitaries()[tuple[j]]).eval();
        }
        perm[t] = src_index.flat(from);
        us[t] = std::move(u);
    }
    return {flatten(src), flatten(tgt), std::move(perm), std::move(us)};
}

LinearOperatorMap tensor_iso_map(const std::vector<StarIsomorphism>& isos) {
    std::vector<AlgebraShape> src, tgt;
    for (const auto& p : isos) {
        src.push_back(p.source());
        tgt.push_back(p.target());
    }
    const auto m = as_map(tensor_iso(isos));
    return {std::move(src), std::move(tgt), m.matrix()};
}

FactoredElement apply_iso(const std::vector<StarIsomorphism>& isos, const FactoredElement& x) {
    if (isos.size() != x.arity())
        throw std::invalid_argument("apply_iso: " + std::to_string(isos.size()) + " isomorphisms for " +
                                    std::to_string(x.arity()) + " factors");
    std::vector<AlgebraShape> tgt;
    for (std::size_t j = 0; j < isos.size(); ++j) {
        if (!(isos[j].source() == x.factors()[j]))
            throw std::invalid_argument("apply_iso: isomorphism " + std::to_string(j) + " does not match its factor");
        tgt.push_back(isos[j].target());
    }
    return {std::move(tgt), apply_iso(tensor_iso(isos), x.flat())};
}

StarIsomorphism random_iso(const AlgebraShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t k = shape.num_blocks();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    // Shuffle within each class of equal-size blocks.
    std::vector<std::size_t> sizes = shape.blocks();
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    for (std::size_t n : sizes) {
        std::vector<std::size_t> members;
        for (std::size_t b = 0; b < k; ++b)
            if (shape.block(b) == n) members.push_back(b);
        std::vector<std::size_t> shuffled = members;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i) perm[members[i]] = shuffled[i];
    }
    std::vector<Matrix> us;
    for (std::size_t t = 0; t < k; ++t) us.push_back(haar_unitary(shape.block(t), rng));
    return {shape, shape, std::move(perm), std::move(us)};
}

Chain conjugate_chain(const Chain& chain, const std::vector<StarIsomorphism>& isos) {
    if (isos.size() != chain.length() + 1)
        throw std::invalid_argument("conjugate_chain: need " + std::to_string(chain.length() + 1) +
                                    " isomorphisms, got " + std::to_string(isos.size()));
    for (std::size_t i = 0; i < isos.size(); ++i)
        if (!(isos[i].source() == chain.algebra(i)))
            throw std::invalid_argument("conjugate_chain: isomorphism " + std::to_string(i) + " starts at " +
                                        isos[i].source().to_string() + ", algebra is " +
                                        chain.algebra(i).to_string());
    std::vector<LinearOperatorMap> maps;
    for (std::size_t i = 1; i < isos.size(); ++i)
        maps.push_back(compose(as_map(isos[i]), compose(chain[i - 1], as_map(inverse(isos[i - 1])))));
    return Chain(std::move(maps));
}

CovarianceReport check_broadcast_covariance(const StarIsomorphism& phi, double tol) {
    const auto f = as_map(phi);
    const auto lhs = compose(broadcast_map(phi.target()), f);
    const auto rhs = compose(tensor(f, f), broadcast_map(phi.source()));
    CovarianceReport rep;
    rep.deviation = (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff();
    rep.holds = rep.deviation <= tol;
    return rep;
}

BloomCovarianceReport check_bloom_covariance(const LinearOperatorMap& e, const LinearOperatorMap& e_prime,
                                             const StarIsomorphism& phi, const StarIsomorphism& psi, double tol) {
    const auto f = as_map(phi);
    const auto g = as_map(psi);
    BloomCovarianceReport rep;
    rep.hypothesis_deviation = max_abs_diff(compose(g, e), compose(e_prime, f));
    rep.vacuous = rep.hypothesis_deviation > tol;
    const auto lhs = compose(tensor(f, g), bloom1(e));
    const auto rhs = compose(bloom1(e_prime), f);
    rep.deviation = (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff();
    rep.holds = !rep.vacuous && rep.deviation <= tol;
    return rep;
}

namespace {

double ladder_deviation(const Chain& chain, const Chain& primed, const std::vector<StarIsomorphism>& isos) {
    const std::size_t n = chain.length();
    double worst = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        // (phi_k (x) ... (x) phi_n) o F o E_k  against  F' o E'_k o phi_{k-1},
        // F the recursive bloom of E_{k+1}..E_n (identity when k == n).
        LinearOperatorMap lhs = chain[k - 1];
        LinearOperatorMap rhs = compose(primed[k - 1], as_map(isos[k - 1]));
        if (k < n) {
            lhs = compose(bloom_chain_recursive(chain.slice(k, n)), lhs);
            rhs = compose(bloom_chain_recursive(primed.slice(k, n)), rhs);
        }
        const std::vector<StarIsomorphism> tail(isos.begin() + static_cast<std::ptrdiff_t>(k), isos.end());
        lhs = compose(tensor_iso_map(tail), lhs);
        worst = std::max(worst, (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

ChainCovarianceReport check_chain_covariance(const Chain& chain, const std::vector<StarIsomorphism>& isos,
                                             const AlgebraElement& rho, double tol, bool check_ladder) {
    const Chain primed = conjugate_chain(chain, isos);
    ChainCovarianceReport rep;

    const auto lhs = apply_iso(isos, star(chain, rho, tol).value);
    const auto rhs = star(primed, apply_iso(isos[0], rho), tol).value;
    rep.state_deviation = max_abs_diff(lhs, rhs);

    const AlgebraShape& a0 = chain.algebra(0);
    for (std::size_t b = 0; b < a0.num_blocks(); ++b)
        for (std::size_t i = 0; i < a0.block(b); ++i)
            for (std::size_t j = 0; j < a0.block(b); ++j) {
                const auto e = AlgebraElement::matrix_unit(a0, b, i, j);
                const auto l = apply_iso(isos, bloom_chain_closed_apply(chain, e));
                const auto r = bloom_chain_closed_apply(primed, apply_iso(isos[0], e));
                rep.map_deviation = std::max(rep.map_deviation, max_abs_diff(l, r));
            }

    if (check_ladder) rep.ladder_deviation = ladder_deviation(chain, primed, isos);
    rep.holds = rep.state_deviation <= tol && rep.map_deviation <= tol &&
                (!check_ladder || rep.ladder_deviation <= tol);
    return rep;
}

}  // namespace qsot
