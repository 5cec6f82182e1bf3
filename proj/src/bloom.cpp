#include "qsot/bloom.hpp"

#include "qsot/kernels.hpp"

#include <iostream>
#include <stdexcept>

namespace qsot {

FactoredElement bloom_apply(const LinearOperatorMap& e, const FactoredElement& x) {
    if (!(x.flat().shape() == e.source()))
        throw std::invalid_argument("bloom_apply: element shape " + x.flat().shape().to_string() +
                                    " does not match map source " + e.source().to_string());
    std::vector<AlgebraShape> factors = x.factors();
    factors.insert(factors.end(), e.target_factors().begin(), e.target_factors().end());
    return {std::move(factors), kernels::parallel::bloom(e.matrix(), e.target(), x.flat())};
}

namespace {

// Materialize x -> column(x) over the basis of `source`.
template <class F>
LinearOperatorMap by_columns(const std::vector<AlgebraShape>& source, F&& column) {
    const AlgebraShape s = flatten(source);
    std::vector<AlgebraShape> target;
    Matrix m;
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t i = 0; i < s.block(b); ++i)
            for (std::size_t j = 0; j < s.block(b); ++j) {
                const FactoredElement y = column(AlgebraElement::matrix_unit(s, b, i, j));
                if (m.size() == 0) {
                    target = y.factors();
                    m = Matrix::Zero(static_cast<Eigen::Index>(y.flat().shape().total_dim()),
                                     static_cast<Eigen::Index>(s.total_dim()));
                }
                m.col(static_cast<Eigen::Index>(s.coord(b, i, j))) = y.flat().coords();
            }
    return {source, std::move(target), std::move(m)};
}

}  // namespace

LinearOperatorMap bloom1(const LinearOperatorMap& e, double tol) {
    const auto tp = is_tp(e, tol);
    if (!tp.holds)
        std::clog << "warning: bloom of a map that is not trace-preserving (deviation " << tp.deviation << ")\n";
    return by_columns({e.source()}, [&](const AlgebraElement& x) { return bloom_apply(e, FactoredElement(x)); });
}

LinearOperatorMap bloom_chain_recursive(const Chain& chain) {
    const std::size_t n = chain.length();
    LinearOperatorMap acc = bloom1(chain[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;) acc = bloom1(compose(acc, chain[k]));
    return acc;
}

FactoredElement bloom_chain_closed_apply(const Chain& chain, const AlgebraElement& x) {
    if (!(x.shape() == chain.algebra(0)))
        throw std::invalid_argument("bloom_chain_closed_apply: element shape " + x.shape().to_string() +
                                    " does not match A_0 = " + chain.algebra(0).to_string());
    FactoredElement y = bloom_apply(chain[0], FactoredElement(x));
    for (std::size_t k = 1; k < chain.length(); ++k) {
        const LinearOperatorMap step = compose(chain[k], trace_map(y.factors()));
        y = bloom_apply(step, y);
    }
    return y;
}

LinearOperatorMap bloom_chain_closed(const Chain& chain) {
    return by_columns({chain.algebra(0)},
                      [&](const AlgebraElement& x) { return bloom_chain_closed_apply(chain, x); });
}

// ---------------------------------------------------------------------------

std::string ParenTree::to_string() const {
    if (is_leaf()) return std::to_string(lo);
    return "(" + left->to_string() + " " + right->to_string() + ")";
}

TreePtr make_leaf(std::size_t i) {
    auto t = std::make_shared<ParenTree>();
    t->lo = t->hi = i;
    return t;
}

TreePtr make_node(TreePtr left, TreePtr right) {
    if (!left || !right || left->hi + 1 != right->lo)
        throw std::invalid_argument("make_node: subtrees must cover adjacent leaf ranges");
    auto t = std::make_shared<ParenTree>();
    t->lo = left->lo;
    t->hi = right->hi;
    t->left = std::move(left);
    t->right = std::move(right);
    return t;
}

namespace {

std::vector<TreePtr> trees_over(std::size_t lo, std::size_t hi) {
    if (lo == hi) return {make_leaf(lo)};
    std::vector<TreePtr> out;
    for (std::size_t k = lo; k < hi; ++k)
        for (const auto& l : trees_over(lo, k))
            for (const auto& r : trees_over(k + 1, hi)) out.push_back(make_node(l, r));
    return out;
}

}  // namespace

std::vector<TreePtr> all_trees(std::size_t n) { return trees_over(0, n); }

TreePtr left_comb(std::size_t n) {
    TreePtr t = make_leaf(0);
    for (std::size_t i = 1; i <= n; ++i) t = make_node(t, make_leaf(i));
    return t;
}

TreePtr right_comb(std::size_t n) {
    TreePtr t = make_leaf(n);
    for (std::size_t i = n; i-- > 0;) t = make_node(make_leaf(i), t);
    return t;
}

std::size_t catalan(std::size_t n) {
    std::size_t c = 1;
    for (std::size_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

namespace {

FactoredElement tree_apply(const Chain& chain, const ParenTree& t, const AlgebraElement& x);

// Bloom of the sub-chain over t's leaves as a map A_lo -> A_lo (x) ... (x) A_hi.
LinearOperatorMap tree_map(const Chain& chain, const ParenTree& t) {
    if (t.is_leaf()) return LinearOperatorMap::identity(chain.algebra(t.lo));
    return by_columns({chain.algebra(t.lo)}, [&](const AlgebraElement& x) { return tree_apply(chain, t, x); });
}

FactoredElement tree_apply(const Chain& chain, const ParenTree& t, const AlgebraElement& x) {
    if (t.is_leaf()) return FactoredElement(x);
    const std::size_t k = t.split();
    const FactoredElement y = tree_apply(chain, *t.left, x);
    LinearOperatorMap step = chain[k];
    if (y.arity() > 1) step = compose(step, trace_map(y.factors()));
    if (!t.right->is_leaf()) step = compose(tree_map(chain, *t.right), step);
    return bloom_apply(step, y);
}

}  // namespace

FactoredElement bloom_tree_apply(const Chain& chain, const ParenTree& tree, const AlgebraElement& x) {
    if (tree.lo != 0 || tree.hi != chain.length())
        throw std::invalid_argument("bloom_tree: tree has " + std::to_string(tree.leaves()) + " leaves, chain needs " +
                                    std::to_string(chain.length() + 1));
    if (!(x.shape() == chain.algebra(0)))
        throw std::invalid_argument("bloom_tree: element does not live on A_0");
    return tree_apply(chain, tree, x);
}

LinearOperatorMap bloom_tree(const Chain& chain, const ParenTree& tree) {
    return by_columns({chain.algebra(0)},
                      [&](const AlgebraElement& x) { return bloom_tree_apply(chain, tree, x); });
}

}  // namespace qsot
