// bloom.hpp: blooms of maps and of chains
//
// Every bloom variant returns a map into the flat factor list
// (A_0, ..., A_n), so the forms can be compared entrywise.

#pragma once

#include "qsot/chanmap.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qsot {

/// (id (x) E)(B(x)) for x over flatten(x.factors()) == E.source(). The result
/// carries x's factors followed by E's target factors.
FactoredElement bloom_apply(const LinearOperatorMap& e, const FactoredElement& x);

/// (id_A (x) E) o B_A as a map A -> A (x) B. Warns on std::clog when E is not
/// trace-preserving.
LinearOperatorMap bloom1(const LinearOperatorMap& e, double tol = kDefaultTol);

/// Recursive form: bloom(E_1..E_n) = bloom1(bloom(E_2..E_n) o E_1).
LinearOperatorMap bloom_chain_recursive(const Chain& chain);

/// Closed form evaluated on one element of A_0:
/// bloom(E_n o tr) o ... o bloom(E_2 o tr) o bloom(E_1).
FactoredElement bloom_chain_closed_apply(const Chain& chain, const AlgebraElement& x);

/// Closed form as a map, materialized one column per basis element of A_0.
LinearOperatorMap bloom_chain_closed(const Chain& chain);

/// Full binary tree over leaves lo..hi (the algebras A_lo..A_hi).
struct ParenTree {
    std::size_t lo = 0, hi = 0;
    std::shared_ptr<const ParenTree> left, right;

    bool is_leaf() const { return !left; }
    std::size_t leaves() const { return hi - lo + 1; }
    /// Last leaf of the left subtree.
    std::size_t split() const { return left->hi; }
    std::string to_string() const;
};

using TreePtr = std::shared_ptr<const ParenTree>;

TreePtr make_leaf(std::size_t i);
TreePtr make_node(TreePtr left, TreePtr right);

/// All full binary trees over leaves 0..n; there are Catalan(n) of them.
std::vector<TreePtr> all_trees(std::size_t n);
TreePtr left_comb(std::size_t n);
TreePtr right_comb(std::size_t n);

std::size_t catalan(std::size_t n);

/// Bloom of a chain following a parenthesization. A node splitting into
/// leaves L = lo..k and R = k+1..hi evaluates
///   bloom1(F_R o E_{k+1} o tr_{L -> A_k}) o T_L,
/// where F_R is the bloom of the R sub-chain (identity for a single leaf) and
/// T_L the bloom of the L sub-tree. The right comb is the recursive form, the
/// left comb the closed form.
FactoredElement bloom_tree_apply(const Chain& chain, const ParenTree& tree, const AlgebraElement& x);
LinearOperatorMap bloom_tree(const Chain& chain, const ParenTree& tree);

}  // namespace qsot
