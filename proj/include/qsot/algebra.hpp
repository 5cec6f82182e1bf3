// algebra.hpp: finite-dimensional C*-algebras as direct sums of matrix blocks
//
// Conventions used by every module:
//   * An algebra is an ordered list of block dimensions [n_1, ..., n_k].
//   * Hilbert–Schmidt coordinates enumerate normalized matrix units in
//     (block, row, column) order, row-major inside each block. Matrix units
//     are orthonormal for <A,B> = tr(A^dag B), so coordinates are plain entries.
//   * Tensor products order their blocks lexicographically in the factor block
//     indices and store each block in Kronecker order (left factor major).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qsot {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

class AlgebraShape {
public:
    explicit AlgebraShape(std::vector<std::size_t> blocks);

    static AlgebraShape matrix_algebra(std::size_t d) { return AlgebraShape({d}); }
    static AlgebraShape classical(std::size_t points);

    const std::vector<std::size_t>& blocks() const { return blocks_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t block(std::size_t b) const { return blocks_.at(b); }

    /// Linear dimension, sum of n_i^2.
    std::size_t total_dim() const { return total_dim_; }
    /// Dimension of the Hilbert space the blocks act on, sum of n_i.
    std::size_t hilbert_dim() const { return hilbert_dim_; }

    /// First HS coordinate of block b.
    std::size_t offset(std::size_t b) const { return offsets_[b]; }
    std::size_t coord(std::size_t b, std::size_t row, std::size_t col) const {
        return offsets_[b] + row * blocks_[b] + col;
    }

    bool is_classical() const;
    bool is_matrix_algebra() const { return blocks_.size() == 1; }

    std::string to_string() const;

    friend bool operator==(const AlgebraShape& a, const AlgebraShape& b) {
        return a.blocks_ == b.blocks_;
    }

private:
    std::vector<std::size_t> blocks_;
    std::vector<std::size_t> offsets_;
    std::size_t total_dim_ = 0;
    std::size_t hilbert_dim_ = 0;
};

/// Blocks [n_i * m_j] in lexicographic (i, j) order.
AlgebraShape tensor_shape(const AlgebraShape& a, const AlgebraShape& b);

/// Left fold of tensor_shape over a non-empty factor list.
AlgebraShape flatten(std::span<const AlgebraShape> factors);

/// Mixed-radix helper for block-index tuples of a factor list.
class BlockIndexer {
public:
    explicit BlockIndexer(std::span<const AlgebraShape> factors);

    std::size_t size() const { return count_; }
    std::size_t arity() const { return radices_.size(); }
    std::size_t flat(std::span<const std::size_t> tuple) const;
    std::vector<std::size_t> tuple(std::size_t flat) const;

private:
    std::vector<std::size_t> radices_;
    std::size_t count_ = 1;
};

class AlgebraElement {
public:
    AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks);

    static AlgebraElement zero(const AlgebraShape& shape);
    static AlgebraElement identity(const AlgebraShape& shape);
    static AlgebraElement from_coords(const AlgebraShape& shape, const Vector& coords);
    /// Diagonal element of a classical algebra, e.g. a probability vector.
    static AlgebraElement diagonal(const AlgebraShape& shape, std::span<const double> values);
    /// Single block-diagonal matrix acting on the Hilbert space; off-block
    /// entries are discarded.
    static AlgebraElement from_block_diagonal(const AlgebraShape& shape, const Matrix& full);
    /// Matrix unit |row><col| in block b.
    static AlgebraElement matrix_unit(const AlgebraShape& shape, std::size_t b,
                                      std::size_t row, std::size_t col);

    const AlgebraShape& shape() const { return shape_; }
    const Matrix& block(std::size_t b) const { return blocks_.at(b); }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    Vector coords() const;
    /// Block-diagonal embedding into a hilbert_dim x hilbert_dim matrix.
    Matrix to_block_diagonal() const;

    AlgebraElement dagger() const;
    cplx trace() const;
    double max_abs() const;

    /// Largest entrywise |A - A^dag|.
    double hermiticity_deviation() const;
    bool is_self_adjoint(double tol = kDefaultTol) const;
    bool is_virtual_state(double tol = kDefaultTol) const;
    bool is_state(double tol = kDefaultTol) const;
    bool is_unitary(double tol = kDefaultTol) const;

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(cplx s, const AlgebraElement& a);

private:
    AlgebraShape shape_;
    std::vector<Matrix> blocks_;
};

/// Blockwise matrix product.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

/// tr(a^dag b); conjugate-linear in a.
cplx hs_inner(const AlgebraElement& a, const AlgebraElement& b);

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

/// Eigenvalues of all blocks merged in ascending order. Throws
/// std::invalid_argument unless the element is self-adjoint within tol.
std::vector<double> spectrum(const AlgebraElement& a, double tol = kDefaultTol);

/// Element of A_0 (x) ... (x) A_n that remembers its factor list. The data is
/// held flattened over flatten(factors).
class FactoredElement {
public:
    FactoredElement(std::vector<AlgebraShape> factors, AlgebraElement flat);

    /// Single-factor wrapper.
    explicit FactoredElement(AlgebraElement single);

    const std::vector<AlgebraShape>& factors() const { return factors_; }
    std::size_t arity() const { return factors_.size(); }
    const AlgebraElement& flat() const { return flat_; }

    /// Block addressed by a block-index tuple (b_0, ..., b_n).
    const Matrix& block(std::span<const std::size_t> tuple) const;

private:
    std::vector<AlgebraShape> factors_;
    AlgebraElement flat_;
};

/// Blockwise Kronecker product; factor lists are concatenated.
FactoredElement tensor(const FactoredElement& x, const FactoredElement& y);
FactoredElement tensor(const AlgebraElement& x, const AlgebraElement& y);

/// Trace out every factor not listed in keep. The result's factors follow
/// ascending index order.
FactoredElement partial_trace(const FactoredElement& x, std::vector<std::size_t> keep);

double max_abs_diff(const FactoredElement& a, const FactoredElement& b);

/// Positive unit-trace element: Gram matrices per block with random weights.
AlgebraElement random_state(const AlgebraShape& shape, std::uint64_t seed);
AlgebraElement random_hermitian(const AlgebraShape& shape, std::uint64_t seed);

}  // namespace qsot
