#include "qsot/broadcast.hpp"

#include "qsot/kernels.hpp"
#include "qsot/random.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <stdexcept>

namespace qsot {

namespace {

struct Unit {
    std::size_t block, row, col;
};

std::vector<Unit> units(const AlgebraShape& s) {
    std::vector<Unit> out;
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t r = 0; r < s.block(b); ++r)
            for (std::size_t c = 0; c < s.block(b); ++c) out.push_back({b, r, c});
    return out;
}

LinearOperatorMap multiplication(const AlgebraShape& s, bool reversed) {
    const std::vector<AlgebraShape> pair{s, s};
    const auto perm = kernels::kron_to_flat(pair);
    const auto u = units(s);
    const std::size_t d = s.total_dim();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d * d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const Unit& x = reversed ? u[b] : u[a];
            const Unit& y = reversed ? u[a] : u[b];
            if (x.block != y.block || x.col != y.row) continue;
            m(static_cast<Eigen::Index>(s.coord(x.block, x.row, y.col)),
              static_cast<Eigen::Index>(perm[a * d + b])) = 1.0;
        }
    return {pair, {s}, std::move(m)};
}

}  // namespace

LinearOperatorMap mu(const AlgebraShape& shape) { return multiplication(shape, false); }
LinearOperatorMap mu_tilde(const AlgebraShape& shape) { return multiplication(shape, true); }

FactoredElement swap_element(const AlgebraShape& shape) {
    if (!shape.is_matrix_algebra())
        throw std::invalid_argument("swap_element: defined on single-block algebras only, got " +
                                    shape.to_string());
    const std::size_t d = shape.block(0);
    const auto dd = static_cast<Eigen::Index>(d * d);
    Matrix s = Matrix::Zero(dd, dd);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            s(static_cast<Eigen::Index>(i * d + j), static_cast<Eigen::Index>(j * d + i)) = 1.0;
    return {{shape, shape}, AlgebraElement(tensor_shape(shape, shape), {s})};
}

LinearOperatorMap broadcast_map(const AlgebraShape& shape) {
    const auto a = hs_adjoint(mu(shape));
    const auto b = hs_adjoint(mu_tilde(shape));
    return {a.source_factors(), a.target_factors(), 0.5 * (a.matrix() + b.matrix())};
}

FactoredElement broadcast(const AlgebraElement& a) {
    const AlgebraShape& s = a.shape();
    const auto d = static_cast<Eigen::Index>(s.total_dim());
    return {{s, s}, kernels::parallel::bloom(Matrix::Identity(d, d), s, a)};
}

FactoredElement broadcast_anticommutator(const AlgebraElement& a) {
    const FactoredElement sw = swap_element(a.shape());
    const std::size_t d = a.shape().block(0);
    const Matrix left = kroneckerProduct(a.block(0), Matrix::Identity(static_cast<Eigen::Index>(d),
                                                                      static_cast<Eigen::Index>(d)));
    const Matrix& s = sw.flat().block(0);
    return {sw.factors(), AlgebraElement(sw.flat().shape(), {0.5 * (left * s + s * left)})};
}

LinearOperatorMap classical_broadcast(const AlgebraShape& shape) {
    if (!shape.is_classical())
        throw std::invalid_argument("classical_broadcast: shape " + shape.to_string() + " is not classical");
    const std::size_t k = shape.num_blocks();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(k * k), static_cast<Eigen::Index>(k));
    for (std::size_t x = 0; x < k; ++x) m(static_cast<Eigen::Index>(x * k + x), static_cast<Eigen::Index>(x)) = 1.0;
    return {{shape}, {shape, shape}, std::move(m)};
}

BroadcastAxiomsReport check_broadcast_axioms(std::size_t d, std::size_t trials, std::uint64_t seed, double tol) {
    const AlgebraShape s = AlgebraShape::matrix_algebra(d);
    const Matrix sw = swap_element(s).flat().block(0);
    Rng rng(seed);
    BroadcastAxiomsReport rep;
    rep.trials = trials;

    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix u = haar_unitary(d, rng);
        const Matrix g = ginibre(d, d, rng);
        const Matrix lhs = broadcast(AlgebraElement(s, {u * g * u.adjoint()})).flat().block(0);
        const Matrix uu = kroneckerProduct(u, u);
        const Matrix ba = broadcast(AlgebraElement(s, {g})).flat().block(0);
        rep.covariance_deviation =
            std::max(rep.covariance_deviation, (lhs - uu * ba * uu.adjoint()).cwiseAbs().maxCoeff());
        rep.permutation_deviation = std::max(rep.permutation_deviation, (sw * ba * sw - ba).cwiseAbs().maxCoeff());
    }

    // (D (x) D) o B o D against the classical broadcast, on the diagonal
    // subalgebra: column |x><x| of the composite must be |x><x| (x) |x><x|.
    const auto dec = decoherence_map(s);
    const auto composite = compose(tensor(dec, dec), compose(broadcast_map(s), dec));
    const auto cl = classical_broadcast(AlgebraShape::classical(d));
    const std::vector<AlgebraShape> pair{s, s};
    const auto perm = kernels::kron_to_flat(pair);
    const std::size_t td = s.total_dim();
    for (std::size_t x = 0; x < d; ++x) {
        Vector expected = Vector::Zero(static_cast<Eigen::Index>(td * td));
        for (std::size_t y = 0; y < d; ++y)
            for (std::size_t z = 0; z < d; ++z)
                expected(static_cast<Eigen::Index>(perm[s.coord(0, y, y) * td + s.coord(0, z, z)])) =
                    cl.matrix()(static_cast<Eigen::Index>(y * d + z), static_cast<Eigen::Index>(x));
        const Vector got = composite.matrix().col(static_cast<Eigen::Index>(s.coord(0, x, x)));
        rep.classical_deviation = std::max(rep.classical_deviation, (got - expected).cwiseAbs().maxCoeff());
    }
    rep.holds = rep.covariance_deviation <= tol && rep.permutation_deviation <= tol &&
                rep.classical_deviation <= tol;
    return rep;
}

}  // namespace qsot
