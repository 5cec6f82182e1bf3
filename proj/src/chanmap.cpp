#include "qsot/chanmap.hpp"

#include "qsot/kernels.hpp"
#include "qsot/random.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace qsot {

LinearOperatorMap::LinearOperatorMap(std::vector<AlgebraShape> source, std::vector<AlgebraShape> target,
                                     Matrix matrix)
    : source_factors_(std::move(source)),
      target_factors_(std::move(target)),
      source_(flatten(source_factors_)),
      target_(flatten(target_factors_)),
      matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != target_.total_dim() ||
        static_cast<std::size_t>(matrix_.cols()) != source_.total_dim())
        throw std::invalid_argument("LinearOperatorMap: matrix is " + std::to_string(matrix_.rows()) + "x" +
                                    std::to_string(matrix_.cols()) + ", expected " +
                                    std::to_string(target_.total_dim()) + "x" +
                                    std::to_string(source_.total_dim()));
}

LinearOperatorMap::LinearOperatorMap(const AlgebraShape& source, const AlgebraShape& target, Matrix matrix)
    : LinearOperatorMap(std::vector<AlgebraShape>{source}, std::vector<AlgebraShape>{target},
                        std::move(matrix)) {}

LinearOperatorMap LinearOperatorMap::identity(const AlgebraShape& shape) {
    return identity(std::vector<AlgebraShape>{shape});
}

LinearOperatorMap LinearOperatorMap::identity(std::vector<AlgebraShape> factors) {
    const auto d = static_cast<Eigen::Index>(flatten(factors).total_dim());
    return {factors, factors, Matrix::Identity(d, d)};
}

LinearOperatorMap LinearOperatorMap::with_factors(std::vector<AlgebraShape> source,
                                                  std::vector<AlgebraShape> target) const {
    if (!(flatten(source) == source_) || !(flatten(target) == target_))
        throw std::invalid_argument("with_factors: regrouping changes the flattened shapes");
    return {std::move(source), std::move(target), matrix_};
}

AlgebraElement apply(const LinearOperatorMap& m, const AlgebraElement& a) {
    if (!(a.shape() == m.source()))
        throw std::invalid_argument("apply: element shape " + a.shape().to_string() +
                                    " does not match map source " + m.source().to_string());
    return AlgebraElement::from_coords(m.target(), m.matrix() * a.coords());
}

FactoredElement apply(const LinearOperatorMap& m, const FactoredElement& a) {
    return {m.target_factors(), apply(m, a.flat())};
}

LinearOperatorMap compose(const LinearOperatorMap& f, const LinearOperatorMap& g) {
    if (!(f.source() == g.target()))
        throw std::invalid_argument("compose: target " + g.target().to_string() + " does not match source " +
                                    f.source().to_string());
    return {g.source_factors(), f.target_factors(), f.matrix() * g.matrix()};
}

LinearOperatorMap tensor(const LinearOperatorMap& f, const LinearOperatorMap& g) {
    const std::vector<AlgebraShape> src{f.source(), g.source()};
    const std::vector<AlgebraShape> tgt{f.target(), g.target()};
    const auto ps = kernels::kron_to_flat(src);
    const auto pt = kernels::kron_to_flat(tgt);
    const Matrix& F = f.matrix();
    const Matrix& G = g.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(pt.size()), static_cast<Eigen::Index>(ps.size()));
    const auto gr = static_cast<std::size_t>(G.rows());
    const auto gc = static_cast<std::size_t>(G.cols());
    for (Eigen::Index c = 0; c < F.cols(); ++c)
        for (Eigen::Index a = 0; a < F.rows(); ++a) {
            const cplx fv = F(a, c);
            if (fv == cplx(0.0)) continue;
            for (std::size_t d = 0; d < gc; ++d)
                for (std::size_t b = 0; b < gr; ++b)
                    out(static_cast<Eigen::Index>(pt[static_cast<std::size_t>(a) * gr + b]),
                        static_cast<Eigen::Index>(ps[static_cast<std::size_t>(c) * gc + d])) =
                        fv * G(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
        }
    std::vector<AlgebraShape> sf = f.source_factors(), tf = f.target_factors();
    sf.insert(sf.end(), g.source_factors().begin(), g.source_factors().end());
    tf.insert(tf.end(), g.target_factors().begin(), g.target_factors().end());
    return {std::move(sf), std::move(tf), std::move(out)};
}

FactoredElement apply_on_factor(const LinearOperatorMap& m, const FactoredElement& x, std::size_t k) {
    if (k >= x.arity()) throw std::out_of_range("apply_on_factor: factor index out of range");
    if (!(m.source() == x.factors()[k]))
        throw std::invalid_argument("apply_on_factor: map source " + m.source().to_string() +
                                    " does not match factor " + x.factors()[k].to_string());
    const Vector y = kernels::parallel::factor_apply(x.factors(), x.flat().coords(), k, m.matrix(), m.target());
    std::vector<AlgebraShape> out(x.factors().begin(), x.factors().begin() + static_cast<std::ptrdiff_t>(k));
    out.insert(out.end(), m.target_factors().begin(), m.target_factors().end());
    out.insert(out.end(), x.factors().begin() + static_cast<std::ptrdiff_t>(k) + 1, x.factors().end());
    const AlgebraShape flat = flatten(out);
    return {std::move(out), AlgebraElement::from_coords(flat, y)};
}

LinearOperatorMap hs_adjoint(const LinearOperatorMap& m) {
    return {m.target_factors(), m.source_factors(), m.matrix().adjoint()};
}

LinearOperatorMap ad_unitary(const AlgebraElement& u, double tol) {
    if (!u.is_unitary(tol)) throw std::invalid_argument("ad_unitary: element is not unitary");
    const AlgebraShape& s = u.shape();
    const auto d = static_cast<Eigen::Index>(s.total_dim());
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t b = 0; b < s.num_blocks(); ++b) {
        const Matrix& U = u.block(b);
        const std::size_t n = s.block(b);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto col = static_cast<Eigen::Index>(s.coord(b, i, j));
                // U |i><j| U^dag = u_i u_j^dag
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        out(static_cast<Eigen::Index>(s.coord(b, r, c)), col) =
                            U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) *
                            std::conj(U(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)));
            }
    }
    return {s, s, std::move(out)};
}

LinearOperatorMap decoherence_map(const AlgebraShape& shape) {
    if (!shape.is_matrix_algebra())
        throw std::invalid_argument("decoherence_map: defined on single-block algebras only, got " +
                                    shape.to_string());
    const auto d = static_cast<Eigen::Index>(shape.total_dim());
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < shape.block(0); ++i) {
        const auto c = static_cast<Eigen::Index>(shape.coord(0, i, i));
        out(c, c) = 1.0;
    }
    return {shape, shape, std::move(out)};
}

LinearOperatorMap classical_channel(const Eigen::MatrixXd& stochastic, double tol) {
    if (stochastic.rows() == 0 || stochastic.cols() == 0)
        throw std::invalid_argument("classical_channel: empty matrix");
    for (Eigen::Index c = 0; c < stochastic.cols(); ++c) {
        for (Eigen::Index r = 0; r < stochastic.rows(); ++r) {
            const double v = stochastic(r, c);
            if (v < -tol || v > 1.0 + tol)
                throw std::invalid_argument("classical_channel: entry (" + std::to_string(r) + "," +
                                            std::to_string(c) + ") = " + std::to_string(v) + " not in [0,1]");
        }
        const double sum = stochastic.col(c).sum();
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument("classical_channel: column " + std::to_string(c) + " sums to " +
                                        std::to_string(sum));
    }
    return {AlgebraShape::classical(static_cast<std::size_t>(stochastic.cols())),
            AlgebraShape::classical(static_cast<std::size_t>(stochastic.rows())), stochastic.cast<cplx>()};
}

LinearOperatorMap partial_trace_map(const std::vector<AlgebraShape>& product, std::vector<std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace_map: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.back() >= product.size()) throw std::out_of_range("partial_trace_map: factor index out of range");
    std::vector<bool> mask(product.size(), false);
    std::vector<AlgebraShape> kept;
    for (std::size_t k : keep) {
        mask[k] = true;
        kept.push_back(product[k]);
    }
    const auto p_all = kernels::kron_to_flat(product);
    const auto p_kept = kernels::kron_to_flat(kept);
    const AlgebraShape src = flatten(product);
    const AlgebraShape tgt = flatten(kept);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(tgt.total_dim()), static_cast<Eigen::Index>(src.total_dim()));

    struct Unit {
        std::size_t row, col;
    };
    std::vector<std::vector<Unit>> units;
    for (const auto& f : product) {
        std::vector<Unit> u;
        for (std::size_t b = 0; b < f.num_blocks(); ++b)
            for (std::size_t r = 0; r < f.block(b); ++r)
                for (std::size_t c = 0; c < f.block(b); ++c) u.push_back({r, c});
        units.push_back(std::move(u));
    }
    std::vector<std::size_t> digit(product.size(), 0);
    for (std::size_t k = 0; k < p_all.size(); ++k) {
        bool diagonal = true;
        std::size_t kk = 0;
        for (std::size_t j = 0; j < product.size(); ++j) {
            if (mask[j]) {
                kk = kk * product[j].total_dim() + digit[j];
            } else if (units[j][digit[j]].row != units[j][digit[j]].col) {
                diagonal = false;
            }
        }
        if (diagonal) out(static_cast<Eigen::Index>(p_kept[kk]), static_cast<Eigen::Index>(p_all[k])) = 1.0;
        for (std::size_t j = product.size(); j-- > 0;) {
            if (++digit[j] < product[j].total_dim()) break;
            digit[j] = 0;
        }
    }
    return {product, std::move(kept), std::move(out)};
}

LinearOperatorMap trace_map(const std::vector<AlgebraShape>& product) {
    if (product.size() < 2) throw std::invalid_argument("trace_map: needs at least two factors");
    return partial_trace_map(product, {product.size() - 1});
}

LinearOperatorMap from_kraus(const AlgebraShape& source, const AlgebraShape& target,
                             const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("from_kraus: empty Kraus list");
    const auto hs = static_cast<Eigen::Index>(source.hilbert_dim());
    const auto ht = static_cast<Eigen::Index>(target.hilbert_dim());
    for (const Matrix& k : kraus)
        if (k.rows() != ht || k.cols() != hs)
            throw std::invalid_argument("from_kraus: Kraus operator must be " + std::to_string(ht) + "x" +
                                        std::to_string(hs));
    Matrix out(static_cast<Eigen::Index>(target.total_dim()), static_cast<Eigen::Index>(source.total_dim()));
    for (std::size_t b = 0; b < source.num_blocks(); ++b)
        for (std::size_t i = 0; i < source.block(b); ++i)
            for (std::size_t j = 0; j < source.block(b); ++j) {
                const Matrix e = AlgebraElement::matrix_unit(source, b, i, j).to_block_diagonal();
                Matrix y = Matrix::Zero(ht, ht);
                for (const Matrix& k : kraus) y += k * e * k.adjoint();
                out.col(static_cast<Eigen::Index>(source.coord(b, i, j))) =
                    AlgebraElement::from_block_diagonal(target, y).coords();
            }
    return {source, target, std::move(out)};
}

// ---------------------------------------------------------------------------

PredicateReport is_tp(const LinearOperatorMap& m, double tol) {
    const AlgebraShape& s = m.source();
    const AlgebraShape& t = m.target();
    Eigen::RowVectorXcd trace_row = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(t.total_dim()));
    for (std::size_t c = 0; c < t.num_blocks(); ++c)
        for (std::size_t r = 0; r < t.block(c); ++r) trace_row(static_cast<Eigen::Index>(t.coord(c, r, r))) = 1.0;
    const Eigen::RowVectorXcd traced = trace_row * m.matrix();
    double worst = 0.0;
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t i = 0; i < s.block(b); ++i)
            for (std::size_t j = 0; j < s.block(b); ++j) {
                const cplx expected = i == j ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(traced(static_cast<Eigen::Index>(s.coord(b, i, j))) - expected));
            }
    return {worst <= tol, worst};
}

PredicateReport is_hp(const LinearOperatorMap& m, double tol) {
    const AlgebraShape& s = m.source();
    const AlgebraShape& t = m.target();
    const Matrix& M = m.matrix();
    double worst = 0.0;
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t i = 0; i < s.block(b); ++i)
            for (std::size_t j = 0; j < s.block(b); ++j) {
                const auto k = static_cast<Eigen::Index>(s.coord(b, i, j));
                const auto kd = static_cast<Eigen::Index>(s.coord(b, j, i));
                // E(e_ji) must equal E(e_ij)^dag
                for (std::size_t c = 0; c < t.num_blocks(); ++c)
                    for (std::size_t r = 0; r < t.block(c); ++r)
                        for (std::size_t q = 0; q < t.block(c); ++q) {
                            const cplx lhs = M(static_cast<Eigen::Index>(t.coord(c, r, q)), kd);
                            const cplx rhs = std::conj(M(static_cast<Eigen::Index>(t.coord(c, q, r)), k));
                            worst = std::max(worst, std::abs(lhs - rhs));
                        }
            }
    return {worst <= tol, worst};
}

std::vector<Matrix> choi_blocks(const LinearOperatorMap& m) {
    const AlgebraShape& s = m.source();
    const AlgebraShape& t = m.target();
    std::vector<Matrix> out;
    for (std::size_t b = 0; b < s.num_blocks(); ++b) {
        const std::size_t n = s.block(b);
        for (std::size_t c = 0; c < t.num_blocks(); ++c) {
            const std::size_t k = t.block(c);
            Matrix choi(static_cast<Eigen::Index>(n * k), static_cast<Eigen::Index>(n * k));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const auto col = static_cast<Eigen::Index>(s.coord(b, i, j));
                    for (std::size_t r = 0; r < k; ++r)
                        for (std::size_t q = 0; q < k; ++q)
                            choi(static_cast<Eigen::Index>(i * k + r), static_cast<Eigen::Index>(j * k + q)) =
                                m.matrix()(static_cast<Eigen::Index>(t.coord(c, r, q)), col);
                }
            out.push_back(std::move(choi));
        }
    }
    return out;
}

CptpReport is_cptp(const LinearOperatorMap& m, double tol) {
    CptpReport rep;
    const auto tp = is_tp(m, tol);
    rep.tp = tp.holds;
    rep.tp_deviation = tp.deviation;
    double min_eig = std::numeric_limits<double>::infinity();
    double herm = 0.0;
    for (const Matrix& choi : choi_blocks(m)) {
        herm = std::max(herm, (choi - choi.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    rep.min_choi_eigenvalue = min_eig;
    rep.cp = herm <= tol && min_eig >= -tol;
    rep.holds = rep.cp && rep.tp;
    return rep;
}

// ---------------------------------------------------------------------------

Chain::Chain(std::vector<LinearOperatorMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw std::invalid_argument("Chain: an n-chain needs n >= 1 maps");
    for (std::size_t i = 0; i + 1 < maps_.size(); ++i)
        if (!(maps_[i].target() == maps_[i + 1].source()))
            throw std::invalid_argument("Chain: map " + std::to_string(i + 1) + " targets " +
                                        maps_[i].target().to_string() + " but map " + std::to_string(i + 2) +
                                        " starts at " + maps_[i + 1].source().to_string());
}

const AlgebraShape& Chain::algebra(std::size_t i) const {
    if (i > maps_.size()) throw std::out_of_range("Chain::algebra: index out of range");
    return i == 0 ? maps_.front().source() : maps_[i - 1].target();
}

std::vector<AlgebraShape> Chain::algebras() const {
    std::vector<AlgebraShape> out;
    for (std::size_t i = 0; i <= maps_.size(); ++i) out.push_back(algebra(i));
    return out;
}

Chain Chain::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last > maps_.size()) throw std::out_of_range("Chain::slice: bad range");
    return Chain(std::vector<LinearOperatorMap>(maps_.begin() + static_cast<std::ptrdiff_t>(first),
                                                maps_.begin() + static_cast<std::ptrdiff_t>(last)));
}

CptpReport Chain::is_cptp(double tol) const {
    CptpReport all{true, true, true, 0.0, std::numeric_limits<double>::infinity()};
    for (const auto& m : maps_) {
        const auto r = qsot::is_cptp(m, tol);
        all.tp = all.tp && r.tp;
        all.cp = all.cp && r.cp;
        all.tp_deviation = std::max(all.tp_deviation, r.tp_deviation);
        all.min_choi_eigenvalue = std::min(all.min_choi_eigenvalue, r.min_choi_eigenvalue);
    }
    all.holds = all.tp && all.cp;
    return all;
}

// ---------------------------------------------------------------------------

LinearOperatorMap random_cptp(const AlgebraShape& source, const AlgebraShape& target, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t hs = source.hilbert_dim();
    const std::size_t ht = target.hilbert_dim();
    const std::size_t env = std::max<std::size_t>(2, (hs + ht - 1) / ht) + seed % 2;
    const Matrix g = ginibre(ht * env, hs, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix v = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    std::vector<Matrix> kraus;
    for (std::size_t e = 0; e < env; ++e)
        kraus.push_back(v.middleRows(static_cast<Eigen::Index>(e * ht), static_cast<Eigen::Index>(ht)));
    return from_kraus(source, target, kraus);
}

LinearOperatorMap random_hptp(const AlgebraShape& source, const AlgebraShape& target, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> weight(0.2, 1.0);
    const double s = weight(rng);
    const auto a = random_cptp(source, target, rng());
    const auto b = random_cptp(source, target, rng());
    return {source, target, (1.0 + s) * a.matrix() - s * b.matrix()};
}

double max_abs_diff(const LinearOperatorMap& a, const LinearOperatorMap& b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target()))
        throw std::invalid_argument("max_abs_diff: maps have different shapes");
    if (a.matrix().size() == 0) return 0.0;
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace qsot
