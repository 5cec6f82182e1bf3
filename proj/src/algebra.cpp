#include "qsot/algebra.hpp"

#include "qsot/kernels.hpp"
#include "qsot/random.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsot {

AlgebraShape::AlgebraShape(std::vector<std::size_t> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("AlgebraShape: block list is empty");
    offsets_.reserve(blocks_.size());
    for (std::size_t n : blocks_) {
        if (n == 0) throw std::invalid_argument("AlgebraShape: block dimension must be >= 1");
        offsets_.push_back(total_dim_);
        total_dim_ += n * n;
        hilbert_dim_ += n;
    }
}

AlgebraShape AlgebraShape::classical(std::size_t points) {
    return AlgebraShape(std::vector<std::size_t>(points, 1));
}

bool AlgebraShape::is_classical() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](std::size_t n) { return n == 1; });
}

std::string AlgebraShape::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t b = 0; b < blocks_.size(); ++b) os << (b ? "," : "") << blocks_[b];
    os << ']';
    return os.str();
}

AlgebraShape tensor_shape(const AlgebraShape& a, const AlgebraShape& b) {
    std::vector<std::size_t> out;
    out.reserve(a.num_blocks() * b.num_blocks());
    for (std::size_t n : a.blocks())
        for (std::size_t m : b.blocks()) out.push_back(n * m);
    return AlgebraShape(std::move(out));
}

AlgebraShape flatten(std::span<const AlgebraShape> factors) {
    if (factors.empty()) throw std::invalid_argument("flatten: empty factor list");
    AlgebraShape out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_shape(out, factors[i]);
    return out;
}

// ---------------------------------------------------------------------------

BlockIndexer::BlockIndexer(std::span<const AlgebraShape> factors) {
    radices_.reserve(factors.size());
    for (const auto& f : factors) {
        radices_.push_back(f.num_blocks());
        count_ *= f.num_blocks();
    }
}

std::size_t BlockIndexer::flat(std::span<const std::size_t> tuple) const {
    if (tuple.size() != radices_.size())
        throw std::invalid_argument("BlockIndexer: tuple arity mismatch");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (tuple[j] >= radices_[j]) throw std::out_of_range("BlockIndexer: block index out of range");
        idx = idx * radices_[j] + tuple[j];
    }
    return idx;
}

std::vector<std::size_t> BlockIndexer::tuple(std::size_t flat) const {
    std::vector<std::size_t> t(radices_.size());
    for (std::size_t j = radices_.size(); j-- > 0;) {
        t[j] = flat % radices_[j];
        flat /= radices_[j];
    }
    return t;
}

// ---------------------------------------------------------------------------

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (blocks_.size() != shape_.num_blocks())
        throw std::invalid_argument("AlgebraElement: expected " + std::to_string(shape_.num_blocks()) +
                                    " blocks, got " + std::to_string(blocks_.size()));
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        auto n = static_cast<Eigen::Index>(shape_.block(b));
        if (blocks_[b].rows() != n || blocks_[b].cols() != n)
            throw std::invalid_argument("AlgebraElement: block " + std::to_string(b) +
                                        " has wrong size for shape " + shape_.to_string());
    }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
    std::vector<Matrix> blocks;
    for (std::size_t n : shape.blocks()) blocks.push_back(Matrix::Zero(n, n));
    return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
    std::vector<Matrix> blocks;
    for (std::size_t n : shape.blocks()) blocks.push_back(Matrix::Identity(n, n));
    return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_coords(const AlgebraShape& shape, const Vector& coords) {
    if (static_cast<std::size_t>(coords.size()) != shape.total_dim())
        throw std::invalid_argument("from_coords: coordinate vector has wrong length");
    std::vector<Matrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
        auto n = static_cast<Eigen::Index>(shape.block(b));
        Matrix m(n, n);
        const cplx* src = coords.data() + shape.offset(b);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = src[r * n + c];
        blocks.push_back(std::move(m));
    }
    return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::diagonal(const AlgebraShape& shape, std::span<const double> values) {
    if (!shape.is_classical()) throw std::invalid_argument("diagonal: shape is not classical");
    if (values.size() != shape.num_blocks())
        throw std::invalid_argument("diagonal: value count does not match shape");
    std::vector<Matrix> blocks;
    for (double v : values) blocks.push_back(Matrix::Constant(1, 1, cplx(v, 0.0)));
    return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_block_diagonal(const AlgebraShape& shape, const Matrix& full) {
    auto h = static_cast<Eigen::Index>(shape.hilbert_dim());
    if (full.rows() != h || full.cols() != h)
        throw std::invalid_argument("from_block_diagonal: matrix size does not match shape");
    std::vector<Matrix> blocks;
    Eigen::Index at = 0;
    for (std::size_t n : shape.blocks()) {
        auto ni = static_cast<Eigen::Index>(n);
        blocks.push_back(full.block(at, at, ni, ni));
        at += ni;
    }
    return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::matrix_unit(const AlgebraShape& shape, std::size_t b, std::size_t row,
                                           std::size_t col) {
    auto e = zero(shape);
    if (b >= shape.num_blocks() || row >= shape.block(b) || col >= shape.block(b))
        throw std::out_of_range("matrix_unit: index out of range");
    e.blocks_[b](static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    return e;
}

Vector AlgebraElement::coords() const {
    Vector v(static_cast<Eigen::Index>(shape_.total_dim()));
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Matrix& m = blocks_[b];
        cplx* dst = v.data() + shape_.offset(b);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) dst[r * m.cols() + c] = m(r, c);
    }
    return v;
}

Matrix AlgebraElement::to_block_diagonal() const {
    auto h = static_cast<Eigen::Index>(shape_.hilbert_dim());
    Matrix full = Matrix::Zero(h, h);
    Eigen::Index at = 0;
    for (const Matrix& m : blocks_) {
        full.block(at, at, m.rows(), m.cols()) = m;
        at += m.rows();
    }
    return full;
}

AlgebraElement AlgebraElement::dagger() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const Matrix& m : blocks_) out.push_back(m.adjoint());
    return {shape_, std::move(out)};
}

cplx AlgebraElement::trace() const {
    cplx t = 0.0;
    for (const Matrix& m : blocks_) t += m.trace();
    return t;
}

double AlgebraElement::max_abs() const {
    double worst = 0.0;
    for (const Matrix& m : blocks_)
        if (m.size() > 0) worst = std::max(worst, m.cwiseAbs().maxCoeff());
    return worst;
}

double AlgebraElement::hermiticity_deviation() const {
    double worst = 0.0;
    for (const Matrix& m : blocks_) worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
    return worst;
}

bool AlgebraElement::is_self_adjoint(double tol) const { return hermiticity_deviation() <= tol; }

bool AlgebraElement::is_virtual_state(double tol) const {
    return is_self_adjoint(tol) && std::abs(trace() - cplx(1.0, 0.0)) <= tol;
}

bool AlgebraElement::is_state(double tol) const {
    if (!is_virtual_state(tol)) return false;
    auto eig = spectrum(*this, tol);
    return eig.front() >= -tol;
}

bool AlgebraElement::is_unitary(double tol) const {
    for (const Matrix& m : blocks_) {
        Matrix id = Matrix::Identity(m.rows(), m.cols());
        if ((m.adjoint() * m - id).cwiseAbs().maxCoeff() > tol) return false;
        if ((m * m.adjoint() - id).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

namespace {

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* what) {
    if (!(a == b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.to_string() + " vs " +
                                    b.to_string());
}

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape_, b.shape_, "operator+");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) out.push_back(a.blocks_[i] + b.blocks_[i]);
    return {a.shape_, std::move(out)};
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape_, b.shape_, "operator-");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) out.push_back(a.blocks_[i] - b.blocks_[i]);
    return {a.shape_, std::move(out)};
}

AlgebraElement operator*(cplx s, const AlgebraElement& a) {
    std::vector<Matrix> out;
    for (const Matrix& m : a.blocks_) out.push_back(s * m);
    return {a.shape_, std::move(out)};
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "multiply");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < a.blocks().size(); ++i) out.push_back(a.block(i) * b.block(i));
    return {a.shape(), std::move(out)};
}

cplx hs_inner(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "hs_inner");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.blocks().size(); ++i) s += (a.block(i).adjoint() * b.block(i)).trace();
    return s;
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "max_abs_diff");
    return (a - b).max_abs();
}

std::vector<double> spectrum(const AlgebraElement& a, double tol) {
    double dev = a.hermiticity_deviation();
    if (dev > tol)
        throw std::invalid_argument("spectrum: element is not self-adjoint (deviation " +
                                    std::to_string(dev) + ")");
    std::vector<double> out;
    out.reserve(a.shape().hilbert_dim());
    for (const Matrix& m : a.blocks()) {
        Matrix herm = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

FactoredElement::FactoredElement(std::vector<AlgebraShape> factors, AlgebraElement flat)
    : factors_(std::move(factors)), flat_(std::move(flat)) {
    if (factors_.empty()) throw std::invalid_argument("FactoredElement: empty factor list");
    if (!(flatten(factors_) == flat_.shape()))
        throw std::invalid_argument("FactoredElement: flat shape does not match factor list");
}

FactoredElement::FactoredElement(AlgebraElement single)
    : factors_{single.shape()}, flat_(std::move(single)) {}

const Matrix& FactoredElement::block(std::span<const std::size_t> tuple) const {
    BlockIndexer idx(factors_);
    return flat_.block(idx.flat(tuple));
}

FactoredElement tensor(const FactoredElement& x, const FactoredElement& y) {
    const AlgebraShape& sx = x.flat().shape();
    const AlgebraShape& sy = y.flat().shape();
    std::vector<Matrix> blocks;
    blocks.reserve(sx.num_blocks() * sy.num_blocks());
    for (const Matrix& a : x.flat().blocks())
        for (const Matrix& b : y.flat().blocks()) {
            Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            blocks.push_back(std::move(k));
        }
    std::vector<AlgebraShape> factors = x.factors();
    factors.insert(factors.end(), y.factors().begin(), y.factors().end());
    return {std::move(factors), AlgebraElement(tensor_shape(sx, sy), std::move(blocks))};
}

FactoredElement tensor(const AlgebraElement& x, const AlgebraElement& y) {
    return tensor(FactoredElement(x), FactoredElement(y));
}

FactoredElement partial_trace(const FactoredElement& x, std::vector<std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.back() >= x.arity()) throw std::out_of_range("partial_trace: factor index out of range");
    std::vector<AlgebraShape> kept;
    for (std::size_t k : keep) kept.push_back(x.factors()[k]);
    if (kept.size() == x.arity()) return x;
    return {std::move(kept), kernels::parallel::partial_trace(x.factors(), x.flat(), keep)};
}

double max_abs_diff(const FactoredElement& a, const FactoredElement& b) {
    if (a.factors() != b.factors()) throw std::invalid_argument("max_abs_diff: factor lists differ");
    return max_abs_diff(a.flat(), b.flat());
}

// ---------------------------------------------------------------------------

AlgebraElement random_state(const AlgebraShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    std::exponential_distribution<double> weight(1.0);
    std::vector<Matrix> blocks;
    std::vector<double> weights;
    for (std::size_t n : shape.blocks()) {
        Matrix g = ginibre(n, n, rng);
        Matrix gram = g.adjoint() * g;
        gram /= gram.trace().real();
        blocks.push_back(std::move(gram));
        weights.push_back(weight(rng));
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] *= weights[b] / total;
    return {shape, std::move(blocks)};
}

AlgebraElement random_hermitian(const AlgebraShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> blocks;
    for (std::size_t n : shape.blocks()) {
        Matrix g = ginibre(n, n, rng);
        blocks.push_back(0.5 * (g + g.adjoint()));
    }
    return {shape, std::move(blocks)};
}

}  // namespace qsot
