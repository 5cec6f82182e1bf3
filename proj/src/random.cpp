#include "qsot/random.hpp"

#include <numeric>

namespace qsot {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = cplx(re, im) / std::sqrt(2.0);
        }
    return g;
}

Matrix haar_unitary(std::size_t d, Rng& rng) {
    Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& packed = qr.matrixQR();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        cplx r = packed(i, i);
        double mag = std::abs(r);
        q.col(i) *= mag > 0.0 ? r / mag : cplx(1.0, 0.0);
    }
    return q;
}

AlgebraElement random_unitary(const AlgebraShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> blocks;
    for (std::size_t n : shape.blocks()) blocks.push_back(haar_unitary(n, rng));
    return {shape, std::move(blocks)};
}

Eigen::MatrixXd random_stochastic(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    std::exponential_distribution<double> draw(1.0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = draw(rng);
        m.col(c) /= m.col(c).sum();
    }
    return m;
}

std::vector<double> random_distribution(std::size_t size, std::uint64_t seed) {
    Rng rng(seed);
    std::exponential_distribution<double> draw(1.0);
    std::vector<double> p(size);
    for (double& x : p) x = draw(rng);
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;
    return p;
}

}  // namespace qsot
