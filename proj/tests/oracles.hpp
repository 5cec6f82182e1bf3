// Independent reference computations. These work on plain dense matrices and
// probability tables and use nothing from the library beyond its types.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Kraus = std::vector<Mat>;

inline Mat swap(Eigen::Index d) {
    Mat s = Mat::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
    return s;
}

/// 1/2 {A (x) 1, SWAP}.
inline Mat broadcast(const Mat& a) {
    const Eigen::Index d = a.rows();
    const Mat left = Eigen::kroneckerProduct(a, Mat::Identity(d, d)).eval();
    const Mat s = swap(d);
    return 0.5 * (left * s + s * left);
}

inline Mat apply_kraus(const Kraus& k, const Mat& x) {
    Mat y = Mat::Zero(k.front().rows(), k.front().rows());
    for (const Mat& m : k) y += m * x * m.adjoint();
    return y;
}

/// Trace over the first `outer` dimensions of a (outer*inner)-square matrix.
inline Mat trace_left(const Mat& x, Eigen::Index inner) {
    const Eigen::Index outer = x.rows() / inner;
    Mat y = Mat::Zero(inner, inner);
    for (Eigen::Index a = 0; a < outer; ++a) y += x.block(a * inner, a * inner, inner, inner);
    return y;
}

/// (id_D (x) f)(z) for z on C^D (x) C^D, f acting on D x D blocks.
inline Mat apply_right(const Mat& z, Eigen::Index d, const std::function<Mat(const Mat&)>& f) {
    Mat out;
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            const Mat y = f(z.block(a * d, b * d, d, d));
            if (out.size() == 0) out = Mat::Zero(d * y.rows(), d * y.rows());
            out.block(a * y.rows(), b * y.rows(), y.rows(), y.rows()) = y;
        }
    return out;
}

/// State over time of a chain of Kraus channels between matrix algebras,
/// built step by step: Y_k = (id (x) E_k o tr)(1/2 {Y_{k-1} (x) 1, SWAP}).
/// Kronecker order, left factor major.
inline Mat star(const std::vector<Kraus>& chain, const Mat& rho) {
    Mat y = rho;
    Eigen::Index last = rho.rows();
    for (const Kraus& k : chain) {
        const Eigen::Index d = y.rows();
        const Eigen::Index keep = last;
        y = apply_right(broadcast(y), d, [&](const Mat& x) { return apply_kraus(k, trace_left(x, keep)); });
        last = k.front().rows();
    }
    return y;
}

/// Joint distribution P(x_0) P(x_1|x_0) ... over all index tuples, in
/// lexicographic order (x_0 major). Channels are column-stochastic.
inline std::vector<double> chain_rule(const std::vector<double>& p0, const std::vector<Eigen::MatrixXd>& channels) {
    std::vector<double> joint = p0;
    std::vector<std::size_t> last_dim(1, p0.size());
    std::size_t prev = p0.size();
    for (const auto& c : channels) {
        const std::size_t next = static_cast<std::size_t>(c.rows());
        std::vector<double> grown(joint.size() * next);
        for (std::size_t t = 0; t < joint.size(); ++t)
            for (std::size_t y = 0; y < next; ++y)
                grown[t * next + y] = joint[t] * c(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(t % prev));
        joint = std::move(grown);
        prev = next;
    }
    return joint;
}

/// Posterior channel P(x|y) as a |X| x |Y| column-stochastic matrix.
inline Eigen::MatrixXd posterior(const Eigen::MatrixXd& channel, const std::vector<double>& prior) {
    Eigen::MatrixXd post(channel.cols(), channel.rows());
    for (Eigen::Index y = 0; y < channel.rows(); ++y) {
        double py = 0.0;
        for (Eigen::Index x = 0; x < channel.cols(); ++x) py += channel(y, x) * prior[static_cast<std::size_t>(x)];
        for (Eigen::Index x = 0; x < channel.cols(); ++x)
            post(x, y) = channel(y, x) * prior[static_cast<std::size_t>(x)] / py;
    }
    return post;
}

/// Smallest eigenvalue of (E (x) id_d)(|psi><psi|) over random unit vectors
/// psi, for a map given by its action on n x n matrices.
inline double min_output_eigenvalue(const std::function<Mat(const Mat&)>& e, Eigen::Index n, Eigen::Index d,
                                    int samples, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    // E(|i><j|) for all i, j.
    std::vector<Mat> images;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Mat u = Mat::Zero(n, n);
            u(i, j) = 1.0;
            images.push_back(e(u));
        }
    const Eigen::Index m = images.front().rows();
    double worst = 1e300;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd psi(n * d);
        for (auto& v : psi) v = cplx(g(rng), g(rng));
        psi.normalize();
        // psi = sum_{i,a} c_{ia} |i>|a>, so |psi><psi| = sum e_ij (x) c_i c_j^dag.
        Mat out = Mat::Zero(m * d, m * d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const Mat anc = psi.segment(i * d, d) * psi.segment(j * d, d).adjoint();
                out += Eigen::kroneckerProduct(images[static_cast<std::size_t>(i * n + j)], anc).eval();
            }
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (out + out.adjoint()), Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    return worst;
}

}  // namespace oracle
