#include "qsot/bayes.hpp"

#include "qsot/broadcast.hpp"
#include "qsot/kernels.hpp"

#include <stdexcept>

namespace qsot {

LinearOperatorMap gamma_swap(const AlgebraShape& a, const AlgebraShape& b) {
    const std::vector<AlgebraShape> ba{b, a}, ab{a, b};
    const auto ps = kernels::kron_to_flat(ba);
    const auto pt = kernels::kron_to_flat(ab);
    const std::size_t da = a.total_dim(), db = b.total_dim();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
    for (std::size_t x = 0; x < db; ++x)
        for (std::size_t y = 0; y < da; ++y)
            m(static_cast<Eigen::Index>(pt[y * db + x]), static_cast<Eigen::Index>(ps[x * da + y])) = 1.0;
    return {ba, ab, std::move(m)};
}

namespace {

// Coordinates of an element of X (x) Y as a dim(X) x dim(Y) matrix of
// Kronecker pairs.
Matrix pair_matrix(const AlgebraShape& x, const AlgebraShape& y, const Vector& flat) {
    const std::vector<AlgebraShape> xy{x, y};
    const auto p = kernels::kron_to_flat(xy);
    const std::size_t dx = x.total_dim(), dy = y.total_dim();
    Matrix out(static_cast<Eigen::Index>(dx), static_cast<Eigen::Index>(dy));
    for (std::size_t i = 0; i < dx; ++i)
        for (std::size_t j = 0; j < dy; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat(static_cast<Eigen::Index>(p[i * dy + j]));
    return out;
}

}  // namespace

BayesSolution solve_bayes(const LinearOperatorMap& e, const AlgebraElement& rho, double tol) {
    const AlgebraShape& a = e.source();
    const AlgebraShape& b = e.target();
    if (!(rho.shape() == a))
        throw std::invalid_argument("solve_bayes: state lives on " + rho.shape().to_string() + ", map starts at " +
                                    a.to_string());
    if (!rho.is_state(tol)) throw std::invalid_argument("solve_bayes: initial element is not a state");

    const AlgebraElement sigma = apply(e, rho);
    const Matrix z = pair_matrix(b, b, broadcast(sigma).flat().coords());
    const AlgebraElement forward = bloom_apply(e, FactoredElement(rho)).flat();
    const Vector swapped = gamma_swap(b, a).matrix() * forward.coords();
    const Matrix t = pair_matrix(b, a, swapped);

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(z);
    cod.setThreshold(1e-12);
    const Matrix solution_t = cod.solve(t);  // dim(B) x dim(A), the transpose of F's matrix

    BayesSolution out{LinearOperatorMap(b, a, solution_t.transpose())};
    out.residual = t.size() == 0 ? 0.0 : (z * solution_t - t).cwiseAbs().maxCoeff();
    out.exists = out.residual <= tol;
    out.degeneracy = b.total_dim() - static_cast<std::size_t>(cod.rank());
    out.tp_deviation = is_tp(out.inverse, tol).deviation;
    out.hp_deviation = is_hp(out.inverse, tol).deviation;
    const auto cptp = is_cptp(out.inverse, tol);
    out.cp = cptp.cp;
    out.min_choi_eigenvalue = cptp.min_choi_eigenvalue;
    return out;
}

BayesReport verify_bayes(const LinearOperatorMap& e, const AlgebraElement& rho, const LinearOperatorMap& inverse,
                         double tol) {
    if (!(inverse.source() == e.target()) || !(inverse.target() == e.source()))
        throw std::invalid_argument("verify_bayes: inverse must map " + e.target().to_string() + " to " +
                                    e.source().to_string());
    const AlgebraElement lhs = bloom_apply(e, FactoredElement(rho)).flat();
    const AlgebraElement sigma = apply(e, rho);
    const AlgebraElement back = bloom_apply(inverse, FactoredElement(sigma)).flat();
    const AlgebraElement rhs = apply(gamma_swap(e.source(), e.target()), back);
    BayesReport rep;
    rep.deviation = max_abs_diff(lhs, rhs);
    rep.holds = rep.deviation <= tol;
    return rep;
}

BayesCovarianceReport check_bayes_covariance(const LinearOperatorMap& e, const AlgebraElement& rho,
                                             const LinearOperatorMap& inverse, const StarIsomorphism& phi,
                                             const StarIsomorphism& psi, double tol) {
    BayesCovarianceReport rep;
    const auto pre = verify_bayes(e, rho, inverse, tol);
    rep.precondition_deviation = pre.deviation;
    rep.vacuous = !pre.holds;
    const auto f = as_map(phi), f_inv = as_map(qsot::inverse(phi));
    const auto g = as_map(psi), g_inv = as_map(qsot::inverse(psi));
    const auto e_prime = compose(g, compose(e, f_inv));
    const auto inv_prime = compose(f, compose(inverse, g_inv));
    const auto post = verify_bayes(e_prime, apply_iso(phi, rho), inv_prime, tol);
    rep.deviation = post.deviation;
    rep.holds = !rep.vacuous && post.holds;
    return rep;
}

double swap_lemma_deviation(const StarIsomorphism& phi, const StarIsomorphism& psi) {
    const auto f = as_map(phi), g = as_map(psi);
    const auto lhs = compose(tensor(f, g), gamma_swap(phi.source(), psi.source()));
    const auto rhs = compose(gamma_swap(phi.target(), psi.target()), tensor(g, f));
    return (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace qsot
