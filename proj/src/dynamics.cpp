#include "qsot/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace qsot {

AlgebraElement evolution_operator(const AlgebraElement& h, double t, double tol) {
    if (!h.is_self_adjoint(tol)) throw std::invalid_argument("evolution_operator: Hamiltonian is not self-adjoint");
    if (!std::isfinite(t)) throw std::invalid_argument("evolution_operator: duration is not finite");
    std::vector<Matrix> out;
    for (const Matrix& block : h.blocks()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (block + block.adjoint()));
        Vector phases(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(cplx(0.0, -es.eigenvalues()(i) * t));
        out.push_back(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
    }
    return {h.shape(), std::move(out)};
}

Chain unitary_chain(const AlgebraElement& h, const std::vector<double>& durations, double tol) {
    if (durations.empty()) throw std::invalid_argument("unitary_chain: no durations given");
    std::vector<LinearOperatorMap> maps;
    for (double t : durations) maps.push_back(ad_unitary(evolution_operator(h, t, tol), tol));
    return Chain(std::move(maps));
}

AlgebraElement transform_hamiltonian(const AlgebraElement& h, const AlgebraElement& u, double tol) {
    if (!h.is_self_adjoint(tol)) throw std::invalid_argument("transform_hamiltonian: Hamiltonian is not self-adjoint");
    if (!(u.shape() == h.shape())) throw std::invalid_argument("transform_hamiltonian: shape mismatch");
    if (!u.is_unitary(tol)) throw std::invalid_argument("transform_hamiltonian: U is not unitary");
    return multiply(multiply(u, h), u.dagger());
}

}  // namespace qsot
