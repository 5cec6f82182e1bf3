// Shared generators for the test suite.
#pragma once

#include "qsot/bloom.hpp"
#include "qsot/random.hpp"

#include <vector>

namespace qsot::test {

inline std::vector<AlgebraShape> small_shapes() {
    return {AlgebraShape({2}), AlgebraShape({3}), AlgebraShape({1, 1}), AlgebraShape({2, 1})};
}

/// n maps between shapes drawn from small_shapes().
inline std::vector<AlgebraShape> random_algebras(std::size_t n, Rng& rng) {
    const auto pool = small_shapes();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<AlgebraShape> out;
    for (std::size_t i = 0; i <= n; ++i) out.push_back(pool[pick(rng)]);
    return out;
}

inline Chain random_cptp_chain(const std::vector<AlgebraShape>& algebras, Rng& rng) {
    std::vector<LinearOperatorMap> maps;
    for (std::size_t i = 0; i + 1 < algebras.size(); ++i) maps.push_back(random_cptp(algebras[i], algebras[i + 1], rng()));
    return Chain(std::move(maps));
}

inline Chain random_hptp_chain(const std::vector<AlgebraShape>& algebras, Rng& rng) {
    std::vector<LinearOperatorMap> maps;
    for (std::size_t i = 0; i + 1 < algebras.size(); ++i) maps.push_back(random_hptp(algebras[i], algebras[i + 1], rng()));
    return Chain(std::move(maps));
}

inline Eigen::MatrixXd stochastic(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

inline Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
inline Matrix pauli_y() { return (Matrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(); }
inline Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }

}  // namespace qsot::test
