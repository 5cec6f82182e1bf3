#include "doctest.h"

#include "oracles.hpp"
#include "support.hpp"

#include "qsot/bayes.hpp"

using namespace qsot;
using namespace qsot::test;

TEST_CASE("gamma swaps tensor factors") {
    const AlgebraShape a({2, 1}), b({1, 2});
    const auto rho = random_hermitian(a, 1), sigma = random_hermitian(b, 2);
    const auto g = gamma_swap(a, b);
    CHECK(max_abs_diff(apply(g, tensor(sigma, rho)), tensor(rho, sigma)) == 0.0);
    CHECK(max_abs_diff(compose(gamma_swap(b, a), g), LinearOperatorMap::identity({b, a})) == 0.0);
}

TEST_CASE("gamma is a *-isomorphism") {
    const AlgebraShape a({2, 1}), b({3});
    const auto g = gamma_swap(a, b);
    const AlgebraShape ba = tensor_shape(b, a);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto x = random_hermitian(ba, s) + cplx(0, 1) * random_hermitian(ba, s + 10);
        const auto y = random_hermitian(ba, s + 20);
        CHECK(max_abs_diff(apply(g, multiply(x, y)), multiply(apply(g, x), apply(g, y))) < 1e-12);
        CHECK(max_abs_diff(apply(g, x.dagger()), apply(g, x).dagger()) < 1e-12);
        CHECK(std::abs(apply(g, x).trace() - x.trace()) < 1e-12);
    }
}

TEST_CASE("swap lemma") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_algebras(1, rng);
        CHECK(swap_lemma_deviation(random_iso(s[0], rng()), random_iso(s[1], rng())) < 1e-11);
    }
}

TEST_CASE("classical Bayes inverse is the posterior") {
    const auto st = stochastic({{0.9, 0.2}, {0.1, 0.8}});
    const std::vector<double> p{0.3, 0.7};
    const auto rho = AlgebraElement::diagonal(AlgebraShape::classical(2), p);
    const auto e = classical_channel(st);
    CHECK(max_abs_diff(apply(e, rho), AlgebraElement::diagonal(AlgebraShape::classical(2), std::vector<double>{0.41, 0.59})) <
          1e-15);
    const auto sol = solve_bayes(e, rho);
    CHECK(sol.exists);
    CHECK(sol.degeneracy == 0);
    const Matrix& m = sol.inverse.matrix();
    CHECK(std::abs(m(0, 0) - 0.27 / 0.41) < 1e-12);
    CHECK(std::abs(m(1, 0) - 0.14 / 0.41) < 1e-12);
    CHECK(std::abs(m(0, 1) - 0.03 / 0.59) < 1e-12);
    CHECK(std::abs(m(1, 1) - 0.56 / 0.59) < 1e-12);
    CHECK(sol.cp);
    CHECK(verify_bayes(e, rho, sol.inverse).holds);
}

TEST_CASE("classical Bayes inverses over a random sweep") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const std::size_t x = 1 + rng() % 4, y = 1 + rng() % 4;
        const auto st = random_stochastic(y, x, rng());
        const auto p = random_distribution(x, rng());
        const auto sol = solve_bayes(classical_channel(st), AlgebraElement::diagonal(AlgebraShape::classical(x), p));
        CHECK(sol.residual < 1e-11);
        const auto post = oracle::posterior(st, p);
        CHECK((sol.inverse.matrix().real() - post).cwiseAbs().maxCoeff() < 1e-11);
        CHECK(sol.inverse.matrix().imag().cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("unitary channels invert to the adjoint unitary") {
    Rng rng(5);
    for (const auto& s : {AlgebraShape({2}), AlgebraShape({3}), AlgebraShape({2, 1})}) {
        for (int t = 0; t < 5; ++t) {
            const auto u = random_unitary(s, rng());
            const auto rho = random_state(s, rng());
            const auto e = ad_unitary(u);
            const auto sol = solve_bayes(e, rho);
            CHECK(sol.residual < 1e-10);
            CHECK(max_abs_diff(sol.inverse, ad_unitary(u.dagger())) < 1e-9);
            CHECK(sol.cp);
            CHECK(verify_bayes(e, rho, ad_unitary(u.dagger())).deviation < 1e-10);
        }
    }
}

TEST_CASE("trace-and-reprepare is diagnosed without a verdict") {
    const AlgebraShape q({2});
    const auto sigma0 = random_state(q, 6);
    // E(X) = tr(X) sigma0.
    Matrix m = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < 2; ++i) m.col(static_cast<Eigen::Index>(q.coord(0, i, i))) = sigma0.coords();
    const LinearOperatorMap e(q, q, m);
    REQUIRE(is_cptp(e).holds);
    const auto sol = solve_bayes(e, random_state(q, 7));
    CHECK(sol.residual >= 0.0);
    CHECK(std::isfinite(sol.min_choi_eigenvalue));
    CHECK(sol.inverse.matrix().rows() == 4);
}

TEST_CASE("rank-deficient output reports degeneracy") {
    const AlgebraShape q({2});
    // Project onto |0><0| as the output.
    const auto rho = random_state(q, 8);
    Matrix m = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < 2; ++i) m(0, static_cast<Eigen::Index>(q.coord(0, i, i))) = 1.0;
    const LinearOperatorMap e(q, q, m);
    const auto sol = solve_bayes(e, rho);
    CHECK(sol.degeneracy > 0);
}

TEST_CASE("a wrong inverse fails verification") {
    const auto e = classical_channel(stochastic({{0.9, 0.2}, {0.1, 0.8}}));
    const std::vector<double> p{0.3, 0.7};
    const auto rho = AlgebraElement::diagonal(AlgebraShape::classical(2), p);
    const auto rep = verify_bayes(e, rho, LinearOperatorMap::identity(AlgebraShape::classical(2)));
    CHECK_FALSE(rep.holds);
    CHECK(rep.deviation > 1e-3);
}

TEST_CASE("Bayes rule covariance") {
    Rng rng(9);
    const AlgebraShape q({2});
    const auto u = random_unitary(q, rng());
    const auto rho = random_state(q, rng());
    const auto e = ad_unitary(u);
    const auto sol = solve_bayes(e, rho);
    REQUIRE(sol.exists);
    const auto id = StarIsomorphism::identity(q);
    const auto same = check_bayes_covariance(e, rho, sol.inverse, id, id);
    CHECK(std::abs(same.deviation - verify_bayes(e, rho, sol.inverse).deviation) < 1e-15);
    for (int t = 0; t < 20; ++t) {
        const auto rep = check_bayes_covariance(e, rho, sol.inverse, random_iso(q, rng()), random_iso(q, rng()));
        CHECK_FALSE(rep.vacuous);
        CHECK(rep.deviation < 1e-9);
    }

    const auto c = AlgebraShape::classical(3);
    const auto ce = classical_channel(random_stochastic(3, 3, 1));
    const auto cr = AlgebraElement::diagonal(c, random_distribution(3, 2));
    const auto csol = solve_bayes(ce, cr);
    const auto perm = StarIsomorphism::block_permutation(c, {1, 2, 0});
    CHECK(check_bayes_covariance(ce, cr, csol.inverse, perm, perm).deviation < 1e-13);
}

TEST_CASE("Bayes covariance with a wrong inverse is flagged vacuous") {
    const AlgebraShape q({2});
    const auto e = ad_unitary(random_unitary(q, 1));
    const auto rho = random_state(q, 2);
    const auto rep = check_bayes_covariance(e, rho, LinearOperatorMap::identity(q), random_iso(q, 3), random_iso(q, 4));
    CHECK(rep.vacuous);
    CHECK(rep.precondition_deviation > 1e-3);
    CHECK(rep.deviation > 1e-3);
}

TEST_CASE("solve_bayes input checks") {
    const AlgebraShape q({2});
    const auto e = ad_unitary(random_unitary(q, 1));
    CHECK_THROWS_AS(solve_bayes(e, random_state(AlgebraShape({3}), 1)), std::invalid_argument);
    CHECK_THROWS_AS(solve_bayes(e, AlgebraElement(q, {pauli_z() + 0.5 * Matrix::Identity(2, 2)})),
                    std::invalid_argument);
}
