#include "doctest.h"

#include <limits>

#include "oracles.hpp"
#include "support.hpp"

#include "qsot/broadcast.hpp"

using namespace qsot;
using namespace qsot::test;

TEST_CASE("multiplication maps") {
    const AlgebraShape q({2});
    const auto rho = random_state(q, 1);
    CHECK(max_abs_diff(apply(mu(q), tensor(rho, AlgebraElement::identity(q))).flat(), rho) < 1e-15);
    const AlgebraElement x(q, {pauli_x()}), y(q, {pauli_y()});
    const auto xy = tensor(x, y);
    CHECK(max_abs_diff(apply(mu(q), xy).flat(), AlgebraElement(q, {cplx(0, 1) * pauli_z()})) < 1e-15);
    CHECK(max_abs_diff(apply(mu_tilde(q), xy).flat(), AlgebraElement(q, {cplx(0, -1) * pauli_z()})) < 1e-15);

    // Multi-block: products of elements from different blocks vanish.
    const AlgebraShape m({2, 1});
    const auto a = random_hermitian(m, 2), b = random_hermitian(m, 3);
    CHECK(max_abs_diff(apply(mu(m), tensor(a, b)).flat(), multiply(a, b)) < 1e-13);
    CHECK(max_abs_diff(apply(mu_tilde(m), tensor(a, b)).flat(), multiply(b, a)) < 1e-13);
}

TEST_CASE("swap element") {
    CHECK(swap_element(AlgebraShape({1})).flat().block(0)(0, 0) == cplx(1.0));
    const Matrix s2 = swap_element(AlgebraShape({2})).flat().block(0);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 1.0;
    expected(1, 2) = expected(2, 1) = 1.0;
    CHECK((s2 - expected).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto sw = swap_element(AlgebraShape({d})).flat();
        CHECK(sw.is_self_adjoint(0.0));
        CHECK(max_abs_diff(multiply(sw, sw), AlgebraElement::identity(sw.shape())) == 0.0);
        const auto sp = spectrum(sw);
        const auto minus = static_cast<std::size_t>(std::count_if(sp.begin(), sp.end(), [](double v) { return v < 0; }));
        CHECK(minus == d * (d - 1) / 2);
        CHECK(sp.size() - minus == d * (d + 1) / 2);
    }
    CHECK_THROWS_AS(swap_element(AlgebraShape({2, 1})), std::invalid_argument);
}

TEST_CASE("broadcast of the maximally mixed qubit is SWAP/2") {
    const AlgebraShape q({2});
    const auto b = broadcast(0.5 * AlgebraElement::identity(q));
    CHECK((b.flat().block(0) - 0.5 * oracle::swap(2)).cwiseAbs().maxCoeff() < 1e-15);
    const auto sp = spectrum(b.flat());
    const std::vector<double> expected{-0.5, 0.5, 0.5, 0.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(sp[i] - expected[i]) < 1e-12);
}

TEST_CASE("three broadcast routes agree") {
    for (std::size_t d = 1; d <= 4; ++d) {
        const AlgebraShape s({d});
        const auto map = broadcast_map(s);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto a = random_hermitian(s, seed) + cplx(0, 1) * random_hermitian(s, seed + 50);
            const auto fast = broadcast(a).flat();
            CHECK(max_abs_diff(apply(map, a), fast) < 1e-12);
            CHECK(max_abs_diff(broadcast_anticommutator(a).flat(), fast) < 1e-12);
            CHECK((fast.block(0) - oracle::broadcast(a.block(0))).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    // Multi-block shapes: adjoint route against the entrywise kernel.
    for (const auto& s : {AlgebraShape({2, 1}), AlgebraShape({1, 1}), AlgebraShape({2, 2, 1})}) {
        const auto a = random_hermitian(s, 3);
        CHECK(max_abs_diff(apply(broadcast_map(s), a), broadcast(a).flat()) < 1e-12);
    }
}

TEST_CASE("broadcast is trace- and hermiticity-preserving but not CP") {
    for (std::size_t d = 2; d <= 4; ++d) {
        const auto map = broadcast_map(AlgebraShape({d}));
        CHECK(is_tp(map).holds);
        CHECK(is_hp(map).holds);
        const auto rep = is_cptp(map);
        CHECK_FALSE(rep.cp);
        CHECK(rep.min_choi_eigenvalue < -0.1);
    }
    const auto scalar = is_cptp(broadcast_map(AlgebraShape({1})));
    CHECK(scalar.holds);
}

TEST_CASE("both marginals of a broadcast return the input") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const AlgebraShape s = small_shapes()[rng() % 4];
        // A virtual state that is typically not positive.
        AlgebraElement rho = random_hermitian(s, rng());
        rho = rho + (1.0 - rho.trace().real()) / static_cast<double>(s.hilbert_dim()) * AlgebraElement::identity(s);
        const auto b = broadcast(rho);
        CHECK(max_abs_diff(partial_trace(b, {0}).flat(), rho) < 1e-10);
        CHECK(max_abs_diff(partial_trace(b, {1}).flat(), rho) < 1e-10);
    }
}

TEST_CASE("classical broadcast") {
    const AlgebraShape c = AlgebraShape::classical(2);
    const auto cb = classical_broadcast(c);
    const auto d0 = apply(cb, AlgebraElement::matrix_unit(c, 0, 0, 0));
    CHECK(max_abs_diff(d0, tensor(AlgebraElement::matrix_unit(c, 0, 0, 0), AlgebraElement::matrix_unit(c, 0, 0, 0)).flat()) == 0.0);
    const std::vector<double> p{0.3, 0.7};
    const auto out = apply(cb, AlgebraElement::diagonal(c, p)).coords();
    CHECK(out(0).real() == doctest::Approx(0.3));
    CHECK(out(1) == cplx(0.0));
    CHECK(out(2) == cplx(0.0));
    CHECK(out(3).real() == doctest::Approx(0.7));
    CHECK(is_tp(cb).holds);
    CHECK_THROWS_AS(classical_broadcast(AlgebraShape({2})), std::invalid_argument);
}

TEST_CASE("broadcast axioms") {
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto rep = check_broadcast_axioms(d, 100, d);
        CHECK(rep.holds);
        CHECK(rep.covariance_deviation < 1e-10);
        CHECK(rep.permutation_deviation < 1e-10);
        CHECK(rep.classical_deviation < 1e-10);
        if (d == 1) {
            CHECK(rep.covariance_deviation < 16 * std::numeric_limits<double>::epsilon());
            CHECK(rep.permutation_deviation == 0.0);
        }
    }
    // Covariance with A = 1: B(1) against (U (x) U) B(1) (U (x) U)^dag.
    const AlgebraShape s({3});
    const auto u = random_unitary(s, 1).block(0);
    const Matrix b1 = broadcast(AlgebraElement::identity(s)).flat().block(0);
    const Matrix uu = Eigen::kroneckerProduct(u, u).eval();
    CHECK((uu * b1 * uu.adjoint() - b1).cwiseAbs().maxCoeff() < 1e-12);
}
