#include "doctest.h"

#include "support.hpp"

#include "qsot/algebra.hpp"
#include "qsot/broadcast.hpp"

#include <unsupported/Eigen/KroneckerProduct>

using namespace qsot;
using namespace qsot::test;

TEST_CASE("tensor_shape multiplies blocks lexicographically") {
    CHECK(tensor_shape(AlgebraShape({2}), AlgebraShape({2})).blocks() == std::vector<std::size_t>{4});
    CHECK(tensor_shape(AlgebraShape({1, 1}), AlgebraShape({1, 1})).blocks() == std::vector<std::size_t>{1, 1, 1, 1});
    CHECK(tensor_shape(AlgebraShape({2, 1}), AlgebraShape({3})).blocks() == std::vector<std::size_t>{6, 3});
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(AlgebraShape({}), std::invalid_argument);
    CHECK_THROWS_AS(AlgebraShape({2, 0}), std::invalid_argument);
    const AlgebraShape s({2, 1});
    CHECK(s.total_dim() == 5);
    CHECK(s.hilbert_dim() == 3);
    CHECK(AlgebraShape::classical(3).is_classical());
    CHECK_FALSE(s.is_classical());
    const AlgebraShape scalar({1});
    CHECK(scalar.is_classical());
    CHECK(AlgebraElement::identity(scalar).trace() == cplx(1.0));
}

TEST_CASE("element arithmetic") {
    const AlgebraShape q({2});
    CHECK(AlgebraElement::identity(AlgebraShape({2, 1})).trace() == cplx(3.0));
    const AlgebraElement x(q, {pauli_x()});
    CHECK(std::abs(hs_inner(x, x) - cplx(2.0)) < 1e-15);
    const AlgebraElement ix = cplx(0, 1) * x;
    CHECK(max_abs_diff(ix.dagger(), cplx(0, -1) * x) < 1e-15);
    const AlgebraElement y(q, {pauli_y()});
    CHECK(max_abs_diff(multiply(x, y), AlgebraElement(q, {cplx(0, 1) * pauli_z()})) < 1e-15);
    CHECK_THROWS_AS(multiply(x, AlgebraElement::identity(AlgebraShape({3}))), std::invalid_argument);
    CHECK_THROWS_AS(AlgebraElement(q, {Matrix::Zero(3, 3)}), std::invalid_argument);
}

TEST_CASE("coordinates are entries in block, row, column order") {
    const AlgebraShape s({2, 1});
    const AlgebraElement e = AlgebraElement::matrix_unit(s, 0, 1, 0);
    const Vector c = e.coords();
    CHECK(c.size() == 5);
    CHECK(c(2) == cplx(1.0));
    CHECK(c.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(max_abs_diff(AlgebraElement::from_coords(s, c), e) == 0.0);
}

TEST_CASE("hs_inner is conjugate symmetric") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const AlgebraShape s = small_shapes()[seed % 4];
        const AlgebraElement a = random_hermitian(s, seed) + cplx(0, 1) * random_hermitian(s, seed + 100);
        const AlgebraElement b = random_hermitian(s, seed + 200) + cplx(0, 0.5) * random_state(s, seed);
        CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);
        double bound = 0.0;
        for (std::size_t blk = 0; blk < s.num_blocks(); ++blk)
            bound += static_cast<double>(s.block(blk)) * a.block(blk).operatorNorm();
        CHECK(std::abs(a.trace()) <= bound + 1e-12);
    }
}

TEST_CASE("spectrum") {
    const AlgebraShape q({2});
    const auto half = 0.5 * AlgebraElement::identity(q);
    const auto sp = spectrum(half);
    REQUIRE(sp.size() == 2);
    CHECK(sp[0] == doctest::Approx(0.5));
    CHECK(sp[1] == doctest::Approx(0.5));

    const auto sw = spectrum(swap_element(q).flat());
    const std::vector<double> expected{-1, 1, 1, 1};
    for (std::size_t i = 0; i < 4; ++i) CHECK(sw[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    const std::vector<double> p{0.3, 0.7};
    const auto cl = spectrum(AlgebraElement::diagonal(AlgebraShape::classical(2), p));
    CHECK(cl[0] == doctest::Approx(0.3));
    CHECK(cl[1] == doctest::Approx(0.7));

    CHECK_THROWS_AS(spectrum(AlgebraElement(q, {pauli_y() + Matrix::Identity(2, 2) * cplx(0, 1)})),
                    std::invalid_argument);
}

TEST_CASE("spectrum is invariant under blockwise unitary conjugation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const AlgebraShape s = small_shapes()[seed % 4];
        const AlgebraElement h = random_hermitian(s, seed);
        const AlgebraElement u = random_unitary(s, seed + 7);
        const auto a = spectrum(h);
        const auto b = spectrum(multiply(multiply(u, h), u.dagger()));
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    }
}

TEST_CASE("tensor flattens to a blockwise Kronecker product") {
    const AlgebraShape a({2, 1}), b({1, 2});
    const auto x = random_hermitian(a, 1), y = random_hermitian(b, 2);
    const FactoredElement t = tensor(x, y);
    CHECK(t.flat().shape().blocks() == std::vector<std::size_t>{2, 4, 1, 2});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const std::vector<std::size_t> tuple{i, j};
            const Matrix expected = Eigen::kroneckerProduct(x.block(i), y.block(j)).eval();
            CHECK((t.block(tuple) - expected).cwiseAbs().maxCoeff() < 1e-12);
        }
    CHECK(std::abs(t.flat().trace() - x.trace() * y.trace()) < 1e-12);
}

TEST_CASE("tensor products flatten associatively") {
    const AlgebraShape a({2, 1}), b({1, 1}), c({2});
    const auto x = random_hermitian(a, 3), y = random_hermitian(b, 4), z = random_hermitian(c, 5);
    const auto left = tensor(tensor(x, y), FactoredElement(z));
    const auto right = tensor(FactoredElement(x), tensor(y, z));
    CHECK(max_abs_diff(left, right) < 1e-15);
}

TEST_CASE("partial trace") {
    const AlgebraShape a({2, 1}), b({3});
    const auto rho = random_state(a, 1);
    const auto sigma = 2.0 * random_state(b, 2);
    const auto prod = tensor(rho, sigma);
    CHECK(max_abs_diff(partial_trace(prod, {0}).flat(), sigma.trace() * rho) < 1e-12);
    CHECK(max_abs_diff(partial_trace(prod, {1}).flat(), rho.trace() * sigma) < 1e-12);
    CHECK(max_abs_diff(partial_trace(prod, {0, 1}), prod) == 0.0);
    CHECK_THROWS_AS(partial_trace(prod, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(prod, {2}), std::out_of_range);

    // SWAP/2 contracts to identity/2 on either side: sum_j |i><j| (x) |j><i|
    // traced over the second factor leaves sum_i |i><i| / 2.
    const AlgebraShape q({2});
    const auto half_swap = FactoredElement(swap_element(q).factors(), 0.5 * swap_element(q).flat());
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(max_abs_diff(partial_trace(half_swap, {k}).flat(), 0.5 * AlgebraElement::identity(q)) < 1e-15);
}

TEST_CASE("partial traces compose") {
    const std::vector<AlgebraShape> f{AlgebraShape({2, 1}), AlgebraShape({1, 1}), AlgebraShape({2}), AlgebraShape({3})};
    AlgebraElement flat = random_hermitian(flatten(f), 9);
    const FactoredElement x(f, flat);
    // Tracing out {1} and then {0} equals tracing out {0, 1} at once.
    const auto once = partial_trace(x, {2, 3});
    const auto twice = partial_trace(partial_trace(x, {0, 2, 3}), {1, 2});
    CHECK(max_abs_diff(once, twice) < 1e-12);
    CHECK(std::abs(partial_trace(x, {3}).flat().trace() - flat.trace()) < 1e-12);
}

TEST_CASE("random generators") {
    const AlgebraShape q({2}), t({3}), m({2, 1});
    CHECK(std::abs(random_state(q, 4).trace() - 1.0) < 1e-14);
    for (double v : spectrum(random_state(t, 5))) CHECK(v >= -1e-12);
    CHECK(max_abs_diff(random_state(m, 6), random_state(m, 6)) == 0.0);
    CHECK(random_hermitian(m, 7).is_self_adjoint(1e-14));
    CHECK(random_unitary(m, 8).is_unitary(1e-12));
    CHECK(max_abs_diff(random_state(m, 6), random_state(m, 16)) > 1e-6);
}
