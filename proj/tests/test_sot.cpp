#include "doctest.h"

#include "oracles.hpp"
#include "support.hpp"

#include "qsot/sot.hpp"

using namespace qsot;
using namespace qsot::test;

TEST_CASE("identity channel on the maximally mixed qubit") {
    const AlgebraShape q({2});
    const Chain chain({LinearOperatorMap::identity(q)});
    const auto s = star(chain, 0.5 * AlgebraElement::identity(q));
    CHECK((s.value.flat().block(0) - 0.5 * oracle::swap(2)).cwiseAbs().maxCoeff() < 1e-15);
    const auto rep = spectrum_report(s);
    CHECK(rep.min_eigenvalue == doctest::Approx(-0.5));
    CHECK(rep.negative_count == 1);
    CHECK(rep.trace == doctest::Approx(1.0));
}

TEST_CASE("classical one-step state over time") {
    const Chain chain({classical_channel(stochastic({{0.9, 0.2}, {0.1, 0.8}}))});
    const std::vector<double> p{0.3, 0.7};
    const auto s = star(chain, AlgebraElement::diagonal(AlgebraShape::classical(2), p));
    const Vector c = s.value.flat().coords();
    const std::vector<double> expected{0.27, 0.03, 0.14, 0.56};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(c(static_cast<Eigen::Index>(i)) - expected[i]) < 1e-15);
}

TEST_CASE("star preconditions") {
    const AlgebraShape q({2});
    const Chain chain({LinearOperatorMap::identity(q)});
    CHECK_THROWS_AS(star(chain, AlgebraElement::identity(q)), std::invalid_argument);
    CHECK_THROWS_AS(star(chain, random_state(AlgebraShape({3}), 1)), std::invalid_argument);
    CHECK_THROWS_AS(star(chain, AlgebraElement(q, {cplx(0, 1) * pauli_y() + 0.5 * Matrix::Identity(2, 2)})), std::invalid_argument);
    // Virtual states are fine.
    CHECK_NOTHROW(star(chain, AlgebraElement(q, {pauli_z() + 0.5 * Matrix::Identity(2, 2)})));
}

TEST_CASE("marginals") {
    Rng rng(1);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + t % 4;
        const auto chain = random_cptp_chain(random_algebras(n, rng), rng);
        const auto rho = random_state(chain.algebra(0), rng());
        const auto s = star(chain, rho);
        const auto rep = verify_marginals(s);
        CHECK(rep.max_deviation < 1e-10);
        CHECK(rep.deviations.size() == n + 1);
        CHECK(max_abs_diff(marginal(s, 0), rho) < 1e-10);
        AlgebraElement last = rho;
        for (const auto& m : chain.maps()) last = apply(m, last);
        CHECK(max_abs_diff(marginal(s, n), last) < 1e-10);
        CHECK_THROWS_AS(marginal(s, n + 1), std::out_of_range);
    }
}

TEST_CASE("star of an HPTP chain is a virtual state") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto chain = random_hptp_chain(random_algebras(1 + t % 3, rng), rng);
        AlgebraElement rho = random_hermitian(chain.algebra(0), rng());
        rho = rho + (1.0 - rho.trace().real()) / static_cast<double>(rho.shape().hilbert_dim()) *
                        AlgebraElement::identity(rho.shape());
        const auto s = star(chain, rho);
        CHECK(s.value.flat().hermiticity_deviation() < 1e-10);
        CHECK(std::abs(s.value.flat().trace() - 1.0) < 1e-12);
    }
}

TEST_CASE("propagator identity") {
    Rng rng(3);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 2 + t % 3;
        const auto chain = random_cptp_chain(random_algebras(n, rng), rng);
        const auto rep = verify_propagator(chain, random_state(chain.algebra(0), rng()));
        CHECK(rep.holds);
        CHECK(rep.deviation < 1e-10);
        CHECK(rep.recursive_deviation < 1e-10);
    }
    const Chain single({LinearOperatorMap::identity(AlgebraShape({2}))});
    CHECK_THROWS_AS(verify_propagator(single, random_state(AlgebraShape({2}), 1)), std::invalid_argument);
}

TEST_CASE("propagator on a classical chain is exact") {
    const auto e = classical_channel(stochastic({{0.9, 0.2}, {0.1, 0.8}}));
    const std::vector<double> p{0.3, 0.7};
    const auto rep = verify_propagator(Chain({e, e}), AlgebraElement::diagonal(AlgebraShape::classical(2), p));
    CHECK(rep.deviation < 1e-14);
    CHECK(rep.recursive_deviation < 1e-14);
}

TEST_CASE("chain of identities gives iterated broadcasts") {
    const AlgebraShape q({2});
    const auto id = LinearOperatorMap::identity(q);
    const auto rho = random_state(q, 4);
    const auto rep = verify_propagator(Chain({id, id, id}), rho);
    CHECK(rep.deviation < 1e-14);
    // Oracle: repeated anticommutator construction with trivial channels.
    const oracle::Kraus trivial{Matrix::Identity(2, 2)};
    const Matrix expected = oracle::star({trivial, trivial, trivial}, rho.block(0));
    CHECK((star(Chain({id, id, id}), rho).value.flat().block(0) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("classical chains give non-negative spectra") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        std::vector<LinearOperatorMap> maps;
        std::size_t prev = 2 + rng() % 3;
        const auto p = random_distribution(prev, rng());
        for (int i = 0; i < 3; ++i) {
            const std::size_t next = 2 + rng() % 3;
            maps.push_back(classical_channel(random_stochastic(next, prev, rng())));
            prev = next;
        }
        const auto s = star(Chain(maps), AlgebraElement::diagonal(AlgebraShape::classical(p.size()), p));
        const auto rep = spectrum_report(s);
        CHECK(rep.min_eigenvalue >= -1e-12);
        CHECK(rep.trace == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive classical chains match the chain rule") {
    // Every pair of alphabet sizes up to 4 and every length up to 3, the
    // chain alternating between the two alphabets.
    Rng rng(6);
    for (std::size_t x = 1; x <= 4; ++x)
        for (std::size_t y = 1; y <= 4; ++y)
            for (std::size_t n = 1; n <= 3; ++n) {
                std::vector<Eigen::MatrixXd> st;
                std::vector<LinearOperatorMap> maps;
                std::size_t prev = x;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t next = i % 2 == 0 ? y : x;
                    st.push_back(random_stochastic(next, prev, rng()));
                    maps.push_back(classical_channel(st.back()));
                    prev = next;
                }
                const auto p = random_distribution(x, rng());
                const auto joint = oracle::chain_rule(p, st);
                const Vector got = star(Chain(maps), AlgebraElement::diagonal(AlgebraShape::classical(x), p)).value.flat().coords();
                REQUIRE(static_cast<std::size_t>(got.size()) == joint.size());
                for (std::size_t i = 0; i < joint.size(); ++i)
                    CHECK(std::abs(got(static_cast<Eigen::Index>(i)) - joint[i]) <= 1e-13);
            }
}
