#include "qsot/sot.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsot {

StateOverTime star(const Chain& chain, const AlgebraElement& rho, double tol) {
    if (!(rho.shape() == chain.algebra(0)))
        throw std::invalid_argument("star: initial state lives on " + rho.shape().to_string() + ", chain starts at " +
                                    chain.algebra(0).to_string());
    if (!rho.is_virtual_state(tol))
        throw std::invalid_argument("star: initial element is not a virtual state (self-adjoint, unit trace)");
    return {bloom_chain_closed_apply(chain, rho), chain, rho};
}

AlgebraElement marginal(const StateOverTime& s, std::size_t i) {
    if (i >= s.value.arity()) throw std::out_of_range("marginal: index out of range");
    return partial_trace(s.value, {i}).flat();
}

std::vector<AlgebraElement> evolved_states(const Chain& chain, const AlgebraElement& rho) {
    std::vector<AlgebraElement> out{rho};
    for (const auto& m : chain.maps()) out.push_back(apply(m, out.back()));
    return out;
}

MarginalReport verify_marginals(const StateOverTime& s, double tol) {
    MarginalReport rep;
    const auto expected = evolved_states(s.chain, s.initial);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double d = max_abs_diff(marginal(s, i), expected[i]);
        rep.deviations.push_back(d);
        rep.max_deviation = std::max(rep.max_deviation, d);
    }
    rep.holds = rep.max_deviation <= tol;
    return rep;
}

PropagatorReport verify_propagator(const Chain& chain, const AlgebraElement& rho, double tol) {
    const std::size_t n = chain.length();
    if (n < 2) throw std::invalid_argument("verify_propagator: needs a chain of length >= 2");
    const StateOverTime lhs = star(chain, rho, tol);
    const StateOverTime shorter = star(chain.slice(0, n - 1), rho, tol);
    const LinearOperatorMap last = compose(chain[n - 1], trace_map(shorter.value.factors()));
    const FactoredElement rhs = bloom_apply(last, shorter.value);
    const AlgebraElement recursive = apply(bloom_chain_recursive(chain), rho);

    PropagatorReport rep;
    rep.deviation = max_abs_diff(lhs.value, rhs);
    rep.recursive_deviation = max_abs_diff(lhs.value.flat(), recursive);
    rep.holds = rep.deviation <= tol && rep.recursive_deviation <= tol;
    return rep;
}

SpectrumReport spectrum_report(const StateOverTime& s, double tol) {
    SpectrumReport rep;
    rep.eigenvalues = spectrum(s.value.flat(), tol);
    rep.min_eigenvalue = rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front();
    rep.negative_count = static_cast<std::size_t>(
        std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [&](double v) { return v < -tol; }));
    rep.trace = std::accumulate(rep.eigenvalues.begin(), rep.eigenvalues.end(), 0.0);
    return rep;
}

}  // namespace qsot
