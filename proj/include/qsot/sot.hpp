// sot.hpp: canonical states over time

#pragma once

#include "qsot/bloom.hpp"

#include <vector>

namespace qsot {

struct StateOverTime {
    FactoredElement value;
    Chain chain;
    AlgebraElement initial;
};

/// (E_1, ..., E_n) * rho via the closed-form bloom. rho must be a virtual
/// state on A_0 within tol.
StateOverTime star(const Chain& chain, const AlgebraElement& rho, double tol = kDefaultTol);

/// Marginal on factor i, 0 <= i <= n.
AlgebraElement marginal(const StateOverTime& s, std::size_t i);

/// rho_i = E_i o ... o E_1 (rho), i = 0..n.
std::vector<AlgebraElement> evolved_states(const Chain& chain, const AlgebraElement& rho);

struct MarginalReport {
    bool holds = false;
    double max_deviation = 0.0;
    std::vector<double> deviations;
};

MarginalReport verify_marginals(const StateOverTime& s, double tol = kDefaultTol);

struct PropagatorReport {
    bool holds = false;
    /// |star(chain) - (E_n o tr) * star(chain[0..n-1])|
    double deviation = 0.0;
    /// |star(chain) - recursive-form bloom applied to rho|
    double recursive_deviation = 0.0;
};

/// Requires n >= 2.
PropagatorReport verify_propagator(const Chain& chain, const AlgebraElement& rho, double tol = kDefaultTol);

struct SpectrumReport {
    std::vector<double> eigenvalues;
    double min_eigenvalue = 0.0;
    std::size_t negative_count = 0;
    double trace = 0.0;
};

SpectrumReport spectrum_report(const StateOverTime& s, double tol = kDefaultTol);

}  // namespace qsot
