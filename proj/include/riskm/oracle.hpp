#ifndef RISKM_ORACLE_HPP
#define RISKM_ORACLE_HPP

// Brute-force reference evaluators. Everything here recomputes from first
// principles — survival probabilities scanned piece by piece, dependence
// checked pointwise on dense grids — and deliberately shares no machinery
// with the exact engines it validates.

#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/distortion.hpp"
#include "riskm/randvar.hpp"

namespace riskm {

// Finite-atom surrogate of a random variable.
struct DiscreteRv {
    std::vector<std::pair<double, double>> atoms;  // (value, prob)
};
DiscreteRv make_discrete(std::vector<std::pair<double, double>> atoms);

// Direct value-axis integration of the distorted survival function:
//   ∫_{-inf}^0 [h(P(X>v)) - h(1)] dv + ∫_0^inf h(P(X>v)) dv
// with exact survival probabilities at grid points and trapezoid steps.
double choquet_numeric(const DistortionFn& h, const Plrv& x, int grid_n);

// Exact finite sum for atoms: values sorted decreasing, T_k the mass of the
// top k values, result Σ v_(k) (h(T_k) - h(T_{k-1})).
double choquet_discrete(const DistortionFn& h, const DiscreteRv& x);

// Dense screen of K-concentration: for grid_n probability levels p inside
// each interval of K, the mass-(1-p) upper tail by sum order must dominate
// its complement in every component.
bool concentration_grid(const std::vector<Plrv>& xs, const ClosedSet& k, int grid_n);

}  // namespace riskm

#endif  // RISKM_ORACLE_HPP
