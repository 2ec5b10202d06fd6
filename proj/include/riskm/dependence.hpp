#ifndef RISKM_DEPENDENCE_HPP
#define RISKM_DEPENDENCE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/distortion.hpp"
#include "riskm/indexsets.hpp"
#include "riskm/randvar.hpp"

namespace riskm {

// Outcome of a single-level tail check: the canonical tail event of the sum
// at level p, with one verdict per component (true iff the event is a p-tail
// event of that component). measure(event) = 1 - p.
struct TailCertificate {
    double p = 0.0;
    Event event;
    std::vector<bool> verdicts;

    bool all() const;
};

// Canonical p-tail event of x: the strict super-level set of the rank
// transform at p. It equals {x > t} for t = quantile_left(x, p), completed
// inside flat regions of x at level t by the upper (late-omega) sub-interval
// so the measure is exactly 1 - p.
Event tail_event(const Plrv& x, double p);

// Whether the components share a common p-tail event, decided against the
// canonical tail of the sum. The canonical choice loses nothing: if any
// common tail event exists, sandwiching the componentwise ess-inf/ess-sup
// sums against the constant sum forces every component to be a.e. constant
// on the flat region of the sum straddling the level, so every split of that
// region works, including the canonical one.
std::pair<bool, TailCertificate> is_p_concentrated(const std::vector<Plrv>& xs,
                                                   double p);

// Decision record for K-concentration. When ok is false, exactly one of
// failing_p (an interval endpoint of K whose tail check failed) or
// failing_layer (an interval of K whose conditional comonotonicity check
// failed) is set. Certificates for all endpoint checks are kept in order.
struct ConcentrationReport {
    bool ok = false;
    std::optional<double> failing_p;
    std::optional<Interval> failing_layer;
    std::vector<TailCertificate> certificates;
};

// K-concentration: p-concentration at every interval endpoint of K inside
// (0,1), plus conditional comonotonicity on the layer between the nested
// canonical tails of each nondegenerate interval of K.
ConcentrationReport is_k_concentrated(const std::vector<Plrv>& xs,
                                      const ClosedSet& k);

// The comonotone witness: Z = V(K)(U) for the rank transform U of the sum.
// Postconditions (tested): quantile_fn(Z) equals v_map(K) a.e. and every
// (x_i, Z) pair is comonotonic. Requires is_k_concentrated(xs, k).
Plrv witness_z(const std::vector<Plrv>& xs, const ClosedSet& k);

// g-comonotonicity, decided through the equivalent index-set concentration.
bool is_g_comonotonic(const std::vector<Plrv>& xs, const MonoFn& g);

// --- ordinal-sum generator --------------------------------------------------

// Dependence choice inside one gap of K. Components follow the identity
// coupling on K-intervals; inside a gap the mass may be rearranged freely.
enum class CouplingKind { comonotone, countermonotone, independent, swap_blocks };

struct GapCoupling {
    Interval gap;               // must match a nondegenerate gap of K
    CouplingKind kind = CouplingKind::comonotone;
    double param = 0.5;         // swap_blocks pivot in (0,1); ignored otherwise
};

struct GapCopulaSpec {
    std::vector<GapCoupling> gaps;  // one entry per nondegenerate gap, in order
};

// Deterministic K-concentrated vector: component i is marginals[i] applied to
// a rearranged uniform that is the identity on K-intervals and follows the
// per-gap coupling elsewhere (component 0 is always the identity, so the
// couplings read as copulas against the first coordinate). Empty marginals
// mean a pair of uniforms. The seed drives the independent-coupling shuffles.
std::vector<Plrv> generate(const ClosedSet& k, const GapCopulaSpec& spec,
                           const std::vector<MonoFn>& marginals,
                           std::uint64_t seed);

// For f not preceding g: a pair that is g-comonotonic but not f-comonotonic,
// built as (f(U), f(R(U))) where R reflects a gap of psi(g) that meets
// psi(f). Requires !precedes(f, g); throws if no verified pair is found.
std::pair<Plrv, Plrv> order_refutation_pair(const MonoFn& f, const MonoFn& g,
                                            std::uint64_t seed = 1);

// If h fails to be K-additive, a K-concentrated pair (X, Y) with
// choquet(h, X + Y) != choquet(h, X) + choquet(h, Y), the inequality checked
// by evaluation (|gap| > 1e-9) before returning. Candidates per failing gap:
// the reflection pair, two asymmetric variants that survive symmetric jump
// cancellation, and 64 seeded block rearrangements; exhausting them raises an
// error rather than returning an unverified pair. Absent when h is K-additive.
std::optional<std::pair<Plrv, Plrv>> counterexample(const DistortionFn& h,
                                                    const ClosedSet& k,
                                                    std::uint64_t seed = 1);

}  // namespace riskm

#endif  // RISKM_DEPENDENCE_HPP
