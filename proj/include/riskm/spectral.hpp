#ifndef RISKM_SPECTRAL_HPP
#define RISKM_SPECTRAL_HPP

#include <optional>
#include <vector>

#include "riskm/distortion.hpp"
#include "riskm/monofn.hpp"
#include "riskm/randvar.hpp"

namespace riskm {

// Risk spectrum: an increasing, nonnegative weight density on [0,1] with
// unit integral. Wraps the left-continuous normal form; the weighted
// quantile integral below is linear in the quantile function, so the a.e.
// class is all that matters.
class Spectrum {
  public:
    static Spectrum from_monofn(const MonoFn& g);
    static Spectrum uniform();        // g = 1: the expectation
    static Spectrum es(double p);     // g = 1{t > p}/(1-p), p in [0,1)

    const MonoFn& fn() const { return g_; }

  private:
    explicit Spectrum(MonoFn g) : g_(std::move(g)) {}
    MonoFn g_;
};

// Finite mixture of the expectation and expected shortfalls: the dual form
// of a step spectrum. Levels are strictly increasing inside (0,1), the ES
// weights are strictly positive, and lambda0 + sum(lambda_i) = 1.
struct ESTerm {
    double alpha = 0.0;
    double lambda = 0.0;
};

struct ESMixture {
    double lambda0 = 0.0;
    std::vector<ESTerm> terms;

    double evaluate(const Plrv& x) const;
};

// The spectral risk measure: integral of g against the quantile function,
// exact for piecewise-linear inputs.
double rho(const Spectrum& g, const Plrv& x);

// Additivity of rho_g on the vector, decided structurally: rho_g adds up
// exactly on xs iff the vector is g-comonotonic.
bool is_additive_on(const Spectrum& g, const std::vector<Plrv>& xs);

// Step spectra are finite ES mixtures: lambda0 is the base level of g and
// each upward step of height (gamma_i - gamma_{i-1}) at level alpha_i
// carries weight (gamma_i - gamma_{i-1})(1 - alpha_i). Absent when g has a
// sloped piece (no finite decomposition exists).
std::optional<ESMixture> es_mixture(const Spectrum& g);

// The weights whose signed Choquet integral is a spectral measure: h must be
// continuous, increasing to h(1) = 1, with a convex conjugate; the spectrum
// is the conjugate's derivative. Absent otherwise (jumps or concave kinks).
std::optional<Spectrum> spectrum_of_distortion(const DistortionFn& h);

// Inverse direction, total: integrate g into the conjugate weight and
// reflect. Satisfies choquet(distortion_of_spectrum(g), x) = rho(g, x).
DistortionFn distortion_of_spectrum(const Spectrum& g);

}  // namespace riskm

#endif  // RISKM_SPECTRAL_HPP
