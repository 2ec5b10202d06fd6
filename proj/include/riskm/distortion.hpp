#ifndef RISKM_DISTORTION_HPP
#define RISKM_DISTORTION_HPP

#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/randvar.hpp"

namespace riskm {

// One knot of a distortion function: the value at t together with the two
// one-sided limits, so both kinds of jump can sit at the same point.
struct DistortionKnot {
    double t = 0.0;
    double left = 0.0;   // limit from below (= value at t = 0)
    double value = 0.0;  // h(t)
    double right = 0.0;  // limit from above (= value at t = 1)
};

// Distortion weight of bounded variation on [0,1] with h(0) = 0, possibly
// non-monotone. Between consecutive knots the function is
//     affine(right(t_j) -> left(t_{j+1}))  +  c_j (t - t_j)(t_{j+1} - t),
// i.e. piecewise quadratic with an explicit per-segment curvature c_j. The
// quadratic term vanishes at both knots, so knot data and curvature are
// independent. Curvature zero everywhere gives the plain piecewise-linear
// case; the curved segments are what the variance-sensitive weights
// (Gini-type, power-type) need for exact additivity decisions.
class DistortionFn {
  public:
    struct Segment {
        double a = 0.0, b = 0.0;    // knot span
        double va = 0.0, vb = 0.0;  // right(a) and left(b)
        double c = 0.0;             // curvature
        double slope() const { return (vb - va) / (b - a); }
        double at(double t) const {
            return va + slope() * (t - a) + c * (t - a) * (b - t);
        }
        double deriv(double t) const { return slope() + c * (a + b - 2.0 * t); }
    };

    static DistortionFn from_knots(std::vector<DistortionKnot> knots,
                                   std::vector<double> curvature = {});

    // named weights
    static DistortionFn var(double p);              // 1{t > 1-p}, p in (0,1)
    static DistortionFn var_plus(double p);         // 1{t >= 1-p}, p in [0,1)
    static DistortionFn es(double p);               // min(t/(1-p), 1), p in (0,1)
    static DistortionFn mean();                     // identity
    static DistortionFn ess_sup();                  // 1{t > 0}
    static DistortionFn mean_median_dev();          // t ∧ (1-t)
    static DistortionFn gini_shortfall(double alpha, double lambda);
    static DistortionFn maxvar(double alpha);       // t^(1/alpha), alpha > 1

    const std::vector<DistortionKnot>& knots() const { return knots_; }
    const std::vector<double>& curvature() const { return curvature_; }
    std::vector<Segment> segments() const;

    double operator()(double t) const;
    double left_limit(double t) const;
    double right_limit(double t) const;
    double h1() const { return knots_.back().value; }

    bool same_function(const DistortionFn& other, double tol = kEps) const;

  private:
    std::vector<DistortionKnot> knots_;
    std::vector<double> curvature_;  // one per knot gap
};

// The conjugate t |-> h(1) - h(1-t): knots reflect, the two jump roles swap,
// curvature flips sign. Involutive.
DistortionFn conjugate(const DistortionFn& h);

// Split h = h_c + h_l + h_r: the continuous part, the pure left-jump part
// (steps of the form w·1{t >= s}) and the pure right-jump part
// (w·1{t > s}). The sum reproduces h exactly, knot for knot.
struct DistortionParts {
    DistortionFn h_c;
    DistortionFn h_l;
    DistortionFn h_r;
};
DistortionParts decompose(const DistortionFn& h);

// Exact signed Choquet integral of x under h: the continuous part
// integrates the quantile function against dh (closed form per segment),
// a left jump of weight w at s contributes w·Q⁺(1-s), a right jump
// contributes w·Q⁻(1-s).
double choquet(const DistortionFn& h, const Plrv& x);

// Whether the integral is additive across every dependence structure
// concentrated on K: h must be affine on the closed reflection of each gap
// of K. A jump strictly inside a reflected gap closure always breaks it; at
// the closure's ends only the jump pointing into the closure does.
bool is_k_additive(const DistortionFn& h, const ClosedSet& k);

// Canonical description of all K for which h is additive: is_k_additive(h,K)
// holds iff K contains the core and satisfies every flag. Flags arise from
// the jumps of h (one per jump), the core from its strictly non-affine part.
struct AdditivityCore {
    ClosedSet core;
    struct Flag {
        double p = 0.0;
        bool left = false;  // true: need [p-δ,p] ⊆ K; false: need [p,p+δ] ⊆ K
    };
    std::vector<Flag> flags;
};
AdditivityCore additivity_core(const DistortionFn& h);

// Concavity of h on [0,1]: concave segments, decreasing one-sided slopes at
// knots, no interior jumps, and only an upward right jump at 0 or a
// downward left jump at 1.
bool is_concave(const DistortionFn& h);

}  // namespace riskm

#endif  // RISKM_DISTORTION_HPP
