#ifndef RISKM_MONOFN_HPP
#define RISKM_MONOFN_HPP

#include <vector>

#include "riskm/common.hpp"

namespace riskm {

// Increasing piecewise-linear function with upward jumps allowed at interior
// knots. Evaluation is left-continuous on (lo, hi] and right-continuous at
// lo, i.e. the stored value at an interior knot is the left limit. With
// domain [0,1] this is exactly the normalized class used for quantile
// functions, spectra and concentration maps; arbitrary domains cover
// increasing value maps (transforms applied to variables, factor results).
class MonoFn {
  public:
    // Pieces must tile [lo, hi] contiguously; each piece must be increasing
    // and each knot may only jump upward. Collinear neighbours are merged.
    static MonoFn from_pieces(std::vector<LinearPiece> pieces);

    static MonoFn constant(double lo, double hi, double v);
    static MonoFn identity();  // identity on [0,1]

    const std::vector<LinearPiece>& pieces() const { return pieces_; }
    double lo() const { return pieces_.front().t0; }
    double hi() const { return pieces_.back().t1; }
    bool unit_domain() const {
        return approx_eq(lo(), 0.0) && approx_eq(hi(), 1.0);
    }

    // Left-continuous evaluation (right-continuous at lo).
    double operator()(double t) const;
    double left_limit(double t) const;   // t in (lo, hi]
    double right_limit(double t) const;  // t in [lo, hi)

    double min_value() const { return pieces_.front().v0; }
    double max_value() const { return pieces_.back().v1; }

    // a.e. equality of normalized forms.
    bool same_function(const MonoFn& other, double tol = kEps) const;

  private:
    MonoFn() = default;
    std::vector<LinearPiece> pieces_;
};

// Sum of slopes-below: integral of the function over its whole domain.
double integral(const MonoFn& f);

}  // namespace riskm

#endif  // RISKM_MONOFN_HPP
