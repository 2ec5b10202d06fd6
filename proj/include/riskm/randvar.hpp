#ifndef RISKM_RANDVAR_HPP
#define RISKM_RANDVAR_HPP

#include <vector>

#include "riskm/common.hpp"
#include "riskm/monofn.hpp"

namespace riskm {

// Measurable subset of the sample space [0,1]: a finite union of disjoint
// intervals, compared and combined modulo null sets (zero-width intervals
// and zero-width gaps are collapsed).
class Event {
  public:
    static Event from_intervals(std::vector<Interval> intervals);
    static Event empty() { return Event{}; }
    static Event full() { return from_intervals({{0.0, 1.0}}); }

    const std::vector<Interval>& intervals() const { return intervals_; }
    double measure() const;
    bool is_empty() const { return intervals_.empty(); }

    Event complement() const;
    Event intersect(const Event& other) const;
    Event unite(const Event& other) const;
    Event setminus(const Event& other) const { return intersect(other.complement()); }

    bool same_event(const Event& other, double tol = kEps) const;

  private:
    std::vector<Interval> intervals_;
};

// Piecewise-linear random variable on the probability space [0,1] with
// Lebesgue measure. Pieces tile [0,1]; on [t0,t1) the variable moves
// linearly from v0 to v1. Constructors merge collinear neighbours, so a.e.
// equal inputs share a normal form.
class Plrv {
  public:
    static Plrv from_pieces(std::vector<LinearPiece> pieces);
    static Plrv constant(double v);
    static Plrv uniform01();  // identity on [0,1]
    // Reinterpret an increasing function on [0,1] as a variable.
    static Plrv from_monofn(const MonoFn& f);

    const std::vector<LinearPiece>& pieces() const { return pieces_; }
    double operator()(double omega) const;  // right-continuous in omega

    bool same_variable(const Plrv& other, double tol = kEps) const;

    Plrv operator+(const Plrv& other) const;
    Plrv operator-() const;
    Plrv scale_shift(double a, double b) const;  // a*X + b

  private:
    std::vector<LinearPiece> pieces_;
};

// --- quantiles and integral functionals -----------------------------------

// Monotone rearrangement: the quantile function as a normalized increasing
// function on [0,1] (left-continuous, right-continuous at 0).
MonoFn quantile_fn(const Plrv& x);

// Measure-preserving rank transform U with x = quantile_fn(x)(U) a.e.;
// ties inside flat stretches of x keep their omega-order (stable sort), so
// U is increasing across every flat region.
Plrv rank_transform(const Plrv& x);

double quantile_left(const Plrv& x, double p);   // p in (0,1]
double quantile_right(const Plrv& x, double p);  // p in [0,1)
double var(const Plrv& x, double p);             // = quantile_left
double var_plus(const Plrv& x, double p);        // = quantile_right
double es(const Plrv& x, double p);              // p in (0,1], es(x,1) = ess_sup
double ess_sup(const Plrv& x);
double ess_inf(const Plrv& x);
double mean(const Plrv& x);

double ess_inf_on(const Plrv& x, const Event& e);
double ess_sup_on(const Plrv& x, const Event& e);

Plrv sum(const std::vector<Plrv>& xs);

// Composition f(x) for an increasing value map covering the range of x.
// The map is evaluated left-continuously at its knots.
Plrv apply_increasing(const Plrv& x, const MonoFn& f);

// Pointwise composition without the monotonicity contract (used by
// constructions that deliberately rearrange mass).
Plrv compose(const MonoFn& f, const Plrv& inner);

// --- comonotonicity --------------------------------------------------------

// Common refinement cell: one omega-interval on which every component is
// linear, with per-component endpoint values.
struct Cell {
    double a = 0.0;
    double b = 0.0;
    std::vector<std::pair<double, double>> vals;  // (value at a, value at b-)
};

std::vector<Cell> refine(const std::vector<Plrv>& xs);
std::vector<Cell> restrict_cells(const std::vector<Cell>& cells, const Event& e);

// Decides whether every component is a.e. an increasing function of the
// componentwise sum over the given cells: sorted by the sum's values, each
// component must be monotone, and constant across ties of the sum.
bool cells_comonotone(const std::vector<Cell>& cells, double tol = kEps);

// Decided exactly on the common refinement of the components.
bool is_comonotonic(const std::vector<Plrv>& xs);

}  // namespace riskm

#endif  // RISKM_RANDVAR_HPP
