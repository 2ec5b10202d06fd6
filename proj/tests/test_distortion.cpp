#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "riskm/distortion.hpp"
#include "riskm/indexsets.hpp"
#include "riskm/oracle.hpp"
#include "support.hpp"

using namespace riskm;
namespace ts = riskm::testsupport;

namespace {

// Layered loss: 0, then a ramp 1.5 -> 3 on (2/3, 5/6), then 3.
Plrv make_ramp_loss() {
    return Plrv::from_pieces({{0.0, 2.0 / 3.0, 0.0, 0.0},
                              {2.0 / 3.0, 5.0 / 6.0, 1.5, 3.0},
                              {5.0 / 6.0, 1.0, 3.0, 3.0}});
}

// Its mirrored companion: same outer plateaus, ramp falling 1.5 -> 0.
Plrv make_mirror_loss() {
    return Plrv::from_pieces({{0.0, 2.0 / 3.0, 0.0, 0.0},
                              {2.0 / 3.0, 5.0 / 6.0, 1.5, 0.0},
                              {5.0 / 6.0, 1.0, 3.0, 3.0}});
}

// Staircase of ever-worse tail layers used by the mixture fixtures.
Plrv make_layered_loss() {
    return Plrv::from_pieces({{0.0, 0.85, 0.0, 0.0},
                              {0.85, 0.90, 0.5, 1.5},
                              {0.90, 0.95, 1.5, 2.5},
                              {0.95, 1.0, 2.5, 3.5}});
}

// The worked ramp weight: derivative 3 on [0,1/6], falling 4.5-9t on
// [1/6,1/2], zero beyond — the primitive of the clipped ramp read backwards.
DistortionFn make_ramp_weight() {
    return DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0},
                                     {1.0 / 6.0, 0.5, 0.5, 0.5},
                                     {0.5, 1.0, 1.0, 1.0},
                                     {1.0, 1.0, 1.0, 1.0}},
                                    {0.0, 4.5, 0.0});
}

bool flags_satisfied(const AdditivityCore& ac, const ClosedSet& k) {
    for (const auto& f : ac.flags) {
        const QuantileSide side = f.left ? QuantileSide::left : QuantileSide::right;
        if (!var_additivity_condition(k, f.p, side)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("weight normal form and named weights") {
    CHECK_THROWS_AS(DistortionFn::from_knots({{0.0, 0.2, 0.2, 0.2}, {1.0, 1.0, 1.0, 1.0}}),
                    std::invalid_argument);  // h(0) != 0
    CHECK_THROWS_AS(DistortionFn::from_knots({{0.1, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}),
                    std::invalid_argument);  // does not span [0,1]
    CHECK_THROWS_AS(DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}},
                                             {0.0, 0.0}),
                    std::invalid_argument);  // curvature list too long

    const DistortionFn v = DistortionFn::var(0.9);
    CHECK(v(0.05) == doctest::Approx(0.0));
    CHECK(v(0.1) == doctest::Approx(0.0));
    CHECK(v.right_limit(0.1) == doctest::Approx(1.0));
    CHECK(v(0.5) == doctest::Approx(1.0));
    CHECK(v.h1() == doctest::Approx(1.0));

    const DistortionFn vp = DistortionFn::var_plus(0.9);
    CHECK(vp(0.1) == doctest::Approx(1.0));
    CHECK(vp.left_limit(0.1) == doctest::Approx(0.0));

    const DistortionFn e = DistortionFn::es(0.9);
    CHECK(e(0.05) == doctest::Approx(0.5));
    CHECK(e(0.1) == doctest::Approx(1.0));
    CHECK(e(0.7) == doctest::Approx(1.0));

    const DistortionFn md = DistortionFn::mean_median_dev();
    CHECK(md(0.3) == doctest::Approx(0.3));
    CHECK(md(0.7) == doctest::Approx(0.3));
    CHECK(md.h1() == doctest::Approx(0.0));

    const DistortionFn su = DistortionFn::ess_sup();
    CHECK(su(0.0) == doctest::Approx(0.0));
    CHECK(su.right_limit(0.0) == doctest::Approx(1.0));
    CHECK(su(0.3) == doctest::Approx(1.0));

    // Gini shortfall: t/(1-α) + 2λ t (1-α-t)/(1-α)² below 1-α, then 1.
    const DistortionFn gs = DistortionFn::gini_shortfall(0.9, 0.5);
    CHECK(gs(0.05) == doctest::Approx(0.75));
    CHECK(gs(0.1) == doctest::Approx(1.0));
    CHECK(gs(0.4) == doctest::Approx(1.0));

    // The power weight is carried as a quadratic-arc interpolant: exact at
    // its knots, concave-tight in between, never affine anywhere.
    const DistortionFn mv = DistortionFn::maxvar(2.0);
    CHECK(mv(0.0) == doctest::Approx(0.0));
    CHECK(mv(1.0) == doctest::Approx(1.0));
    CHECK(mv(0.25) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(mv(0.5625) == doctest::Approx(0.75).epsilon(1e-6));
    for (double c : mv.curvature()) CHECK(c > kEps);
    for (double t = 0.0; t <= 1.0; t += 1.0 / 64.0)
        CHECK(std::fabs(mv(t) - std::sqrt(t)) < 2e-2);
}

TEST_CASE("conjugation") {
    // identity is self-conjugate
    CHECK(conjugate(DistortionFn::mean()).same_function(DistortionFn::mean()));

    // 1{t > 1-p} reflects to 1{t >= p}
    const DistortionFn cv = conjugate(DistortionFn::var(0.7));
    CHECK(cv.same_function(DistortionFn::from_knots(
        {{0.0, 0.0, 0.0, 0.0}, {0.7, 0.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}})));

    // min(t/(1-p), 1) reflects to the shifted ramp ((t-p)/(1-p))+
    const DistortionFn ce = conjugate(DistortionFn::es(0.6));
    CHECK(ce.same_function(DistortionFn::from_knots(
        {{0.0, 0.0, 0.0, 0.0}, {0.6, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}})));

    // curvature flips sign: the ramp weight is the conjugate of its primitive
    const DistortionFn hhat = DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0},
                                                        {0.5, 0.0, 0.0, 0.0},
                                                        {5.0 / 6.0, 0.5, 0.5, 0.5},
                                                        {1.0, 1.0, 1.0, 1.0}},
                                                       {0.0, -4.5, 0.0});
    CHECK(conjugate(hhat).same_function(make_ramp_weight()));

    // involution on a randomized suite
    std::mt19937_64 rng(20260821);
    for (int trial = 0; trial < 200; ++trial) {
        const DistortionFn h = ts::gen_distortion(rng);
        CHECK(conjugate(conjugate(h)).same_function(h));
    }
}

TEST_CASE("jump decomposition") {
    // continuous weight: nothing to split off
    const auto pe = decompose(DistortionFn::es(0.8));
    CHECK(pe.h_c.same_function(DistortionFn::es(0.8)));
    const DistortionFn zero =
        DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}});
    CHECK(pe.h_l.same_function(zero));
    CHECK(pe.h_r.same_function(zero));

    // the step 1{t > 1-p} is a pure right jump
    const auto pv = decompose(DistortionFn::var(0.75));
    CHECK(pv.h_c.same_function(zero));
    CHECK(pv.h_l.same_function(zero));
    CHECK(pv.h_r.same_function(DistortionFn::var(0.75)));

    // a knot with left 0.3, value 0.5, right 0.7 carries both jump kinds
    const DistortionFn both = DistortionFn::from_knots(
        {{0.0, 0.0, 0.0, 0.0}, {0.5, 0.3, 0.5, 0.7}, {1.0, 1.0, 1.0, 1.0}});
    const auto pb = decompose(both);
    CHECK(pb.h_l(0.4) == doctest::Approx(0.0));
    CHECK(pb.h_l(0.5) == doctest::Approx(0.2));
    CHECK(pb.h_l(0.9) == doctest::Approx(0.2));
    CHECK(pb.h_r(0.5) == doctest::Approx(0.0));
    CHECK(pb.h_r.right_limit(0.5) == doctest::Approx(0.2));
    CHECK(pb.h_r(0.9) == doctest::Approx(0.2));

    // exact reconstruction at knots (all three one-sided readings) and between
    std::mt19937_64 rng(20260822);
    for (int trial = 0; trial < 200; ++trial) {
        const DistortionFn h = ts::gen_distortion(rng);
        const auto parts = decompose(h);
        for (const auto& k : h.knots()) {
            CHECK(parts.h_c(k.t) + parts.h_l(k.t) + parts.h_r(k.t) ==
                  doctest::Approx(k.value).epsilon(1e-12));
            CHECK(parts.h_c.left_limit(k.t) + parts.h_l.left_limit(k.t) +
                      parts.h_r.left_limit(k.t) ==
                  doctest::Approx(k.left).epsilon(1e-12));
            CHECK(parts.h_c.right_limit(k.t) + parts.h_l.right_limit(k.t) +
                      parts.h_r.right_limit(k.t) ==
                  doctest::Approx(k.right).epsilon(1e-12));
        }
        for (double t = 0.017; t < 1.0; t += 0.029)
            CHECK(parts.h_c(t) + parts.h_l(t) + parts.h_r(t) ==
                  doctest::Approx(h(t)).epsilon(1e-12));
    }
}

TEST_CASE("quantile functionals as integrals") {
    // the step weights reproduce the four tail functionals exactly,
    // pinning the one-sided jump conventions of the integral
    std::mt19937_64 rng(20260823);
    for (int trial = 0; trial < 120; ++trial) {
        const Plrv x = ts::gen_plrv(rng);
        const double p = ts::uniform(rng, 0.05, 0.95);
        CHECK(choquet(DistortionFn::var(p), x) ==
              doctest::Approx(quantile_left(x, p)).epsilon(1e-12));
        CHECK(choquet(DistortionFn::var_plus(p), x) ==
              doctest::Approx(quantile_right(x, p)).epsilon(1e-12));
        CHECK(choquet(DistortionFn::es(p), x) == doctest::Approx(es(x, p)).epsilon(1e-11));
        CHECK(choquet(DistortionFn::mean(), x) == doctest::Approx(mean(x)).epsilon(1e-11));
        CHECK(choquet(DistortionFn::ess_sup(), x) ==
              doctest::Approx(ess_sup(x)).epsilon(1e-12));
        CHECK(choquet(DistortionFn::var_plus(0.0), x) ==
              doctest::Approx(ess_inf(x)).epsilon(1e-12));
    }
}

TEST_CASE("worked ramp example") {
    const DistortionFn h = make_ramp_weight();
    const Plrv x = make_ramp_loss();
    const Plrv y = make_mirror_loss();

    CHECK(choquet(h, x) == doctest::Approx(2.375).epsilon(1e-9));
    CHECK(choquet(h, x + y) == doctest::Approx(4.125).epsilon(1e-9));

    // layered tail fixture under the expected-shortfall weight
    CHECK(choquet(DistortionFn::es(0.9), make_layered_loss()) ==
          doctest::Approx(2.5).epsilon(1e-9));
    CHECK(choquet(DistortionFn::es(0.95), make_layered_loss()) ==
          doctest::Approx(3.0).epsilon(1e-9));

    // brute-force value-axis integration lands on the same numbers
    CHECK(std::fabs(choquet_numeric(h, x, 1000000) - 2.375) < 1e-4);
    CHECK(std::fabs(choquet_numeric(h, x + y, 1000000) - 4.125) < 1e-4);
    CHECK(std::fabs(choquet_numeric(DistortionFn::es(0.9), make_layered_loss(), 1000000) -
                    2.5) < 1e-4);
}

TEST_CASE("integral laws") {
    std::mt19937_64 rng(20260824);
    for (int trial = 0; trial < 150; ++trial) {
        const DistortionFn h = ts::gen_distortion(rng);
        const Plrv x = ts::gen_plrv(rng);

        // positive homogeneity, including collapse to a constant
        for (double lam : {0.0, 0.3, 2.5})
            CHECK(choquet(h, x.scale_shift(lam, 0.0)) ==
                  doctest::Approx(lam * choquet(h, x)).epsilon(1e-9));

        // translation moves the value by c·h(1)
        const double c = ts::uniform(rng, -2.0, 2.0);
        CHECK(choquet(h, x.scale_shift(1.0, c)) ==
              doctest::Approx(choquet(h, x) + c * h.h1()).epsilon(1e-9));

        // constants evaluate to c·h(1) outright
        CHECK(choquet(h, Plrv::constant(c)) == doctest::Approx(c * h.h1()).epsilon(1e-12));

        // additivity across increasing rearrangements of the same scenario
        const Plrv u = ts::gen_increasing_plrv(rng);
        const Plrv v = ts::gen_increasing_plrv(rng);
        CHECK(choquet(h, u + v) ==
              doctest::Approx(choquet(h, u) + choquet(h, v)).epsilon(1e-9));

        // every weight is additive across the full index set
        CHECK(is_k_additive(h, ClosedSet::full()));
    }

    // increasing normalized weights respect pointwise dominance
    std::mt19937_64 rng2(20260825);
    for (int trial = 0; trial < 100; ++trial) {
        const DistortionFn h = ts::gen_increasing_distortion(rng2);
        const Plrv x = ts::gen_plrv(rng2);
        const Plrv y = x + ts::gen_plrv(rng2, 4, 0.0, 1.5);  // y >= x pointwise
        CHECK(choquet(h, x) <= choquet(h, y) + 1e-9);
    }

    // concave weights are convex as functionals (one direction of the law)
    std::mt19937_64 rng3(20260826);
    for (int trial = 0; trial < 100; ++trial) {
        const DistortionFn h =
            (trial % 3 == 0) ? DistortionFn::gini_shortfall(0.8, 0.25)
                             : ts::gen_concave_distortion(rng3);
        CHECK(is_concave(h));
        const Plrv x = ts::gen_plrv(rng3);
        const Plrv y = ts::gen_plrv(rng3);
        const double a = ts::uniform(rng3, 0.0, 1.0);
        const Plrv mix = x.scale_shift(a, 0.0) + y.scale_shift(1.0 - a, 0.0);
        CHECK(choquet(h, mix) <=
              a * choquet(h, x) + (1.0 - a) * choquet(h, y) + 1e-9);
    }
}

TEST_CASE("additivity decisions") {
    // mean-median deviation: additive exactly when 1/2 is an index point
    const DistortionFn md = DistortionFn::mean_median_dev();
    CHECK(is_k_additive(md, ClosedSet::point(0.5)));
    CHECK_FALSE(is_k_additive(md, ClosedSet::point(0.4)));

    // expected shortfall: the singleton at its level suffices
    CHECK(is_k_additive(DistortionFn::es(0.9), ClosedSet::point(0.9)));
    CHECK(is_k_additive(DistortionFn::es(0.9), ClosedSet::from_intervals({{0.5, 1.0}})));
    CHECK_FALSE(is_k_additive(DistortionFn::es(0.9), ClosedSet::point(0.89)));

    // value-at-risk needs the level approached from the left, never just hit
    const DistortionFn v = DistortionFn::var(0.8);
    CHECK_FALSE(is_k_additive(v, ClosedSet::point(0.8)));
    CHECK(is_k_additive(v, ClosedSet::from_intervals({{0.7, 0.8}})));
    CHECK_FALSE(is_k_additive(v, ClosedSet::from_intervals({{0.8, 0.9}})));

    // its right-continuous companion mirrors that
    const DistortionFn vp = DistortionFn::var_plus(0.8);
    CHECK_FALSE(is_k_additive(vp, ClosedSet::point(0.8)));
    CHECK(is_k_additive(vp, ClosedSet::from_intervals({{0.8, 0.9}})));
    CHECK_FALSE(is_k_additive(vp, ClosedSet::from_intervals({{0.7, 0.8}})));

    // essential supremum needs left accumulation at 1
    CHECK(is_k_additive(DistortionFn::ess_sup(), ClosedSet::from_intervals({{0.5, 1.0}})));
    CHECK_FALSE(is_k_additive(DistortionFn::ess_sup(), ClosedSet::point(1.0)));

    // Gini shortfall: smallest index set is the whole tail [α, 1]
    const DistortionFn gs = DistortionFn::gini_shortfall(0.9, 0.25);
    CHECK(is_k_additive(gs, ClosedSet::from_intervals({{0.9, 1.0}})));
    CHECK_FALSE(is_k_additive(gs, ClosedSet::from_intervals({{0.901, 1.0}})));
    CHECK_FALSE(is_k_additive(gs, ClosedSet::from_intervals({{0.9 + 1e-3, 1.0}})));

    // the power weight is additive only across the full set
    const DistortionFn mv = DistortionFn::maxvar(2.0);
    CHECK(is_k_additive(mv, ClosedSet::full()));
    std::mt19937_64 rng(20260827);
    for (int trial = 0; trial < 40; ++trial) {
        ClosedSet k = ts::gen_closedset(rng);
        if (k.equal_mod01(ClosedSet::full())) continue;
        CHECK_FALSE(is_k_additive(mv, k));
    }
}

TEST_CASE("additivity core") {
    // expected shortfall: a bare singleton, no accumulation demands
    const auto ce = additivity_core(DistortionFn::es(0.9));
    CHECK(ce.core.equal_mod01(ClosedSet::point(0.9)));
    CHECK(ce.flags.empty());

    const auto cm = additivity_core(DistortionFn::mean_median_dev());
    CHECK(cm.core.equal_mod01(ClosedSet::point(0.5)));
    CHECK(cm.flags.empty());

    // value-at-risk: the singleton plus left accumulation
    const auto cv = additivity_core(DistortionFn::var(0.7));
    CHECK(cv.core.equal_mod01(ClosedSet::point(0.7)));
    REQUIRE(cv.flags.size() == 1);
    CHECK(cv.flags[0].p == doctest::Approx(0.7));
    CHECK(cv.flags[0].left);

    const auto cvp = additivity_core(DistortionFn::var_plus(0.7));
    CHECK(cvp.core.equal_mod01(ClosedSet::point(0.7)));
    REQUIRE(cvp.flags.size() == 1);
    CHECK(cvp.flags[0].p == doctest::Approx(0.7));
    CHECK_FALSE(cvp.flags[0].left);

    // essential supremum: empty core, left accumulation at 1
    const auto cs = additivity_core(DistortionFn::ess_sup());
    CHECK(cs.core.is_empty());
    REQUIRE(cs.flags.size() == 1);
    CHECK(cs.flags[0].p == doctest::Approx(1.0));
    CHECK(cs.flags[0].left);

    const auto cg = additivity_core(DistortionFn::gini_shortfall(0.85, 0.3));
    CHECK(cg.core.equal_mod01(ClosedSet::from_intervals({{0.85, 1.0}})));
    CHECK(cg.flags.empty());

    const auto cx = additivity_core(DistortionFn::maxvar(3.0));
    CHECK(cx.core.equal_mod01(ClosedSet::full()));

    const auto cn = additivity_core(DistortionFn::mean());
    CHECK(cn.core.is_empty());
    CHECK(cn.flags.empty());

    // the law the core canonicalizes: containment + flags <=> additivity
    std::mt19937_64 rng(20260828);
    for (int trial = 0; trial < 500; ++trial) {
        const DistortionFn h = ts::gen_distortion(rng);
        const auto ac = additivity_core(h);
        const ClosedSet k = ts::gen_closedset(rng, 5);
        const bool via_core = ac.core.subset_mod01(k) && flags_satisfied(ac, k);
        CHECK(via_core == is_k_additive(h, k));
    }
}

TEST_CASE("concavity") {
    CHECK(is_concave(DistortionFn::mean()));
    CHECK(is_concave(DistortionFn::es(0.7)));
    CHECK(is_concave(DistortionFn::ess_sup()));
    CHECK(is_concave(DistortionFn::mean_median_dev()));
    CHECK(is_concave(DistortionFn::gini_shortfall(0.9, 0.25)));

    // t² as a single quadratic arc: convex, so rejected
    const DistortionFn sq =
        DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}, {-1.0});
    CHECK(sq(0.5) == doctest::Approx(0.25));
    CHECK_FALSE(is_concave(sq));

    // interior jumps of either kind are never concave
    CHECK_FALSE(is_concave(DistortionFn::var(0.6)));
    CHECK_FALSE(is_concave(DistortionFn::var_plus(0.6)));

    // a hump too strong for its ramp bends the derivative back up at the knot
    CHECK_FALSE(is_concave(DistortionFn::gini_shortfall(0.9, 3.0)));
}

TEST_CASE("oracle agreement") {
    // continuous weights on atomless variables: the trapezoid scan converges
    // cleanly, so the exact engine must sit within 1e-6 of it
    std::mt19937_64 rng(20260829);
    for (int trial = 0; trial < 12; ++trial) {
        const DistortionFn h = ts::gen_distortion(rng, /*with_jumps=*/false,
                                                  /*with_curvature=*/true);
        const Plrv x = ts::gen_atomless_plrv(rng);
        CHECK(std::fabs(choquet(h, x) - choquet_numeric(h, x, 1000000)) < 1e-6);
    }
}
