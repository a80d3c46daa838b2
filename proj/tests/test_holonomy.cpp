#include "charcalc/errors.hpp"
#include "charcalc/generators.hpp"
#include "charcalc/holonomy.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace charcalc;

namespace {

RealVec rv(std::initializer_list<Q> xs) { return RealVec(xs.begin(), xs.end()); }
RealVec fv(std::initializer_list<double> xs) {
    RealVec out;
    for (double x : xs) out.push_back(Real::from_double(x));
    return out;
}

gen::Rng rng_for(int salt) { return gen::Rng(gen::derive_seed(7007, salt)); }

const TrigForm kArea = TrigForm::basis(2, {0, 1});

PLLoop square(const Q& eps) { return PLLoop({rv({0, 0}), rv({eps, 0}), rv({eps, eps}), rv({0, eps}), rv({0, 0})}); }

/// Signed area of the triangle [a, b, c].
double tri_area(const RealVec& a, const RealVec& b, const RealVec& c) {
    const double bx = b[0].to_double() - a[0].to_double(), by = b[1].to_double() - a[1].to_double();
    const double cx = c[0].to_double() - a[0].to_double(), cy = c[1].to_double() - a[1].to_double();
    return 0.5 * (bx * cy - by * cx);
}

ChartBox box(const RealVec& p, double r) {
    ChartBox b;
    for (const auto& x : p) {
        b.lo.push_back(Real::from_double(x.to_double() - r));
        b.hi.push_back(Real::from_double(x.to_double() + r));
    }
    return b;
}

DiamondConfig small_diamond() {
    DiamondConfig c;
    c.x = fv({0.5, 0.5});
    c.x_prime = fv({0.52, 0.49});
    c.u = fv({0.51, 0.53});
    c.u0 = fv({0.48, 0.51});
    c.y = fv({0.7, 0.6});
    c.y_prime = fv({0.71, 0.62});
    c.v = fv({0.69, 0.63});
    c.v0 = fv({0.72, 0.58});
    c.chart_x = box(c.x, 0.2);
    c.chart_x_prime = box(c.x_prime, 0.2);
    c.chart_y = box(c.y, 0.2);
    c.chart_y_prime = box(c.y_prime, 0.2);
    return c;
}

}  // namespace

// ---- transport ------------------------------------------------------------------

TEST(Transport, ConstantPathKeepsState) {
    const DifferentialCharacter h = h_canonical(kArea);
    const TransportState s(h, Angle(Real(Q(1, 7))), rv({Q(1, 3), Q(1, 5)}));
    const TransportState t = transport(h, PLLoop({rv({Q(1, 3), Q(1, 5)})}), s);
    EXPECT_EQ(t.fiber_angle.value().exact(), Q(1, 7));
    EXPECT_EQ(t.current_point, s.current_point);
}

TEST(Transport, FlatHolonomyAdvancesFiber) {
    const DifferentialCharacter h = flat_character(2, 1, {Angle(Real(Q(1, 2))), Angle()});
    const TransportState s(h, Angle(), rv({0, 0}));
    const TransportState t = transport(h, PLLoop({rv({0, 0}), rv({1, 0})}), s);
    EXPECT_TRUE(t.fiber_angle.near(Angle(Real(Q(1, 2)))));
    EXPECT_TRUE(holonomy(h, PLLoop({rv({0, 0}), rv({1, 0})})).near(Angle(Real(Q(1, 2)))));
}

TEST(Transport, StartMismatchThrows) {
    const DifferentialCharacter h = h_canonical(kArea);
    const TransportState s(h, Angle(), rv({0, 0}));
    EXPECT_THROW(transport(h, PLLoop({rv({Q(1, 2), 0}), rv({1, 0})}), s), PathMismatch);
}

TEST(Transport, FunctorialAndEquivariant) {
    auto rng = rng_for(1);
    for (int c = 0; c < 30; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3));
        const DifferentialCharacter h = gen::character(rng, n, 1, c % 2 == 0);
        const RealVec p0 = gen::rational_vector(rng, n), p1 = gen::rational_vector(rng, n), p2 = gen::rational_vector(rng, n);
        const PLLoop a({p0, p1}), b({p1, p2}), ab({p0, p1, p2});
        const TransportState s(h, Angle(Real(gen::rational(rng))), p0);
        const TransportState two = transport(h, b, transport(h, a, s));
        const TransportState one = transport(h, ab, s);
        EXPECT_TRUE(two.fiber_angle.near(one.fiber_angle));
        const Angle shift(Real(gen::rational(rng)));
        const TransportState shifted = transport(h, ab, TransportState(h, s.fiber_angle + shift, p0));
        EXPECT_TRUE(shifted.fiber_angle.near(one.fiber_angle + shift, 1e-12));
    }
}

// ---- holonomy --------------------------------------------------------------------

TEST(Holonomy, FlatSmallSquareIsTrivial) {
    const DifferentialCharacter h = flat_character(2, 1, {Angle(Real(Q(1, 3))), Angle(Real(Q(2, 7)))});
    EXPECT_TRUE(holonomy(h, square(Q(1, 10))).near(Angle()));
}

TEST(Holonomy, SquareGolden) {
    const DifferentialCharacter h = h_canonical(kArea);
    const Angle a = holonomy(h, square(Q(1, 10)));
    EXPECT_TRUE(a.near(Angle(Real(Q(1, 100)))));
    const double quad = oracle::cube_integral(kArea, {0.0, 0.0}, {{0.1, 0.0}, {0.0, 0.1}});
    EXPECT_NEAR(quad, 0.01, 1e-15);
    EXPECT_TRUE(a.near(Angle(Real::from_double(quad))));
}

TEST(Holonomy, GeneratorLoopsReadStoredEntries) {
    const DifferentialCharacter h(kArea, {Angle(Real(Q(1, 4))), Angle(Real(Q(3, 8)))});
    EXPECT_TRUE(holonomy(h, PLLoop({rv({0, 0}), rv({1, 0})})).near(h.hol({0})));
    EXPECT_TRUE(holonomy(h, PLLoop({rv({0, 0}), rv({0, 1})})).near(h.hol({1})));
}

TEST(Holonomy, OpenPathThrows) {
    EXPECT_THROW(holonomy(h_canonical(kArea), PLLoop({rv({0, 0}), rv({Q(1, 2), 0})})), NotClosed);
}

TEST(Holonomy, ReconstructsTheCharacter) {
    auto rng = rng_for(2);
    for (int c = 0; c < 100; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3));
        const DifferentialCharacter h = gen::character(rng, n, 1, c % 2 == 0);
        const PLLoop loop = gen::pl_loop(rng, n, static_cast<int>(gen::integer(rng, 0, 4)), c % 3 == 0);
        EXPECT_TRUE(holonomy(h, loop).near(evaluate(h, loop), 1e-9));
    }
}

TEST(Holonomy, RectangleBoundariesMatchCurvatureQuadrature) {
    auto rng = rng_for(3);
    for (int c = 0; c < 30; ++c) {
        const DifferentialCharacter h = gen::character(rng, 2, 1, false);
        const double x0 = gen::uniform(rng, 0, 1), y0 = gen::uniform(rng, 0, 1);
        const double w = gen::uniform(rng, 0.05, 0.6), t = gen::uniform(rng, 0.05, 0.6);
        const PLLoop loop({fv({x0, y0}), fv({x0 + w, y0}), fv({x0 + w, y0 + t}), fv({x0, y0 + t}), fv({x0, y0})});
        const double quad = oracle::cube_integral(h.curvature(), {x0, y0}, {{w, 0.0}, {0.0, t}});
        EXPECT_TRUE(holonomy(h, loop).near(Angle(Real::from_double(quad)), 1e-9));
    }
}

TEST(Holonomy, BacktrackingIsInvisible) {
    auto rng = rng_for(4);
    for (int c = 0; c < 30; ++c) {
        const DifferentialCharacter h = gen::character(rng, 2, 1, false);
        const PLLoop loop = gen::pl_loop(rng, 2, 2, true);
        std::vector<RealVec> v = loop.vertices;
        const RealVec tip = {v[1][0] + Real::from_double(gen::uniform(rng, -0.3, 0.3)),
                             v[1][1] + Real::from_double(gen::uniform(rng, -0.3, 0.3))};
        v.insert(v.begin() + 2, {tip, v[1]});
        EXPECT_TRUE(holonomy(h, PLLoop(v)).near(holonomy(h, loop), 1e-12));
    }
}

// ---- diamond identity ------------------------------------------------------------

TEST(Diamond, DegenerateDiamondsVanish) {
    DiamondConfig c = small_diamond();
    c.u = c.x;
    c.u0 = c.x;
    c.x_prime = c.x;
    c.v = c.y;
    c.v0 = c.y;
    c.y_prime = c.y;
    const DiamondResult r = diamond_transition(h_canonical(kArea), c);
    EXPECT_TRUE(r.holonomy.near(Angle(), 1e-12));
    EXPECT_NEAR(r.integral.to_double(), 0.0, 1e-15);
}

TEST(Diamond, FlatCharacterVanishes) {
    const DifferentialCharacter h = flat_character(2, 1, {Angle(Real(Q(1, 3))), Angle(Real(Q(1, 9)))});
    const DiamondResult r = diamond_transition(h, small_diamond());
    EXPECT_TRUE(r.holonomy.near(Angle(), 1e-12));
    EXPECT_NEAR(r.integral.to_double(), 0.0, 1e-15);
}

TEST(Diamond, SmallDiamondsAgreeWithTriangleAreas) {
    const DiamondConfig c = small_diamond();
    const DiamondResult r = diamond_transition(h_canonical(kArea), c);
    const double areas = tri_area(c.x, c.u0, c.x_prime) + tri_area(c.x, c.x_prime, c.u) + tri_area(c.y, c.v, c.y_prime) +
                         tri_area(c.y, c.y_prime, c.v0);
    EXPECT_NEAR(r.integral.to_double(), areas, 1e-12);
    EXPECT_TRUE(r.holonomy.near(Angle(Real::from_double(areas)), 1e-9));
    EXPECT_TRUE(diamond_transition_check(h_canonical(kArea), c));
}

TEST(Diamond, CurvedPathBetweenCharts) {
    DiamondConfig c = small_diamond();
    c.gamma_interior = {fv({0.3, 0.9}), fv({1.2, 0.1})};
    auto rng = rng_for(5);
    for (int t = 0; t < 10; ++t) EXPECT_TRUE(diamond_transition_check(gen::character(rng, 2, 1, false), c));
}

TEST(Diamond, PointsOutsideChartsThrow) {
    DiamondConfig c = small_diamond();
    c.u = fv({0.9, 0.9});
    EXPECT_THROW(diamond_transition(h_canonical(kArea), c), PointsNotInChart);
}
