#include "charcalc/characters.hpp"
#include "charcalc/errors.hpp"
#include "charcalc/generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace charcalc;

namespace {

const TrigForm kArea = TrigForm::basis(2, {0, 1});

RealVec rv(std::initializer_list<Q> xs) { return RealVec(xs.begin(), xs.end()); }

Chain x_loop_at(const Q& y) { return Chain::of(BoxCell::cube(rv({0, y}), {rv({1, 0})})); }

Angle exact_angle(const Q& q) { return Angle(Real(q)); }

gen::Rng rng_for(int salt) { return gen::Rng(gen::derive_seed(7003, salt)); }

}  // namespace

TEST(Angle, ReducesModOne) {
    EXPECT_EQ(exact_angle(Q(5, 4)).value().exact(), Q(1, 4));
    EXPECT_EQ(exact_angle(Q(-1, 3)).value().exact(), Q(2, 3));
    EXPECT_TRUE(Angle(Real::from_double(0.999999999999)).near(exact_angle(0)));
    EXPECT_FALSE(exact_angle(Q(1, 3)).near(exact_angle(Q(1, 3) + Q(1, 1000000))));
}

// ---- evaluate -----------------------------------------------------------------

TEST(Evaluate, GeneratorReturnsStoredHolonomy) {
    const DifferentialCharacter h(kArea, {exact_angle(Q(1, 4)), exact_angle(Q(3, 5))});
    EXPECT_EQ(evaluate(h, Chain::of(BoxCell::generator(2, {0}))).value().exact(), Q(1, 4));
    EXPECT_EQ(evaluate(h, Chain::of(BoxCell::generator(2, {1}))).value().exact(), Q(3, 5));
}

TEST(Evaluate, XLoopAtOneThirdGolden) {
    // The cylinder sigma runs from the axis loop up to height 1/3, and the boundary
    // orientation makes its area integral -1/3 (checked by quadrature in the cycles tests).
    const DifferentialCharacter h = h_canonical(kArea);
    const Angle a = evaluate(h, x_loop_at(Q(1, 3)));
    ASSERT_TRUE(a.is_exact());
    EXPECT_EQ(a.value().exact(), Q(2, 3));
}

TEST(Evaluate, XLoopMatchesCylinderQuadrature) {
    const DifferentialCharacter h = h_canonical(kArea);
    for (const Q y : {Q(1, 7), Q(1, 3), Q(5, 6)}) {
        const double quad = oracle::cube_integral(kArea, {0.0, 0.0}, {{1.0, 0.0}, {0.0, to_double(y)}});
        // boundary(cylinder) = axis loop - loop at y, so h(loop at y) = -quad mod 1.
        EXPECT_TRUE(evaluate(h, x_loop_at(y)).near(Angle(Real::from_double(-quad)), 1e-12));
    }
}

TEST(Evaluate, AdditiveOnFormalSums) {
    auto rng = rng_for(1);
    for (int c = 0; c < 30; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3));
        const DifferentialCharacter h = gen::character(rng, n, 1);
        const PLLoop a = gen::pl_loop(rng, n, 2, false), b = gen::pl_loop(rng, n, 2, c % 2 == 1);
        const Angle sum = evaluate(h, a.to_chain() + b.to_chain());
        EXPECT_TRUE(sum.near(evaluate(h, a) + evaluate(h, b)));
        std::vector<RealVec> moved;
        for (const auto& v : b.vertices) {
            RealVec w = v;
            for (int i = 0; i < n; ++i) w[i] += a.vertices.front()[i] - b.vertices.front()[i];
            moved.push_back(w);
        }
        const PLLoop b_at_a(moved);
        EXPECT_TRUE(evaluate(h, a.concat(b_at_a)).near(evaluate(h, a) + evaluate(h, b_at_a)));
    }
}

TEST(Evaluate, CurvatureAxiomOnCylinders) {
    auto rng = rng_for(2);
    for (int c = 0; c < 30; ++c) {
        const DifferentialCharacter h = gen::character(rng, 2, 1);
        const Q hgt = gen::rational(rng, 5, 7);
        const BoxCell cyl = BoxCell::cube(gen::rational_vector(rng, 2), {rv({1, 0}), rv({0, hgt})});
        const double quad = oracle::cube_integral(h.curvature(), {cyl.base[0].to_double(), cyl.base[1].to_double()},
                                                  {{1.0, 0.0}, {0.0, to_double(hgt)}});
        EXPECT_TRUE(evaluate(h, boundary(Chain::of(cyl))).near(Angle(Real::from_double(quad)), 1e-9));
    }
}

TEST(Evaluate, DegreeMismatchThrows) {
    EXPECT_THROW(evaluate(h_canonical(kArea), Chain::of(BoxCell::generator(2, {0, 1}))), DegreeMismatch);
}

// ---- include_form ---------------------------------------------------------------

TEST(IncludeForm, ZeroIsTrivial) {
    EXPECT_TRUE(include_form(TrigForm(2, 1)).near(trivial_character(2, 1)));
}

TEST(IncludeForm, QuarterDy) {
    const DifferentialCharacter h = include_form(TrigForm::basis(2, {1}, QTwoPi(Q(1, 4))));
    EXPECT_TRUE(h.is_flat());
    EXPECT_EQ(h.hol({0}).value().exact(), Q(0));
    EXPECT_EQ(h.hol({1}).value().exact(), Q(1, 4));
}

TEST(IncludeForm, IntegralConstantsAreInTheKernel) {
    const TrigForm a = TrigForm::basis(3, {0}, QTwoPi(2)) + TrigForm::basis(3, {2}, QTwoPi(-3));
    EXPECT_TRUE(include_form(a).near(trivial_character(3, 1)));
}

TEST(IncludeForm, CurvatureIsDAndClassVanishes) {
    auto rng = rng_for(3);
    for (int c = 0; c < 30; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 1, 3)), k = static_cast<int>(gen::integer(rng, 0, n - 1));
        const TrigForm a = gen::form(rng, n, k);
        const DifferentialCharacter h = include_form(a);
        EXPECT_EQ(h.curvature(), exterior_d(a));
        EXPECT_EQ(characteristic_class(h), (CharClass{k + 1, std::vector<std::int64_t>(binomial(n, k + 1), 0)}));
    }
}

TEST(IncludeForm, HolonomyIsGeneratorQuadrature) {
    auto rng = rng_for(4);
    for (int c = 0; c < 20; ++c) {
        const int n = 2;
        const TrigForm a = gen::form(rng, n, 1) + TrigForm::basis(n, {1}, QTwoPi(gen::rational(rng)));
        const DifferentialCharacter h = include_form(a);
        for (int i = 0; i < n; ++i) {
            const double quad = oracle::cube_integral(a, {0.0, 0.0}, {oracle::unit(n, i)});
            EXPECT_TRUE(h.hol({i}).near(Angle(Real::from_double(quad)), 1e-9));
        }
    }
}

// ---- characteristic class ---------------------------------------------------------

TEST(CharacteristicClass, AreaFormHasClassOne) {
    EXPECT_EQ(characteristic_class(h_canonical(kArea)), (CharClass{2, {1}}));
}

TEST(CharacteristicClass, Additive) {
    auto rng = rng_for(5);
    for (int c = 0; c < 30; ++c) {
        const DifferentialCharacter a = gen::character(rng, 3, 1), b = gen::character(rng, 3, 1);
        const CharClass ca = characteristic_class(a), cb = characteristic_class(b), cs = characteristic_class(add(a, b));
        for (std::size_t i = 0; i < cs.coefficients.size(); ++i)
            EXPECT_EQ(cs.coefficients[i], ca.coefficients[i] + cb.coefficients[i]);
    }
}

TEST(CharacteristicClass, NonIntegralCurvatureRejected) {
    EXPECT_THROW(DifferentialCharacter(TrigForm::basis(2, {0, 1}, QTwoPi(Q(1, 2))), {Angle(), Angle()}),
                 NonIntegralCurvature);
    EXPECT_THROW(h_canonical(TrigForm::basis(2, {0}, TrigScalar::term({0, 1}, Phase::Cos, 1))), NotClosed);
}

// ---- group structure and splitting ----------------------------------------------

TEST(Group, InverseCancels) {
    auto rng = rng_for(6);
    for (int c = 0; c < 20; ++c) {
        const DifferentialCharacter h = gen::character(rng, 3, static_cast<int>(gen::integer(rng, 0, 2)));
        EXPECT_TRUE(add(h, negate(h)).near(trivial_character(3, h.degree())));
        EXPECT_TRUE(subtract(add(h, h), h).near(h));
    }
}

TEST(Group, FlatPartOfCanonicalIsZero) {
    const FlatSplit s = flat_part(h_canonical(kArea));
    EXPECT_TRUE(s.flat.near(trivial_character(2, 1)));
    EXPECT_TRUE(s.canonical.near(h_canonical(kArea)));
}

TEST(Group, CanonicalPlusFlatReconstructs) {
    auto rng = rng_for(7);
    for (int c = 0; c < 30; ++c) {
        const DifferentialCharacter h = gen::character(rng, 3, 1);
        const FlatSplit s = flat_part(h);
        EXPECT_TRUE(s.flat.is_flat());
        EXPECT_EQ(s.canonical.curvature(), h.curvature());
        EXPECT_TRUE(add(s.canonical, s.flat).near(h));
    }
}

TEST(Group, CanonicalHasGivenCurvature) {
    auto rng = rng_for(8);
    for (int c = 0; c < 20; ++c) {
        const TrigForm w = gen::integral_closed_form(rng, 3, 2);
        const DifferentialCharacter h = h_canonical(w);
        EXPECT_EQ(h.curvature(), w);
        for (const auto& J : increasing_tuples(3, 1)) EXPECT_TRUE(h.hol(J).near(Angle()));
    }
}

// ---- exact sequences ------------------------------------------------------------

TEST(ExactSequences, FlatCharactersKillBoundaries) {
    auto rng = rng_for(9);
    for (int c = 0; c < 20; ++c) {
        std::vector<Angle> hol;
        for (int i = 0; i < 3; ++i) hol.push_back(exact_angle(gen::rational(rng)));
        const DifferentialCharacter h = flat_character(3, 1, hol);
        const Chain ch = gen::small_chain(rng, 3, 2, false);
        EXPECT_TRUE(evaluate(h, boundary(ch)).near(Angle()));
    }
}

TEST(ExactSequences, ClassZeroMeansTopologicallyTrivial) {
    auto rng = rng_for(10);
    for (int c = 0; c < 20; ++c) {
        const int n = 3;
        const TrigForm a = gen::form(rng, n, 1) + TrigForm::basis(n, {2}, QTwoPi(gen::rational(rng)));
        const DifferentialCharacter h = include_form(a);
        const auto witness = as_form(h);
        ASSERT_TRUE(witness.has_value());
        const DifferentialCharacter back = include_form(*witness);
        for (const auto& J : increasing_tuples(n, 1)) EXPECT_TRUE(back.hol(J).near(h.hol(J)));
        EXPECT_EQ(back.curvature(), h.curvature());
    }
    EXPECT_FALSE(as_form(h_canonical(kArea)).has_value());
}

// ---- pullback -------------------------------------------------------------------

TEST(PullbackCharacter, AlongAxisInclusion) {
    // T^1 -> T^2, s -> (s, 1/4): the pulled-back flat character reads the x-holonomy.
    const DifferentialCharacter h = flat_character(2, 1, {exact_angle(Q(1, 5)), exact_angle(Q(2, 5))});
    const AffineMap F({{1}, {0}}, rv({0, Q(1, 4)}));
    const DifferentialCharacter g = pullback_character(h, F);
    EXPECT_EQ(g.hol({0}).value().exact(), Q(1, 5));
    EXPECT_TRUE(g.is_flat());
}
