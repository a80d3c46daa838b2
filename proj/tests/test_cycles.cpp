#include "charcalc/cycles.hpp"
#include "charcalc/errors.hpp"
#include "charcalc/generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace charcalc;

namespace {

const TrigForm kArea = TrigForm::basis(2, {0, 1});

RealVec rv(std::initializer_list<Q> xs) { return RealVec(xs.begin(), xs.end()); }

std::vector<double> doubles(const RealVec& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.to_double());
    return out;
}

/// Quadrature over every cube cell of the chain; simplices are not used here.
double chain_quadrature(const TrigForm& f, const Chain& c) {
    double s = 0;
    for (const auto& [coeff, cell] : c.cells()) {
        EXPECT_EQ(cell.shape, CellShape::Cube);
        std::vector<oracle::Vec> cols;
        for (const auto& col : cell.columns) cols.push_back(doubles(col));
        s += static_cast<double>(coeff) * cell.orientation * oracle::cube_integral(f, doubles(cell.base), cols);
    }
    return s;
}

Chain x_loop_at(const Q& y) { return Chain::of(BoxCell::cube(rv({0, y}), {rv({1, 0})})); }

gen::Rng rng_for(int salt) { return gen::Rng(gen::derive_seed(7002, salt)); }

}  // namespace

// ---- boundary ----------------------------------------------------------------

TEST(Boundary, ClosedSubTorusHasNoBoundary) {
    EXPECT_TRUE(boundary(Chain::of(BoxCell::generator(3, {0, 2}))).is_zero());
    EXPECT_TRUE(boundary(Chain::of(BoxCell::cube(rv({0, 0}), {rv({1, 0}), rv({0, 1})}))).is_zero());
}

TEST(Boundary, CylinderGolden) {
    // Faces by hand: +bottom loop, -top loop; the two vertical sides are identified and cancel.
    const Chain cyl = Chain::of(BoxCell::cube(rv({0, 0}), {rv({1, 0}), rv({0, Q(1, 3)})}));
    const Chain expected = x_loop_at(0) - x_loop_at(Q(1, 3));
    EXPECT_TRUE(boundary(cyl).equals(expected));
}

TEST(Boundary, UnitIntervalEndpoints) {
    const Chain seg = Chain::of(BoxCell::segment(rv({0, 0}), rv({Q(1, 2), 0})));
    const Chain b = boundary(seg);
    ASSERT_EQ(b.cells().size(), 2u);
    std::int64_t total = 0;
    for (const auto& [c, cell] : b.cells()) total += c * cell.orientation;
    EXPECT_EQ(total, 0);
}

TEST(Boundary, SquaresToZeroOnRandomChains) {
    auto rng = rng_for(1);
    for (int c = 0; c < 50; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3)), k = static_cast<int>(gen::integer(rng, 2, n));
        const Chain ch = gen::small_chain(rng, n, k, c % 2 == 1);
        EXPECT_TRUE(boundary(boundary(ch)).is_zero());
    }
}

TEST(Boundary, BoundariesAreNullHomologous) {
    auto rng = rng_for(2);
    for (int c = 0; c < 50; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3)), k = static_cast<int>(gen::integer(rng, 1, n));
        const Chain ch = gen::small_chain(rng, n, k, false);
        EXPECT_EQ(homology_class(boundary(ch)), HomologyClass::zero(n, k - 1));
    }
}

// ---- homology_class and winding ---------------------------------------------

TEST(HomologyClassTest, Examples) {
    EXPECT_EQ(homology_class(x_loop_at(0)).coefficients, (std::vector<std::int64_t>{1, 0}));
    EXPECT_EQ(homology_class(x_loop_at(0) - x_loop_at(Q(2, 5))), HomologyClass::zero(2, 1));
    const Chain diag = Chain::of(BoxCell::cube(rv({0, 0}), {rv({1, 1})}));
    const HomologyClass cls = homology_class(diag);
    EXPECT_EQ(cls.coefficients, (std::vector<std::int64_t>{1, 1}));
    EXPECT_EQ(cls, winding(PLLoop({rv({0, 0}), rv({1, 1})})));
}

TEST(HomologyClassTest, OpenChainIsRejected) {
    EXPECT_THROW(homology_class(Chain::of(BoxCell::segment(rv({0, 0}), rv({Q(1, 2), 0})))), NotACycle);
}

TEST(HomologyClassTest, TranslationInvariant) {
    auto rng = rng_for(3);
    for (int c = 0; c < 50; ++c) {
        const int n = 3, k = static_cast<int>(gen::integer(rng, 1, 3));
        Chain z(n, k);
        const auto tuples = increasing_tuples(n, k);
        for (int t = 0; t < 3; ++t) {
            BoxCell g = BoxCell::generator(n, tuples[gen::integer(rng, 0, static_cast<std::int64_t>(tuples.size()) - 1)]);
            g.base = gen::rational_vector(rng, n);
            z.add(gen::integer(rng, -2, 2), g);
        }
        EXPECT_EQ(homology_class(translate(z, gen::rational_vector(rng, n))), homology_class(z));
    }
}

TEST(Winding, Examples) {
    EXPECT_EQ(winding(PLLoop({rv({Q(1, 3), Q(1, 5)})})), HomologyClass::zero(2, 1));
    EXPECT_EQ(winding(PLLoop({rv({0, 0, 0}), rv({1, 0, 0})})).coefficients, (std::vector<std::int64_t>{1, 0, 0}));
    const PLLoop a({rv({0, 0}), rv({Q(1, 2), Q(1, 2)}), rv({1, 0})});
    const PLLoop b({rv({0, 0}), rv({0, -1})});
    EXPECT_EQ(winding(a.concat(b)).coefficients, (std::vector<std::int64_t>{1, -1}));
    EXPECT_EQ(winding(a.reversed()).coefficients, (std::vector<std::int64_t>{-1, 0}));
    EXPECT_THROW(winding(PLLoop({rv({0, 0}), rv({Q(1, 2), 0})})), NotClosed);
}

// ---- bounding_chain ----------------------------------------------------------

TEST(BoundingChain, GeneratorNeedsNoFilling) {
    const BoundingChain bc = bounding_chain(Chain::of(BoxCell::generator(2, {1})));
    EXPECT_EQ(bc.cls.coefficients, (std::vector<std::int64_t>{0, 1}));
    EXPECT_TRUE(bc.sigma.is_zero());
}

TEST(BoundingChain, XLoopAtOneThird) {
    const Chain z = x_loop_at(Q(1, 3));
    const BoundingChain bc = bounding_chain(z);
    EXPECT_EQ(bc.cls.coefficients, (std::vector<std::int64_t>{1, 0}));
    EXPECT_TRUE(boundary(bc.sigma).equals(z - generator_chain(bc.cls)));
    // Quadrature over the cylinder is the oracle; the sign follows from the boundary orientation.
    const double quad = chain_quadrature(kArea, bc.sigma);
    EXPECT_NEAR(quad, -1.0 / 3.0, 1e-12);
    const Real exact = integrate_chain(kArea, bc.sigma);
    ASSERT_TRUE(exact.is_exact());
    EXPECT_EQ(exact.exact(), Q(-1, 3));
}

TEST(BoundingChain, DiagonalPLLoop) {
    const PLLoop diag({rv({0, 0}), rv({1, 1})});
    const BoundingChain bc = bounding_chain(diag);
    EXPECT_EQ(bc.cls.coefficients, (std::vector<std::int64_t>{1, 1}));
    EXPECT_TRUE(boundary(bc.sigma).equals(diag.to_chain() - generator_chain(bc.cls)));
}

TEST(BoundingChain, RandomPLLoopsAgreeWithHomologyClass) {
    auto rng = rng_for(4);
    for (int c = 0; c < 50; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3));
        const PLLoop loop = gen::pl_loop(rng, n, static_cast<int>(gen::integer(rng, 0, 3)), c % 2 == 1);
        const BoundingChain bc = bounding_chain(loop);
        EXPECT_EQ(bc.cls, winding(loop));
        EXPECT_EQ(bc.cls, homology_class(loop.to_chain()));
        EXPECT_TRUE(boundary(bc.sigma).equals(loop.to_chain() - generator_chain(bc.cls)));
    }
}

TEST(BoundingChain, TranslatedSubToriInHigherDegree) {
    auto rng = rng_for(5);
    for (int c = 0; c < 30; ++c) {
        const int n = 3, k = 2;
        Chain z(n, k);
        for (const auto& J : increasing_tuples(n, k)) {
            BoxCell g = BoxCell::generator(n, J);
            g.base = gen::rational_vector(rng, n);
            z.add(gen::integer(rng, -2, 2), g);
        }
        const BoundingChain bc = bounding_chain(z);
        EXPECT_EQ(bc.cls, homology_class(z));
        EXPECT_TRUE(boundary(bc.sigma).equals(z - generator_chain(bc.cls)));
    }
}

TEST(BoundingChain, ShearedSurfaceIsUnsupported) {
    const Chain z = Chain::of(BoxCell::cube(rv({0, 0, 0}), {rv({1, 1, 0}), rv({0, 0, 1})}));
    EXPECT_THROW(bounding_chain(z), Unsupported);
}

// ---- integration over chains -------------------------------------------------

TEST(IntegrateChain, AgreesWithQuadratureOnCubes) {
    auto rng = rng_for(6);
    for (int c = 0; c < 20; ++c) {
        const int n = static_cast<int>(gen::integer(rng, 2, 3)), k = static_cast<int>(gen::integer(rng, 1, 2));
        const TrigForm f = gen::form(rng, n, k, 2, 1);
        std::vector<RealVec> cols;
        for (int j = 0; j < k; ++j) cols.push_back(gen::rational_vector(rng, n, 3));
        const BoxCell cell = BoxCell::cube(gen::rational_vector(rng, n), cols);
        if (cell.is_degenerate()) continue;
        const Chain ch = Chain::of(cell);
        EXPECT_NEAR(integrate_chain(f, ch).to_double(), chain_quadrature(f, ch), 1e-8);
    }
}
