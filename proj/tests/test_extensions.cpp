#include "charcalc/errors.hpp"
#include "charcalc/extensions.hpp"
#include "charcalc/generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace charcalc;

namespace {

RealVec rv(std::initializer_list<Q> xs) { return RealVec(xs.begin(), xs.end()); }

gen::Rng rng_for(int salt) { return gen::Rng(gen::derive_seed(7006, salt)); }

TrigScalar wave(const Freq& n, Phase p, const QTwoPi& c = QTwoPi(1)) { return TrigScalar::term(n, p, c); }

const TrigForm kArea = TrigForm::basis(2, {0, 1});
const TrigForm kVolume = TrigForm::basis(3, {0, 1, 2});
const TrigForm kOmegaT3 = TrigForm::basis(3, {0, 1}) + TrigForm::basis(3, {1, 2});
const AffineMap kZAxis({{0}, {0}, {1}}, rv({0, 0, 0}));
const TrigForm kOne1 = TrigForm::basis(1, {}, QTwoPi(1));

TrigField sin_y_dx() { return TrigField::basis(2, 0, wave({0, 1}, Phase::Sin)); }
TrigField sin_x_dy() { return TrigField::basis(2, 1, wave({1, 0}, Phase::Sin)); }

TrigField field3(int axis, const Freq& n, Phase p) { return TrigField::basis(3, axis, wave(n, p)); }

/// tau on the z-axis with beta = 1: integral over s of mu(X, Y, e_z) at (0, 0, s).
double tau_quadrature(const TrigField& X, const TrigField& Y) {
    return oracle::trapezoid(1, 256, [&](const oracle::Point& s) {
        const oracle::Point p{0, 0, s[0]};
        return oracle::apply(kVolume, p, {oracle::field_at(X, p), oracle::field_at(Y, p), oracle::unit(3, 2)});
    });
}

}  // namespace

// ---- hat fields ---------------------------------------------------------------

TEST(MakeHat, ZeroField) {
    const HatField a = make_hat(kArea, TrigField(2));
    EXPECT_TRUE(a.X.is_zero());
    EXPECT_TRUE(a.psi.is_zero());
}

TEST(MakeHat, SinYDxGolden) {
    const HatField a = make_hat(kArea, sin_y_dx());
    // -cos(2 pi y) / (2 pi).
    EXPECT_EQ(a.psi, TrigForm::from_scalar(wave({0, 1}, Phase::Cos, QTwoPi::monomial(-1, -1))));
    // Independent check: i_X (dx ^ dy) = sin(2 pi y) dy, and 1-periodic differentiation of psi.
    for (double y : {0.1, 0.37, 0.8})
        EXPECT_NEAR(oracle::partial([&](const oracle::Point& p) { return oracle::coeff_at(a.psi, {}, p); }, {0.3, y}, 1),
                    std::sin(oracle::two_pi() * y), 1e-8);
}

TEST(MakeHat, ClassIgnoresExactPerturbations) {
    auto rng = rng_for(1);
    for (int c = 0; c < 20; ++c) {
        const TrigField X = gen::curl_t3(rng);
        const HatField a = make_hat(kVolume, X);
        const HatField b = HatField::make(kVolume, X, a.psi + exterior_d(TrigForm::from_scalar(gen::scalar(rng, 3))));
        EXPECT_EQ(b.psi_class, a.psi_class);
        EXPECT_TRUE(hat_equal(a, b));
    }
}

TEST(MakeHat, Preconditions) {
    EXPECT_THROW(make_hat(kArea, TrigField::basis(2, 0, TrigScalar::constant(2, 1))), NotExactField);
    EXPECT_THROW(make_hat(kArea, TrigField::basis(2, 0, wave({1, 0}, Phase::Cos))), NotSymmetryField);
    EXPECT_THROW(HatField::make(kArea, sin_y_dx(), TrigForm(2, 0)), InvalidArgument);
}

// ---- bracket ------------------------------------------------------------------

TEST(HatBracket, Golden) {
    const HatField a = make_hat(kArea, sin_y_dx()), b = make_hat(kArea, sin_x_dy());
    const HatField c = hat_bracket(kArea, a, b);
    const QTwoPi two_pi = QTwoPi::monomial(1, 1);
    const TrigField expected = TrigField::basis(2, 1, wave({1, 1}, Phase::Sin, two_pi * Q(1, 2)) +
                                                          wave({1, -1}, Phase::Sin, two_pi * Q(-1, 2))) +
                               TrigField::basis(2, 0, wave({1, 1}, Phase::Sin, two_pi * Q(-1, 2)) +
                                                          wave({1, -1}, Phase::Sin, two_pi * Q(-1, 2)));
    EXPECT_EQ(c.X, expected);
    // i_a i_b (dx ^ dy) = -sin(2 pi x) sin(2 pi y), already coexact.
    const TrigForm psi = TrigForm::from_scalar(wave({1, 1}, Phase::Cos, Q(1, 2)) + wave({1, -1}, Phase::Cos, Q(-1, 2)));
    EXPECT_EQ(c.psi_class, psi);
    for (const auto& p : std::vector<oracle::Point>{{0.1, 0.2}, {0.7, 0.45}}) {
        EXPECT_NEAR(oracle::coeff_at(c.psi_class, {}, p),
                    -std::sin(oracle::two_pi() * p[0]) * std::sin(oracle::two_pi() * p[1]), 1e-12);
        const double tp = oracle::two_pi();
        EXPECT_NEAR(c.X[1].eval(p), tp * std::sin(tp * p[1]) * std::cos(tp * p[0]), 1e-12);
        EXPECT_NEAR(c.X[0].eval(p), -tp * std::sin(tp * p[0]) * std::cos(tp * p[1]), 1e-12);
    }
}

TEST(HatBracket, SelfBracketAndCentrality) {
    auto rng = rng_for(2);
    for (int c = 0; c < 20; ++c) {
        const HatField a = make_hat(kOmegaT3, gen::hamiltonian_t3(rng));
        const HatField s = hat_bracket(kOmegaT3, a, a);
        EXPECT_TRUE(s.X.is_zero());
        EXPECT_TRUE(s.psi_class.is_zero());
        const HatField z = HatField::central(kOmegaT3, TrigForm::from_scalar(TrigScalar::constant(3, gen::rational(rng))));
        const HatField za = hat_bracket(kOmegaT3, z, a);
        EXPECT_TRUE(za.X.is_zero());
        EXPECT_TRUE(za.psi_class.is_zero());
    }
}

TEST(Jacobi, ExampleTriple) {
    const TrigField c_dir = TrigField::basis(2, 0, wave({1, 1}, Phase::Sin)) - TrigField::basis(2, 1, wave({1, 1}, Phase::Sin));
    const HatField a = make_hat(kArea, sin_y_dx()), b = make_hat(kArea, sin_x_dy()), c = make_hat(kArea, c_dir);
    EXPECT_TRUE(jacobi_check(kArea, a, b, c));
    EXPECT_TRUE(jacobi_check(kArea, a, b, make_hat(kArea, TrigField(2))));
}

TEST(Jacobi, RandomTriplesOnT3) {
    auto rng = rng_for(3);
    for (int c = 0; c < 25; ++c) {
        const HatField a = make_hat(kOmegaT3, gen::hamiltonian_t3(rng)), b = make_hat(kOmegaT3, gen::hamiltonian_t3(rng));
        const HatField d = make_hat(kOmegaT3, gen::hamiltonian_t3(rng));
        EXPECT_TRUE(jacobi_check(kOmegaT3, a, b, d));
    }
}

// ---- tau, nu, kappa ----------------------------------------------------------

TEST(Tau, LichnerowiczCoordinateFields) {
    const TrigField X = field3(0, {0, 0, 0}, Phase::Cos), Y = field3(1, {0, 0, 0}, Phase::Cos);
    EXPECT_EQ(tau_cocycle(kVolume, kOne1, kZAxis, X, Y), QTwoPi(1));
    EXPECT_NEAR(tau_quadrature(X, Y), 1.0, 1e-12);
    EXPECT_TRUE(tau_cocycle(kVolume, kOne1, kZAxis, X, X).is_zero());
}

TEST(Tau, ModulatedFieldsAgreeWithQuadrature) {
    const TrigField X = field3(0, {0, 0, 1}, Phase::Sin), Y = field3(1, {0, 0, 1}, Phase::Sin);
    EXPECT_EQ(tau_cocycle(kVolume, kOne1, kZAxis, X, Y), QTwoPi(Q(1, 2)));
    EXPECT_NEAR(tau_quadrature(X, Y), 0.5, 1e-12);
    auto rng = rng_for(4);
    for (int c = 0; c < 20; ++c) {
        const TrigField U = gen::curl_t3(rng), V = gen::curl_t3(rng);
        EXPECT_NEAR(tau_cocycle(kVolume, kOne1, kZAxis, U, V).to_double(), tau_quadrature(U, V), 1e-9);
    }
}

TEST(Tau, CocycleIdentityOnExactFields) {
    auto rng = rng_for(5);
    for (int c = 0; c < 20; ++c) {
        const TrigField X = gen::curl_t3(rng), Y = gen::curl_t3(rng), Z = gen::curl_t3(rng);
        const auto tau = [&](const TrigField& a, const TrigField& b) { return tau_cocycle(kVolume, kOne1, kZAxis, a, b); };
        EXPECT_TRUE((tau(bracket_fields(X, Y), Z) + tau(bracket_fields(Y, Z), X) + tau(bracket_fields(Z, X), Y)).is_zero());
    }
}

TEST(Tau, DegreeMismatch) {
    EXPECT_THROW(tau_cocycle(kVolume, TrigForm::basis(1, {0}), kZAxis, TrigField(3), TrigField(3)), DegreeMismatch);
}

TEST(Nu, LichnerowiczExamples) {
    const AffineMap id = AffineMap::identity(3);
    const TrigForm alpha = TrigForm::basis(3, {0, 1});
    const TrigField u = field3(0, {0, 0, 1}, Phase::Sin);
    const TrigField v_cos = field3(1, {0, 0, 1}, Phase::Cos), v_sin = field3(1, {0, 0, 1}, Phase::Sin);
    EXPECT_EQ(nu_cocycle(alpha, kVolume, id, u, v_cos), QTwoPi(0));
    EXPECT_EQ(nu_cocycle(alpha, kVolume, id, u, v_sin), QTwoPi(Q(1, 2)));
    EXPECT_TRUE(nu_cocycle(alpha, kVolume, id, u, u).is_zero());
    const auto quad = [&](const TrigField& a, const TrigField& b) {
        return oracle::trapezoid(3, 8, [&](const oracle::Point& p) {
            return oracle::apply(alpha, p, {oracle::field_at(a, p), oracle::field_at(b, p)});
        });
    };
    EXPECT_NEAR(quad(u, v_cos), 0.0, 1e-12);
    EXPECT_NEAR(quad(u, v_sin), 0.5, 1e-12);
}

TEST(Nu, AgreesWithQuadratureOnVolumeFields) {
    auto rng = rng_for(6);
    const TrigForm alpha = TrigForm::basis(3, {0, 1});
    for (int c = 0; c < 10; ++c) {
        const TrigField u = gen::curl_t3(rng), v = gen::curl_t3(rng);
        const double quad = oracle::trapezoid(3, 12, [&](const oracle::Point& p) {
            return oracle::apply(alpha, p, {oracle::field_at(u, p), oracle::field_at(v, p)});
        });
        EXPECT_NEAR(nu_cocycle(alpha, kVolume, AffineMap::identity(3), u, v).to_double(), quad, 1e-9);
    }
}

TEST(Kappa, ConstantMapVanishes) {
    const AffineMap xy({{1, 0}, {0, 1}, {0, 0}}, rv({0, 0, 0}));
    const CircleMap F{{0, 0}, TrigScalar(2)};
    EXPECT_TRUE(kappa_cocycle(kVolume, xy, F, field3(2, {0, 1, 0}, Phase::Sin), field3(0, {0, 1, 0}, Phase::Sin)).is_zero());
}

TEST(Kappa, WindingAlongXAgreesWithQuadrature) {
    const AffineMap xy({{1, 0}, {0, 1}, {0, 0}}, rv({0, 0, 0}));
    const CircleMap F{{1, 0}, TrigScalar(2)};
    const auto quad = [&](const TrigField& X, const TrigField& Y) {
        // (Psi^* mu(X, Y, .) ^ dF)(e1, e2) with dF = ds1.
        return oracle::trapezoid(2, 16, [&](const oracle::Point& s) {
            const oracle::Point p{s[0], s[1], 0};
            const auto x = oracle::field_at(X, p), y = oracle::field_at(Y, p);
            return -oracle::apply(kVolume, p, {x, y, oracle::unit(3, 1)});
        });
    };
    const TrigField X = field3(2, {0, 1, 0}, Phase::Sin), Y = field3(0, {0, 1, 0}, Phase::Sin);
    EXPECT_EQ(kappa_cocycle(kVolume, xy, F, X, Y), QTwoPi(Q(-1, 2)));
    EXPECT_NEAR(quad(X, Y), -0.5, 1e-12);
    auto rng = rng_for(7);
    for (int c = 0; c < 10; ++c) {
        const TrigField U = gen::curl_t3(rng), V = gen::curl_t3(rng);
        const QTwoPi k = kappa_cocycle(kVolume, xy, F, U, V);
        EXPECT_NEAR(k.to_double(), quad(U, V), 1e-9);
        EXPECT_EQ(k, -kappa_cocycle(kVolume, xy, F, V, U));
    }
}

TEST(Kappa, InducedFunctional) {
    const AffineMap xy({{1, 0}, {0, 1}, {0, 0}}, rv({0, 0, 0}));
    EXPECT_EQ(kappa_functional(kVolume, xy, CircleMap{{1, 0}, TrigScalar(2)}), (std::vector<QTwoPi>{0, -1, 0}));
    EXPECT_EQ(kappa_functional(kVolume, xy, CircleMap{{0, 1}, TrigScalar(2)}), (std::vector<QTwoPi>{1, 0, 0}));
}

// ---- trivializing cochains ---------------------------------------------------

TEST(Sigma, CentralPairing) {
    EXPECT_EQ(sigma_beta(kOne1, kZAxis, HatField::central(kVolume, TrigForm::basis(3, {2}))), QTwoPi(1));
    EXPECT_EQ(sigma_beta(kOne1, kZAxis, HatField::central(kVolume, TrigForm::basis(3, {0}))), QTwoPi(0));
    EXPECT_TRUE(sigma_beta(kOne1, kZAxis, make_hat(kVolume, TrigField(3))).is_zero());
}

TEST(Sigma, WellDefinedOnClasses) {
    auto rng = rng_for(8);
    for (int c = 0; c < 20; ++c) {
        const HatField a = make_hat(kVolume, gen::curl_t3(rng));
        const HatField b = HatField::make(kVolume, a.X, a.psi + exterior_d(TrigForm::from_scalar(gen::scalar(rng, 3))));
        const AffineMap phi(gen::int_matrix(rng, 3, 1), gen::quarter_vector(rng, 3));
        EXPECT_EQ(sigma_beta(kOne1, phi, a), sigma_beta(kOne1, phi, b));
        EXPECT_EQ(sigma_beta(kOne1, kZAxis, a), sigma_beta(kOne1, kZAxis, b));
    }
}

TEST(Dce, TauAndNuIdentities) {
    auto rng = rng_for(9);
    for (int c = 0; c < 25; ++c) {
        const TrigField X = gen::curl_t3(rng), Y = gen::curl_t3(rng);
        const DceResult t = dce_check_tau(kVolume, kOne1, kZAxis, X, Y);
        EXPECT_TRUE(t.equal()) << t.cocycle.to_string() << " vs " << t.coboundary.to_string();
        const DceResult n = dce_check_nu(TrigForm::basis(3, {0, 1}), kVolume, AffineMap::identity(3), X, Y);
        EXPECT_TRUE(n.equal()) << n.cocycle.to_string() << " vs " << n.coboundary.to_string();
    }
    const TrigField X = field3(0, {0, 0, 1}, Phase::Sin);
    EXPECT_TRUE(dce_check_tau(kVolume, kOne1, kZAxis, X, X).cocycle.is_zero());
    EXPECT_TRUE(dce_check_tau(kVolume, kOne1, kZAxis, X, X).coboundary.is_zero());
}

// ---- lambda extensions -------------------------------------------------------

TEST(Xi, ZeroFunctionalGivesZeroTable) {
    auto rng = rng_for(10);
    std::vector<TrigField> fields;
    for (int i = 0; i < 4; ++i) fields.push_back(gen::curl_t3(rng));
    const CocycleValueTable t = xi_extension(kVolume, Functional{1, {0, 0, 0}, std::nullopt}, fields);
    EXPECT_EQ(t.pairs.size(), 6u);
    for (const auto& v : t.values) EXPECT_TRUE(v.is_zero());
}

TEST(Xi, ZPairingMatchesMeanOfContraction) {
    auto rng = rng_for(11);
    std::vector<TrigField> fields;
    for (int i = 0; i < 4; ++i) fields.push_back(gen::curl_t3(rng));
    const CocycleValueTable t = xi_extension(kVolume, Functional{1, {0, 0, 1}, std::nullopt}, fields);
    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
        const auto& [i, j] = t.pairs[p];
        // psi of the bracket is i_v i_w mu = mu(w, v, .); its dz harmonic coefficient is the mean of the z slot.
        const double mean = oracle::trapezoid(3, 12, [&](const oracle::Point& x) {
            return oracle::apply(kVolume, x, {oracle::field_at(fields[j], x), oracle::field_at(fields[i], x), oracle::unit(3, 2)});
        });
        EXPECT_NEAR(t.values[p].to_double(), mean, 1e-9);
    }
}

TEST(Xi, DependsOnlyOnHarmonicRestriction) {
    auto rng = rng_for(12);
    std::vector<TrigField> fields;
    for (int i = 0; i < 4; ++i) fields.push_back(gen::curl_t3(rng));
    const Functional l1{1, {1, 0, Q(1, 2)}, std::nullopt};
    const Functional l2{1, {1, 0, Q(1, 2)}, gen::form(rng, 3, 1)};
    EXPECT_TRUE(xi_restriction_check(kVolume, l1, l2, fields));
}

// ---- Poincare duality comparison ----------------------------------------------

TEST(PdCompare, ZAxisAgainstAreaForm) {
    const TrigForm omega = TrigForm::basis(3, {0, 1});
    const PdResult r = pd_compare(kZAxis, 1, omega, QTwoPi(1));
    EXPECT_EQ(r.lambda_tau, (std::vector<QTwoPi>{0, 0, 1}));
    EXPECT_EQ(r.lambda_nu, (std::vector<QTwoPi>{0, 0, 1}));
    EXPECT_TRUE(r.equal());
    EXPECT_FALSE(pd_compare(kZAxis, 1, -omega, QTwoPi(1)).equal());
    EXPECT_FALSE(pd_compare(kZAxis, 1, omega, QTwoPi(2)).equal());
    EXPECT_TRUE(pd_compare(kZAxis, 2, omega, QTwoPi(2)).equal());
}

TEST(PdCompare, IndependentIntegrals) {
    // lambda_nu([a]) = k * integral of omega ^ a by quadrature on the harmonic basis.
    const TrigForm omega = TrigForm::basis(3, {0, 1}) + TrigForm::basis(3, {0, 2}, QTwoPi(2));
    const PdResult r = pd_compare(kZAxis, 1, omega, QTwoPi(1));
    for (int i = 0; i < 3; ++i) {
        const TrigForm a = TrigForm::basis(3, {i});
        const double vol = oracle::trapezoid(3, 2, [&](const oracle::Point& x) {
            // (omega ^ a)(e1, e2, e3) expanded over the slot of a.
            double s = 0;
            const oracle::Vec e[3] = {oracle::unit(3, 0), oracle::unit(3, 1), oracle::unit(3, 2)};
            s += oracle::apply(omega, x, {e[0], e[1]}) * oracle::apply(a, x, {e[2]});
            s -= oracle::apply(omega, x, {e[0], e[2]}) * oracle::apply(a, x, {e[1]});
            s += oracle::apply(omega, x, {e[1], e[2]}) * oracle::apply(a, x, {e[0]});
            return s;
        });
        EXPECT_NEAR(r.lambda_nu[i].to_double(), vol, 1e-12);
        EXPECT_NEAR(r.lambda_tau[i].to_double(), i == 2 ? 1.0 : 0.0, 1e-12);
    }
}

// ---- volume positivity ------------------------------------------------------

TEST(PositiveVolume, Examples) {
    EXPECT_TRUE(is_positive_volume(kVolume));
    EXPECT_FALSE(is_positive_volume(-kVolume));
    EXPECT_TRUE(is_positive_volume(TrigForm::basis(3, {0, 1, 2}, TrigScalar::constant(3, 1) + wave({1, 0, 0}, Phase::Cos, Q(1, 2)))));
    EXPECT_FALSE(is_positive_volume(TrigForm::basis(3, {0, 1, 2}, TrigScalar::constant(3, 1) + wave({1, 0, 0}, Phase::Cos, 2))));
    EXPECT_TRUE(is_positive_volume(TrigForm::basis(3, {0, 1, 2}, TrigScalar::constant(3, 1) + wave({0, 1, 0}, Phase::Sin, QTwoPi::monomial(1, Q(1, 7))))));
    EXPECT_FALSE(is_positive_volume(TrigForm::basis(3, {0, 1, 2}, TrigScalar::constant(3, 1) + wave({0, 1, 0}, Phase::Sin, QTwoPi::monomial(1, Q(1, 6))))));
    EXPECT_THROW(is_positive_volume(TrigForm::basis(3, {0, 1})), DegreeMismatch);
}
