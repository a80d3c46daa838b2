#include "charcalc/suites.hpp"

#include "charcalc/errors.hpp"
#include "charcalc/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace charcalc {

void PropertyResult::record(bool ok, const std::string& what, double error) {
    ++cases;
    max_error = std::max(max_error, error);
    if (!ok) {
        if (failures == 0) first_failure = what;
        ++failures;
    }
}

namespace props {

namespace {

using gen::Rng;

struct Outcome {
    bool ok = true;
    std::string what;
    double error = 0;
};

Outcome pass(double error = 0) { return Outcome{true, "", error}; }
Outcome fail(const std::string& what, double error = 0) { return Outcome{false, what, error}; }
Outcome expect(bool ok, const std::string& what, double error = 0) { return ok ? pass(error) : fail(what, error); }

PropertyResult run_cases(const std::string& name, std::uint64_t seed, int cases, const std::function<Outcome(Rng&)>& f) {
    PropertyResult r;
    r.name = name;
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        try {
            const Outcome o = f(rng);
            r.record(o.ok, "case " + std::to_string(c) + ": " + o.what, o.error);
        } catch (const std::exception& e) {
            r.record(false, "case " + std::to_string(c) + ": " + e.what());
        }
    }
    return r;
}

int pick(Rng& rng, int lo, int hi) { return static_cast<int>(gen::integer(rng, lo, hi)); }

// Lie derivative by the coordinate formula
// (L_X a)_I = X(a_I) + sum_p sum_i a_{I with I_p -> i} d_{I_p} X^i.
TrigForm lie_coordinate(const TrigField& X, const TrigForm& a) {
    const int n = a.dim(), k = a.degree();
    TrigForm out(n, k);
    for (const auto& I : increasing_tuples(n, k)) {
        TrigScalar c = X.apply(a.coeff(I));
        for (int p = 0; p < k; ++p)
            for (int i = 0; i < n; ++i) {
                Indices J = I;
                J[p] = i;
                Indices sorted = J;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
                int inversions = 0;
                for (int s = 0; s < k; ++s)
                    for (int t = s + 1; t < k; ++t) inversions += J[s] > J[t];
                const TrigScalar term = a.coeff(sorted) * X[i].partial(I[p]);
                c += inversions % 2 ? -term : term;
            }
        out.add_component(I, c);
    }
    return out;
}

TrigForm constant_form(Rng& rng, int dim, int degree, bool integral) {
    TrigForm w(dim, degree);
    for (const auto& I : increasing_tuples(dim, degree)) {
        const Q c = integral ? Q(gen::integer(rng, -2, 2)) : gen::rational(rng);
        if (c != 0) w += TrigForm::basis(dim, I, QTwoPi(c));
    }
    return w;
}

// Closed form with rational harmonic part.
TrigForm closed_form(Rng& rng, int dim, int degree) {
    TrigForm w = constant_form(rng, dim, degree, false);
    if (degree >= 1) w += exterior_d(gen::form(rng, dim, degree - 1));
    return w;
}

// Integral closed 2-form whose trig part has frequencies orthogonal to every b.
TrigForm invariant_curvature(Rng& rng, int dim, const std::vector<RealVec>& bs) {
    TrigForm w = constant_form(rng, dim, 2, true);
    if (w.is_zero()) w = TrigForm::basis(dim, {0, 1});
    TrigForm eta(dim, 1);
    for (int t = 0; t < 6; ++t) {
        Freq n(dim);
        for (auto& x : n) x = gen::integer(rng, -2, 2);
        bool ok = true;
        for (const auto& b : bs) {
            Real phase(0);
            for (int i = 0; i < dim; ++i) phase += Real(n[i]) * b[i];
            ok = ok && phase.is_zero();
        }
        if (!ok) continue;
        eta.add_component({pick(rng, 0, dim - 1)}, TrigScalar::term(n, pick(rng, 0, 1) ? Phase::Cos : Phase::Sin,
                                                                    QTwoPi(gen::rational(rng))));
    }
    return w + exterior_d(eta);
}

std::string str(const QTwoPi& c) { return c.to_string(); }

struct ExScenario {
    TrigForm omega;
    std::function<TrigField(Rng&)> field;
};

ExScenario ex_scenario(int which) {
    switch (which) {
        case 0: return {TrigForm::basis(2, {0, 1}), [](Rng& r) { return gen::hamiltonian_t2(r); }};
        case 1:
            return {TrigForm::basis(3, {0, 1}) + TrigForm::basis(3, {1, 2}), [](Rng& r) { return gen::hamiltonian_t3(r); }};
        default: return {TrigForm::basis(3, {0, 1, 2}), [](Rng& r) { return gen::curl_t3(r); }};
    }
}

bool zero_hat(const HatField& a) { return a.X.is_zero() && a.psi_class.is_zero(); }

TangentAtMap random_tangent(Rng& rng, const AffineMap& phi) {
    std::vector<TrigScalar> v;
    for (int i = 0; i < phi.dst_dim(); ++i) v.push_back(gen::scalar(rng, phi.src_dim(), 2, 2));
    return TangentAtMap(phi, v);
}

std::vector<RealVec> loop_vertices(const PLLoop& l) { return l.vertices; }

RealVec add_vec(const RealVec& a, const RealVec& b) {
    RealVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RealVec near_point(Rng& rng, const RealVec& c, double radius) {
    RealVec p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i] + Real::from_double(gen::uniform(rng, -radius, radius));
    return p;
}

ChartBox box_around(const RealVec& c, double radius) {
    ChartBox b;
    for (const auto& x : c) {
        b.lo.push_back(x - Real::from_double(radius));
        b.hi.push_back(x + Real::from_double(radius));
    }
    return b;
}

}  // namespace

// ---- calculus ---------------------------------------------------------------

PropertyResult d_squared(std::uint64_t seed, int cases) {
    return run_cases("d_squared", seed, cases, [](Rng& rng) {
        const int n = pick(rng, 1, 4), k = pick(rng, 0, n);
        const TrigForm a = gen::form(rng, n, k, 3);
        return expect(exterior_d(exterior_d(a)).is_zero(), "d d a != 0 for " + a.to_string());
    });
}

PropertyResult cartan_formula(std::uint64_t seed, int cases) {
    return run_cases("cartan_formula", seed, cases, [](Rng& rng) {
        const int n = pick(rng, 1, 3), k = pick(rng, 0, n);
        const TrigForm a = gen::form(rng, n, k);
        const TrigField X = gen::field(rng, n);
        return expect(lie_derivative(X, a) == lie_coordinate(X, a), "i_X d + d i_X differs from the coordinate formula");
    });
}

PropertyResult bracket_interior(std::uint64_t seed, int cases) {
    return run_cases("bracket_interior", seed, cases, [](Rng& rng) {
        const int n = pick(rng, 1, 3), k = pick(rng, 1, n);
        const TrigForm a = gen::form(rng, n, k);
        const TrigField X = gen::field(rng, n), Y = gen::field(rng, n);
        const TrigForm lhs = interior(bracket_fields(X, Y), a);
        const TrigForm rhs = lie_derivative(X, interior(Y, a)) - interior(Y, lie_derivative(X, a));
        return expect(lhs == rhs, "i_[X,Y] != L_X i_Y - i_Y L_X");
    });
}

PropertyResult pullback_naturality(std::uint64_t seed, int cases) {
    return run_cases("pullback_naturality", seed, cases, [](Rng& rng) {
        const int e = pick(rng, 1, 3), d = pick(rng, 1, 3), m = pick(rng, 1, 3);
        const AffineMap phi(gen::int_matrix(rng, m, d), gen::quarter_vector(rng, m));
        const AffineMap psi(gen::int_matrix(rng, d, e), gen::quarter_vector(rng, d));
        const int p = pick(rng, 0, m), q = pick(rng, 0, m - p);
        const TrigForm a = gen::form(rng, m, p), b = gen::form(rng, m, q);
        if (pullback_affine(phi, exterior_d(a)) != exterior_d(pullback_affine(phi, a))) return fail("phi^* d != d phi^*");
        if (pullback_affine(phi, wedge(a, b)) != wedge(pullback_affine(phi, a), pullback_affine(phi, b)))
            return fail("phi^* does not respect wedge");
        return expect(pullback_affine(phi.compose(psi), a) == pullback_affine(psi, pullback_affine(phi, a)),
                      "(phi psi)^* != psi^* phi^*");
    });
}

// ---- characters -------------------------------------------------------------

PropertyResult curvature_axiom(std::uint64_t seed, int cases, int dim) {
    return run_cases("curvature_axiom_T" + std::to_string(dim), seed, cases, [dim](Rng& rng) {
        const int k = pick(rng, 0, dim - 1);
        const bool floats = pick(rng, 0, 1);
        const DifferentialCharacter h = gen::character(rng, dim, k, !floats);
        const Chain sigma = gen::small_chain(rng, dim, k + 1, floats);
        const Angle lhs = evaluate(h, boundary(sigma));
        const Angle rhs(integrate_chain(h.curvature(), sigma));
        const double err = lhs.distance(rhs);
        return expect(lhs.near(rhs), "h(boundary sigma) = " + lhs.to_string() + " vs " + rhs.to_string(), err);
    });
}

PropertyResult evaluate_homomorphism(std::uint64_t seed, int cases) {
    return run_cases("evaluate_homomorphism", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const bool floats = pick(rng, 0, 1);
        const DifferentialCharacter h = gen::character(rng, dim, 1, !floats);
        const DifferentialCharacter g = gen::character(rng, dim, 1, true);
        auto cycle = [&] {
            HomologyClass cls = HomologyClass::zero(dim, 1);
            for (auto& c : cls.coefficients) c = gen::integer(rng, -1, 1);
            return boundary(gen::small_chain(rng, dim, 2, floats)) +
                   translate(generator_chain(cls), gen::rational_vector(rng, dim));
        };
        const Chain z1 = cycle(), z2 = cycle();
        const Angle sum = evaluate(h, z1) + evaluate(h, z2);
        if (!evaluate(h, z1 + z2).near(sum)) return fail("h(z1 + z2) != h(z1) + h(z2)");
        return expect(evaluate(add(h, g), z1).near(evaluate(h, z1) + evaluate(g, z1)), "(h + g)(z) != h(z) + g(z)");
    });
}

PropertyResult exact_sequences() {
    PropertyResult r;
    r.name = "exact_sequences";
    auto check = [&r](const std::string& what, const std::function<bool()>& f) {
        try {
            r.record(f(), what);
        } catch (const std::exception& e) {
            r.record(false, what + ": " + e.what());
        }
    };
    const TrigForm dxdy = TrigForm::basis(2, {0, 1});
    const TrigForm exact2 = exterior_d(TrigForm::basis(2, {1}, TrigScalar::term({1, 1}, Phase::Sin, QTwoPi(Q(1, 3)))));
    const DifferentialCharacter flat = flat_character(2, 1, {Angle(Real(Q(1, 3))), Angle(Real(Q(1, 5)))});
    const Chain square = Chain::of(BoxCell::cube({Real(Q(1, 8)), Real(Q(1, 4))},
                                                 {{Real(Q(1, 2)), Real(0)}, {Real(Q(1, 8)), Real(Q(3, 8))}}));

    // Curvature sequence: the flat characters are the kernel of the curvature map.
    check("flat character has zero curvature", [&] { return flat.is_flat(); });
    check("flat character vanishes on boundaries", [&] { return evaluate(flat, boundary(square)).near(Angle(Real(0)), 0); });
    check("flat character is determined by its hol vector",
          [&] { return flat_character(2, 1, flat.hol()).near(flat, 0); });
    check("difference of characters with equal curvature is flat", [&] {
        const DifferentialCharacter a(dxdy + exact2, {Angle(Real(Q(1, 7))), Angle(Real(0))});
        const DifferentialCharacter b(dxdy + exact2, {Angle(Real(Q(2, 3))), Angle(Real(Q(1, 2)))});
        return subtract(a, b).is_flat();
    });
    check("h_canonical(omega) has curvature omega", [&] { return h_canonical(dxdy + exact2).curvature() == dxdy + exact2; });
    check("canonical characters have zero flat part", [&] {
        const auto split = flat_part(h_canonical(dxdy + exact2));
        return split.flat.near(trivial_character(2, 1), 0);
    });
    check("canonical plus flat part reproduces h", [&] {
        const DifferentialCharacter h(dxdy + exact2, {Angle(Real(Q(1, 4))), Angle(Real(Q(5, 6)))});
        const auto split = flat_part(h);
        return add(split.canonical, split.flat).near(h, 0) && split.flat.is_flat();
    });

    // Class sequence: the image of include_form is the kernel of the class map.
    check("integer constant forms include trivially", [&] {
        const TrigForm a = TrigForm::basis(2, {0}, QTwoPi(2)) + TrigForm::basis(2, {1}, QTwoPi(-3));
        return include_form(a).near(trivial_character(2, 1), 0);
    });
    check("include_form has characteristic class 0", [&] {
        const TrigForm a = TrigForm::basis(2, {1}, TrigScalar::term({1, 2}, Phase::Cos, QTwoPi(Q(2, 5)))) +
                           TrigForm::basis(2, {0}, QTwoPi(Q(1, 3)));
        const CharClass c = characteristic_class(include_form(a));
        return std::all_of(c.coefficients.begin(), c.coefficients.end(), [](auto x) { return x == 0; });
    });
    check("class of h_canonical reads the harmonic integers", [&] {
        return characteristic_class(h_canonical(TrigForm::basis(2, {0, 1}, QTwoPi(3)) + exact2)).coefficients ==
               std::vector<std::int64_t>{3};
    });
    check("class zero gives an include_form witness", [&] {
        const DifferentialCharacter h(exact2, {Angle(Real(Q(1, 4))), Angle(Real(Q(2, 7)))});
        if (characteristic_class(h).coefficients != std::vector<std::int64_t>{0}) return false;
        const auto a = as_form(h);
        return a && include_form(*a).near(h) && include_form(*a).curvature() == h.curvature();
    });
    check("nonzero class has no include_form witness", [&] { return !as_form(h_canonical(dxdy)).has_value(); });
    check("class map is additive", [&] {
        const auto a = h_canonical(TrigForm::basis(3, {0, 1}, QTwoPi(2)));
        const auto b = h_canonical(TrigForm::basis(3, {1, 2}) - TrigForm::basis(3, {0, 1}));
        return characteristic_class(add(a, b)).coefficients == std::vector<std::int64_t>{1, 0, 1};
    });
    return r;
}

// ---- flux -------------------------------------------------------------------

PropertyResult flux_agreement(std::uint64_t seed, int cases, int dim) {
    return run_cases("flux_agreement_T" + std::to_string(dim), seed, cases, [dim](Rng& rng) {
        const RealVec b = gen::rational_vector(rng, dim);
        const TrigForm w = invariant_curvature(rng, dim, {b});
        const FluxValue g = group_flux(h_canonical(w), AffineDiffeo::translation(b));
        const FluxValue p = path_flux(w, b);
        double err = 0;
        for (std::size_t i = 0; i < g.angles.size(); ++i) err = std::max(err, g.angles[i].distance(p.angles[i]));
        return expect(g.near(p), "group flux differs from path flux", err);
    });
}

PropertyResult flux_additivity(std::uint64_t seed, int cases, int dim) {
    return run_cases("flux_additivity_T" + std::to_string(dim), seed, cases, [dim](Rng& rng) {
        const RealVec b1 = gen::rational_vector(rng, dim), b2 = gen::rational_vector(rng, dim);
        const DifferentialCharacter h = h_canonical(invariant_curvature(rng, dim, {b1, b2}));
        const FluxValue f1 = group_flux(h, AffineDiffeo::translation(b1));
        const FluxValue f2 = group_flux(h, AffineDiffeo::translation(b2));
        const FluxValue f12 = group_flux(h, AffineDiffeo::translation(add_vec(b1, b2)));
        FluxValue sum{f1.degree, {}};
        for (std::size_t i = 0; i < f1.angles.size(); ++i) sum.angles.push_back(f1.angles[i] + f2.angles[i]);
        return expect(f12.near(sum), "flux of the composite is not the sum");
    });
}

PropertyResult flux_h_independence(std::uint64_t seed, int cases, int dim) {
    return run_cases("flux_h_independence_T" + std::to_string(dim), seed, cases, [dim](Rng& rng) {
        const RealVec b = gen::rational_vector(rng, dim);
        const TrigForm w = invariant_curvature(rng, dim, {b});
        const DifferentialCharacter h1 = h_canonical(w);
        std::vector<Angle> hol;
        for (std::int64_t t = 0; t < binomial(dim, 1); ++t) hol.emplace_back(Real(gen::rational(rng, 7, 9)));
        const DifferentialCharacter h2 = add(h1, DifferentialCharacter(w * QTwoPi(0), hol));
        return expect(group_flux(h1, AffineDiffeo::translation(b)).near(group_flux(h2, AffineDiffeo::translation(b))),
                      "flux depends on the character beyond its curvature");
    });
}

PropertyResult exact_field_kernel(std::uint64_t seed, int cases) {
    return run_cases("exact_field_kernel", seed, cases, [](Rng& rng) {
        const TrigForm w = TrigForm::basis(2, {0, 1});
        TrigField X = gen::hamiltonian_t2(rng);
        const bool shift = pick(rng, 0, 1);
        if (shift) X += TrigField::basis(2, pick(rng, 0, 1), TrigScalar::constant(2, QTwoPi(Q(pick(rng, 1, 3), 2))));
        bool primitive_ok = true;
        try {
            primitive(interior(X, w), true);
        } catch (const NotExact&) {
            primitive_ok = false;
        }
        const bool exact = is_exact_field(w, X);
        return expect(exact == !shift && primitive_ok == exact, "exactness of i_X omega misclassified");
    });
}

// ---- transgression ----------------------------------------------------------

namespace {

struct HatSetup {
    TrigForm alpha;
    TrigForm beta;
    AffineMap phi;
};

HatSetup hat_setup(Rng& rng) {
    static const int dims[][2] = {{2, 1}, {3, 1}, {3, 2}, {2, 2}};
    const auto& md = dims[pick(rng, 0, 3)];
    const int m = md[0], d = md[1];
    const int q = pick(rng, std::max(0, d + 2 - m), d);
    const int p = d + 2 - q;
    return HatSetup{gen::form(rng, m, p), gen::form(rng, d, q),
                    AffineMap(gen::int_matrix(rng, m, d), gen::quarter_vector(rng, m))};
}

}  // namespace

PropertyResult hat_tau_consistency(std::uint64_t seed, int cases) {
    return run_cases("hat_tau_consistency", seed, cases, [](Rng& rng) {
        const HatSetup s = hat_setup(rng);
        const int m = s.phi.dst_dim();
        const TrigField X = gen::field(rng, m), Y = gen::field(rng, m);
        const QTwoPi hat = hat_form_at(s.alpha, s.beta, TangentAtMap::along(X, s.phi), TangentAtMap::along(Y, s.phi));
        const QTwoPi tau = tau_cocycle(s.alpha, s.beta, s.phi, X, Y);
        return expect(hat == tau, "hat " + str(hat) + " vs tau " + str(tau));
    });
}

PropertyResult hat_nu_consistency(std::uint64_t seed, int cases) {
    return run_cases("hat_nu_consistency", seed, cases, [](Rng& rng) {
        const HatSetup s = hat_setup(rng);
        const int d = s.phi.src_dim();
        const TrigField u = gen::field(rng, d), v = gen::field(rng, d);
        const QTwoPi hat = hat_form_at(s.alpha, s.beta, TangentAtMap::pushed(u, s.phi), TangentAtMap::pushed(v, s.phi));
        const QTwoPi nu = nu_cocycle(s.alpha, s.beta, s.phi, u, v);
        return expect(hat == nu, "hat " + str(hat) + " vs nu " + str(nu));
    });
}

PropertyResult equivariance_forms(std::uint64_t seed, int cases) {
    return run_cases("equivariance_forms", seed, cases, [](Rng& rng) {
        const HatSetup s = hat_setup(rng);
        const int m = s.phi.dst_dim(), d = s.phi.src_dim();
        const TangentAtMap U = random_tangent(rng, s.phi), V = random_tangent(rng, s.phi);
        const AffineDiffeo phi(gen::unimodular(rng, m), gen::quarter_vector(rng, m));
        const AffineDiffeo psi(gen::unimodular(rng, d), gen::quarter_vector(rng, d));
        const FormComparison a = equivariance_check_A(s.alpha, s.beta, phi, U, V);
        if (!a.equal()) return fail("target equivariance: " + str(a.lhs) + " vs " + str(a.rhs));
        const FormComparison b = equivariance_check_B(s.alpha, s.beta, psi, U, V);
        return expect(b.equal(), "source equivariance: " + str(b.lhs) + " vs " + str(b.rhs));
    });
}

PropertyResult equivariance_characters(std::uint64_t seed, int cases) {
    return run_cases("equivariance_characters", seed, cases, [](Rng& rng) {
        const DifferentialCharacter h = add(include_form(gen::form(rng, 2, 1, 2, 2)), gen::character(rng, 2, 0).curvature().is_zero()
                                                                                       ? trivial_character(2, 1)
                                                                                       : flat_character(2, 1,
                                                                                                        {Angle(Real(gen::rational(rng))),
                                                                                                         Angle(Real(gen::rational(rng)))}));
        const DifferentialCharacter g = gen::character(rng, 1, 0);
        MapLoop gamma;
        gamma.A = {{0}, {0}};
        gamma.A[pick(rng, 0, 1)][0] = pick(rng, 0, 1) ? 1 : -1;
        gamma.base = gen::quarter_vector(rng, 2);
        gamma.speed = {gen::integer(rng, -1, 1), gen::integer(rng, -1, 1)};
        const AffineDiffeo phi(gen::signed_permutation(rng, 2), gen::quarter_vector(rng, 2));
        const AffineDiffeo psi = AffineDiffeo::translation(gen::quarter_vector(rng, 1));
        const AngleComparison a = equivariance_check_A(h, g, phi, gamma);
        if (!a.equal()) return fail("target equivariance: " + a.lhs.to_string() + " vs " + a.rhs.to_string(),
                                    a.lhs.distance(a.rhs));
        const AngleComparison b = equivariance_check_B(h, g, psi, gamma);
        return expect(b.equal(), "source equivariance: " + b.lhs.to_string() + " vs " + b.rhs.to_string(),
                      std::max(a.lhs.distance(a.rhs), b.lhs.distance(b.rhs)));
    });
}

// ---- extensions -------------------------------------------------------------

PropertyResult jacobi_centrality(std::uint64_t seed, int cases, int scenario) {
    const ExScenario ex = ex_scenario(scenario);
    return run_cases("jacobi_centrality_" + std::to_string(scenario), seed, cases, [ex](Rng& rng) {
        const TrigForm& w = ex.omega;
        const HatField a = make_hat(w, ex.field(rng)), b = make_hat(w, ex.field(rng)), c = make_hat(w, ex.field(rng));
        if (!jacobi_check(w, a, b, c)) return fail("Jacobi identity fails");
        const HatField z = HatField::central(w, closed_form(rng, w.dim(), w.degree() - 2));
        return expect(zero_hat(hat_bracket(w, z, a)) && zero_hat(hat_bracket(w, a, z)), "central element does not commute");
    });
}

PropertyResult trivialization_tau(std::uint64_t seed, int cases, int scenario) {
    const ExScenario ex = ex_scenario(scenario);
    return run_cases("trivialization_tau_" + std::to_string(scenario), seed, cases, [ex](Rng& rng) {
        const TrigForm& alpha = ex.omega;
        const int m = alpha.dim();
        // deg alpha - 2 + deg beta = dim S
        const int d = alpha.degree() == 2 ? 1 : pick(rng, 1, 2);
        const TrigForm beta = closed_form(rng, d, d - (alpha.degree() - 2));
        const AffineMap phi(gen::int_matrix(rng, m, d), gen::quarter_vector(rng, m));
        const DceResult r = dce_check_tau(alpha, beta, phi, ex.field(rng), ex.field(rng));
        return expect(r.equal(), "tau " + str(r.cocycle) + " vs d_CE sigma " + str(r.coboundary));
    });
}

PropertyResult trivialization_nu(std::uint64_t seed, int cases, int scenario) {
    const ExScenario ex = ex_scenario(scenario);
    return run_cases("trivialization_nu_" + std::to_string(scenario), seed, cases, [ex](Rng& rng) {
        const TrigForm& beta = ex.omega;
        const int d = beta.dim();
        const int m = pick(rng, std::max(2, d + 2 - beta.degree()), 3);
        const TrigForm alpha = closed_form(rng, m, d + 2 - beta.degree());
        const AffineMap phi(gen::int_matrix(rng, m, d), gen::quarter_vector(rng, m));
        const DceResult r = dce_check_nu(alpha, beta, phi, ex.field(rng), ex.field(rng));
        return expect(r.equal(), "nu " + str(r.cocycle) + " vs d_CE sigma " + str(r.coboundary));
    });
}

PropertyResult integrality(std::uint64_t seed, int cases) {
    return run_cases("integrality", seed, cases, [](Rng& rng) {
        // omega of degree k on T^3; integral harmonic (k-2)-forms psi and integral beta.
        const int m = 3, k = pick(rng, 2, 3);
        const TrigForm omega = k == 2 ? TrigForm::basis(3, {0, 1}) : TrigForm::basis(3, {0, 1, 2});
        const int d = pick(rng, std::max(1, k - 2), m);
        const TrigForm beta = constant_form(rng, d, d - (k - 2), true);
        const AffineMap phi(gen::int_matrix(rng, m, d), gen::rational_vector(rng, m));
        for (const auto& J : increasing_tuples(m, k - 2)) {
            const QTwoPi v = sigma_beta(beta, phi, HatField::central(omega, TrigForm::basis(m, J, QTwoPi(gen::integer(rng, -3, 3)))));
            if (!v.is_rational() || denominator(v.rational()) != 1) return fail("non-integer value " + str(v));
        }
        return pass();
    });
}

PropertyResult xi_restriction(std::uint64_t seed, int cases) {
    return run_cases("xi_restriction", seed, cases, [](Rng& rng) {
        const ExScenario ex = ex_scenario(pick(rng, 0, 2));
        const TrigForm& w = ex.omega;
        const int n = w.dim(), k = w.degree() - 2;
        std::vector<TrigField> fields;
        for (int i = 0; i < 3; ++i) fields.push_back(ex.field(rng));
        Functional l1{k, {}, std::nullopt};
        for (std::int64_t t = 0; t < binomial(n, k); ++t) l1.harmonic.push_back(QTwoPi(gen::rational(rng)));
        Functional l2 = l1;
        l2.coexact_density = gen::form(rng, n, k, 3);
        return expect(xi_restriction_check(w, l1, l2, fields), "tables differ by more than a coboundary");
    });
}

// ---- holonomy ---------------------------------------------------------------

PropertyResult holonomy_reconstruction(std::uint64_t seed, int cases, int dim) {
    return run_cases("holonomy_reconstruction_T" + std::to_string(dim), seed, cases, [dim](Rng& rng) {
        const bool floats = pick(rng, 0, 1);
        const DifferentialCharacter h = gen::character(rng, dim, 1, !floats);
        const PLLoop loop = gen::pl_loop(rng, dim, pick(rng, 1, 4), floats);
        const Angle a = holonomy(h, loop), b = evaluate(h, loop);
        return expect(a.near(b), "holonomy " + a.to_string() + " vs evaluate " + b.to_string(), a.distance(b));
    });
}

PropertyResult holonomy_curvature(std::uint64_t seed, int cases) {
    return run_cases("holonomy_curvature", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const bool floats = pick(rng, 0, 1);
        const DifferentialCharacter h = gen::character(rng, dim, 1, !floats);
        const Chain sigma = gen::small_chain(rng, dim, 2, floats);
        Real total(0);
        Angle hol(Real(0));
        for (const auto& [c, cell] : sigma.cells()) {
            std::vector<RealVec> v;
            if (cell.shape == CellShape::Simplex) {
                v = {cell.base, add_vec(cell.base, cell.columns[0]), add_vec(cell.base, cell.columns[1])};
            } else {
                v = {cell.base, add_vec(cell.base, cell.columns[0]),
                     add_vec(add_vec(cell.base, cell.columns[0]), cell.columns[1]), add_vec(cell.base, cell.columns[1])};
            }
            v.push_back(cell.base);
            hol = hol + c * holonomy(h, PLLoop(v));
        }
        const Angle rhs(integrate_chain(h.curvature(), sigma));
        return expect(hol.near(rhs), "holonomy " + hol.to_string() + " vs curvature " + rhs.to_string(),
                      hol.distance(rhs));
    });
}

PropertyResult thin_homotopy(std::uint64_t seed, int cases) {
    return run_cases("thin_homotopy", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const DifferentialCharacter h = gen::character(rng, dim, 1, false);
        const PLLoop loop = gen::pl_loop(rng, dim, pick(rng, 1, 3), true);
        // Insert an excursion delta * delta^-1 at a vertex.
        std::vector<RealVec> v = loop_vertices(loop);
        const std::size_t at = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.size()) - 2));
        std::vector<RealVec> excursion{v[at]};
        for (int s = 0; s < pick(rng, 1, 3); ++s) excursion.push_back(near_point(rng, excursion.back(), 0.5));
        std::vector<RealVec> w(v.begin(), v.begin() + at + 1);
        w.insert(w.end(), excursion.begin() + 1, excursion.end());
        w.insert(w.end(), excursion.rbegin() + 1, excursion.rend());
        w.insert(w.end(), v.begin() + at + 1, v.end());
        const Angle a = holonomy(h, loop), b = holonomy(h, PLLoop(w));
        return expect(a.near(b, 1e-12), "backtracking changed the holonomy", a.distance(b));
    });
}

PropertyResult transport_equivariance(std::uint64_t seed, int cases) {
    return run_cases("transport_equivariance", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const bool floats = pick(rng, 0, 1);
        const DifferentialCharacter h =
            floats ? gen::character(rng, dim, 1, false)
                   : DifferentialCharacter(constant_form(rng, dim, 2, true),
                                           std::vector<Angle>(dim, Angle(Real(gen::rational(rng)))));
        const PLLoop path = gen::pl_loop(rng, dim, pick(rng, 1, 3), floats);
        const Angle shift(Real(gen::rational(rng, 7, 11)));
        const TransportState s0(h, Angle(Real(0)), path.vertices.front());
        const TransportState s1(h, shift, path.vertices.front());
        const Angle a = transport(h, path, s0).fiber_angle, b = transport(h, path, s1).fiber_angle;
        const Angle moved = a + shift;
        if (!floats) return expect(b.is_exact() && b.near(moved, 0), "exact transport is not shift-equivariant");
        return expect(b.near(moved, 1e-12), "transport is not shift-equivariant", b.distance(moved));
    });
}

PropertyResult transport_concatenation(std::uint64_t seed, int cases) {
    return run_cases("transport_concatenation", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const DifferentialCharacter h = gen::character(rng, dim, 1, false);
        const PLLoop p1 = gen::pl_loop(rng, dim, pick(rng, 1, 3), true);
        std::vector<RealVec> v2{p1.vertices.back()};
        for (int s = 0; s < pick(rng, 1, 3); ++s) v2.push_back(near_point(rng, v2.back(), 0.7));
        // Start p2 at an integer translate of p1's end.
        for (auto& p : v2) p[0] += Real(1);
        const PLLoop p2(v2);
        const TransportState s(h, Angle(Real::from_double(gen::uniform(rng, 0, 1))), p1.vertices.front());
        const TransportState two = transport(h, p2, transport(h, p1, s));
        const TransportState one = transport(h, p1.concat(p2), s);
        return expect(two.fiber_angle.near(one.fiber_angle), "transport is not functorial",
                      two.fiber_angle.distance(one.fiber_angle));
    });
}

PropertyResult square_holonomy() {
    PropertyResult r;
    r.name = "square_holonomy";
    const DifferentialCharacter h = h_canonical(TrigForm::basis(2, {0, 1}));
    for (const Q& e : {Q(1, 10), Q(1, 7)}) {
        try {
            const PLLoop sq({{Real(0), Real(0)}, {Real(e), Real(0)}, {Real(e), Real(e)}, {Real(0), Real(e)}, {Real(0), Real(0)}});
            const Angle a = holonomy(h, sq);
            r.record(a.near(Angle(Real(e * e)), 0), "square holonomy " + a.to_string() + " != " + format_rational(e * e));
        } catch (const std::exception& ex) {
            r.record(false, ex.what());
        }
    }
    return r;
}

PropertyResult diamond_identity(std::uint64_t seed, int cases) {
    return run_cases("diamond_identity", seed, cases, [](Rng& rng) {
        const int dim = pick(rng, 2, 3);
        const DifferentialCharacter h = gen::character(rng, dim, 1, false);
        DiamondConfig c;
        c.x = near_point(rng, RealVec(dim, Real(Q(1, 2))), 0.5);
        c.y = near_point(rng, c.x, 0.8);
        c.x_prime = near_point(rng, c.x, 0.05);
        c.y_prime = near_point(rng, c.y, 0.05);
        c.u = near_point(rng, c.x, 0.05);
        c.u0 = near_point(rng, c.x, 0.05);
        c.v = near_point(rng, c.y, 0.05);
        c.v0 = near_point(rng, c.y, 0.05);
        c.chart_x = box_around(c.x, 0.2);
        c.chart_x_prime = box_around(c.x_prime, 0.2);
        c.chart_y = box_around(c.y, 0.2);
        c.chart_y_prime = box_around(c.y_prime, 0.2);
        for (int s = 0; s < pick(rng, 0, 2); ++s) c.gamma_interior.push_back(near_point(rng, c.x, 1.0));
        const DiamondResult r = diamond_transition(h, c);
        return expect(r.equal(), "holonomy " + r.holonomy.to_string() + " vs diamonds " + r.integral.to_string(),
                      r.holonomy.distance(Angle(r.integral)));
    });
}

}  // namespace props

// ---- suite runner -----------------------------------------------------------

namespace {

using Thunk = std::function<PropertyResult(std::uint64_t)>;

std::vector<Thunk> suite_thunks(const std::string& name) {
    using namespace props;
    if (name == "calculus")
        return {[](auto s) { return d_squared(s, 200); }, [](auto s) { return cartan_formula(s, 200); },
                [](auto s) { return bracket_interior(s, 200); }, [](auto s) { return pullback_naturality(s, 200); }};
    if (name == "characters")
        return {[](auto s) { return curvature_axiom(s, 100, 2); }, [](auto s) { return curvature_axiom(s, 100, 3); },
                [](auto s) { return evaluate_homomorphism(s, 50); }, [](auto) { return exact_sequences(); }};
    if (name == "flux")
        return {[](auto s) { return flux_agreement(s, 50, 2); },      [](auto s) { return flux_agreement(s, 50, 3); },
                [](auto s) { return flux_additivity(s, 50, 2); },     [](auto s) { return flux_additivity(s, 50, 3); },
                [](auto s) { return flux_h_independence(s, 25, 2); }, [](auto s) { return flux_h_independence(s, 25, 3); },
                [](auto s) { return exact_field_kernel(s, 50); }};
    if (name == "transgression")
        return {[](auto s) { return hat_tau_consistency(s, 50); }, [](auto s) { return hat_nu_consistency(s, 50); },
                [](auto s) { return equivariance_forms(s, 50); }, [](auto s) { return equivariance_characters(s, 25); }};
    if (name == "extensions")
        return {[](auto s) { return jacobi_centrality(s, 25, 0); },  [](auto s) { return jacobi_centrality(s, 25, 1); },
                [](auto s) { return jacobi_centrality(s, 10, 2); },  [](auto s) { return trivialization_tau(s, 25, 0); },
                [](auto s) { return trivialization_tau(s, 25, 1); }, [](auto s) { return trivialization_tau(s, 25, 2); },
                [](auto s) { return trivialization_nu(s, 25, 0); },  [](auto s) { return trivialization_nu(s, 25, 1); },
                [](auto s) { return trivialization_nu(s, 25, 2); },  [](auto s) { return integrality(s, 20); },
                [](auto s) { return xi_restriction(s, 20); }};
    if (name == "holonomy")
        return {[](auto s) { return holonomy_reconstruction(s, 100, 2); },
                [](auto s) { return holonomy_reconstruction(s, 100, 3); },
                [](auto s) { return holonomy_curvature(s, 50); },
                [](auto s) { return thin_homotopy(s, 50); },
                [](auto s) { return transport_equivariance(s, 50); },
                [](auto s) { return transport_concatenation(s, 50); },
                [](auto) { return square_holonomy(); },
                [](auto s) { return diamond_identity(s, 20); }};
    throw UnknownSuite("no suite named '" + name + "'");
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"calculus", "characters", "flux", "transgression", "extensions", "holonomy"};
}

Report run_suite(const std::string& name, std::uint64_t seed) {
    const auto thunks = suite_thunks(name);
    Report rep;
    rep.name = "suite:" + name;
    rep.seed = seed;
    for (std::size_t i = 0; i < thunks.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const PropertyResult p = thunks[i](gen::derive_seed(seed, i));
        CheckResult c;
        c.name = p.name;
        c.op = "property";
        c.status = p.passed() ? CheckStatus::Pass : CheckStatus::Fail;
        c.value = Json{{"cases", p.cases}, {"failures", p.failures}, {"max_error", p.max_error}};
        c.message = p.first_failure;
        c.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

}  // namespace charcalc
