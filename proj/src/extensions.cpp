#include "charcalc/extensions.hpp"

#include "charcalc/errors.hpp"

namespace charcalc {

namespace {

void require_dim(int a, int b, const char* what) {
    if (a != b) throw DimensionMismatch(what);
}

HatField hat_sum(const HatField& a, const HatField& b) {
    HatField r{a.X + b.X, a.psi + b.psi, a.psi_class + b.psi_class};
    return r;
}

// Rational enclosure of (2 pi)^p.
Q pow_q(const Q& x, int p) {
    Q r = 1;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

const Q kTwoPiLo(Z(6283185307), Z(1000000000));
const Q kTwoPiHi(Z(6283185308), Z(1000000000));

Q monomial_hi(int p) { return p >= 0 ? pow_q(kTwoPiHi, p) : Q(1) / pow_q(kTwoPiLo, -p); }
Q monomial_lo(int p) { return p >= 0 ? pow_q(kTwoPiLo, p) : Q(1) / pow_q(kTwoPiHi, -p); }

Q abs_hi(const QTwoPi& c) {
    Q s = 0;
    for (const auto& [p, q] : c.terms()) s += abs(q) * monomial_hi(p);
    return s;
}

Q value_lo(const QTwoPi& c) {
    Q s = 0;
    for (const auto& [p, q] : c.terms()) s += q > 0 ? q * monomial_lo(p) : q * monomial_hi(p);
    return s;
}

}  // namespace

// ---- hat fields -------------------------------------------------------------

HatField HatField::make(const TrigForm& omega, const TrigField& X, const TrigForm& psi) {
    require_dim(X.dim(), omega.dim(), "field and form on different tori");
    if (omega.degree() < 2) throw DegreeMismatch("hat fields need omega of degree >= 2");
    if (psi.dim() != omega.dim() || psi.degree() != omega.degree() - 2)
        throw DegreeMismatch("psi must have degree deg omega - 2");
    if (!lie_derivative(X, omega).is_zero()) throw NotSymmetryField("L_X omega is not zero");
    if (exterior_d(psi) != interior(X, omega)) throw InvalidArgument("d psi differs from i_X omega");
    return HatField{X, psi, canonical_class(psi)};
}

HatField HatField::central(const TrigForm& omega, const TrigForm& psi) {
    return make(omega, TrigField(omega.dim()), psi);
}

HatField make_hat(const TrigForm& omega, const TrigField& X) {
    require_dim(X.dim(), omega.dim(), "field and form on different tori");
    if (omega.degree() < 2) throw DegreeMismatch("hat fields need omega of degree >= 2");
    if (!lie_derivative(X, omega).is_zero()) throw NotSymmetryField("L_X omega is not zero");
    const TrigForm c = interior(X, omega);
    if (!harmonic_part(c).is_zero()) throw NotExactField("i_X omega has a nonzero harmonic part");
    return HatField::make(omega, X, primitive(c, true));
}

HatField hat_bracket(const TrigForm& omega, const HatField& a, const HatField& b) {
    const TrigField X = bracket_fields(a.X, b.X);
#ifdef CHARCALC_MUTANT_FLIP_BRACKET
    const TrigForm psi = interior(b.X, interior(a.X, omega));
#else
    const TrigForm psi = interior(a.X, interior(b.X, omega));
#endif
    HatField out = HatField::make(omega, X, psi);
    if (canonical_class(lie_derivative(a.X, b.psi)) != out.psi_class)
        throw InternalVerificationFailed("[L_v psi_w] differs from [i_v i_w omega]");
    return out;
}

bool hat_equal(const HatField& a, const HatField& b) { return a.X == b.X && a.psi_class == b.psi_class; }

bool jacobi_check(const TrigForm& omega, const HatField& a, const HatField& b, const HatField& c) {
    const HatField s = hat_sum(hat_sum(hat_bracket(omega, hat_bracket(omega, a, b), c),
                                       hat_bracket(omega, hat_bracket(omega, b, c), a)),
                               hat_bracket(omega, hat_bracket(omega, c, a), b));
    return s.X.is_zero() && s.psi_class.is_zero();
}

// ---- functionals and tables -------------------------------------------------

QTwoPi Functional::apply(const TrigForm& psi) const {
    if (psi.degree() != degree) throw DegreeMismatch("functional applied to a form of the wrong degree");
    const auto tuples = increasing_tuples(psi.dim(), degree);
    if (harmonic.size() != tuples.size()) throw DimensionMismatch("functional needs one coefficient per tuple");
    QTwoPi total;
    for (std::size_t t = 0; t < tuples.size(); ++t)
        if (!harmonic[t].is_zero()) total += harmonic[t] * psi.coeff(tuples[t]).mean();
    if (coexact_density) {
        if (coexact_density->dim() != psi.dim() || coexact_density->degree() != degree)
            throw DegreeMismatch("coexact density has the wrong shape");
        const TrigForm co = hodge_split(psi).coexact;
        for (const auto& [I, s] : co.components()) total += (s * coexact_density->coeff(I)).mean();
    }
    return total;
}

CocycleValueTable cocycle_table(const std::vector<TrigField>& fields, const FieldCocycle& c) {
    CocycleValueTable t;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            const QTwoPi v = c(fields[i], fields[j]);
            if (c(fields[j], fields[i]) != -v) throw InternalVerificationFailed("cocycle is not antisymmetric");
            t.pairs.emplace_back(i, j);
            t.values.push_back(v);
        }
    return t;
}

// ---- cocycles ---------------------------------------------------------------

QTwoPi tau_cocycle(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& X,
                   const TrigField& Y) {
    require_dim(alpha.dim(), phi.dst_dim(), "alpha must live on the target");
    require_dim(beta.dim(), phi.src_dim(), "beta must live on the source");
    require_dim(X.dim(), alpha.dim(), "X must live on the target");
    require_dim(Y.dim(), alpha.dim(), "Y must live on the target");
    if (alpha.degree() - 2 + beta.degree() != phi.src_dim())
        throw DegreeMismatch("deg alpha - 2 + deg beta must equal dim S");
    return integrate_torus(wedge(pullback_affine(phi, interior(Y, interior(X, alpha))), beta));
}

QTwoPi nu_cocycle(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& u,
                  const TrigField& v) {
    require_dim(alpha.dim(), phi.dst_dim(), "alpha must live on the target");
    require_dim(beta.dim(), phi.src_dim(), "beta must live on the source");
    require_dim(u.dim(), beta.dim(), "u must live on the source");
    require_dim(v.dim(), beta.dim(), "v must live on the source");
    if (alpha.degree() - 2 + beta.degree() != phi.src_dim())
        throw DegreeMismatch("deg alpha - 2 + deg beta must equal dim S");
    const TrigForm A = pullback_affine(phi, alpha);
    const QTwoPi first = integrate_torus(wedge(interior(v, interior(u, A)), beta));
    // deg beta < 2 forces deg A > dim S, so both expressions vanish.
    const QTwoPi second =
        beta.degree() < 2 ? QTwoPi(0) : integrate_torus(wedge(A, interior(v, interior(u, beta))));
    if (first != second)
        throw InternalVerificationFailed("the two expressions for nu disagree: " + first.to_string() + " vs " +
                                         second.to_string());
    return first;
}

TrigForm CircleMap::derivative() const {
    const int d = f.dim();
    if (static_cast<int>(winding.size()) != d) throw DimensionMismatch("winding vector length");
    TrigForm r = exterior_d(TrigForm::from_scalar(f));
    for (int i = 0; i < d; ++i)
        if (winding[i] != 0) r += TrigForm::basis(d, {i}, QTwoPi(winding[i]));
    return r;
}

QTwoPi kappa_cocycle(const TrigForm& mu, const AffineMap& psi, const CircleMap& F, const TrigField& X,
                     const TrigField& Y) {
    const int n = mu.dim();
    if (mu.degree() != n) throw DegreeMismatch("mu must be a top form");
    require_dim(psi.dst_dim(), n, "Psi must land on M");
    require_dim(psi.src_dim(), n - 1, "N must have dimension dim M - 1");
    require_dim(F.f.dim(), n - 1, "F must live on N");
    return integrate_torus(wedge(pullback_affine(psi, interior(Y, interior(X, mu))), F.derivative()));
}

std::vector<QTwoPi> kappa_functional(const TrigForm& mu, const AffineMap& psi, const CircleMap& F) {
    const int n = mu.dim();
    if (mu.degree() != n) throw DegreeMismatch("mu must be a top form");
    require_dim(psi.dst_dim(), n, "Psi must land on M");
    require_dim(psi.src_dim(), n - 1, "N must have dimension dim M - 1");
    std::vector<QTwoPi> out;
    const TrigForm dF = F.derivative();
    for (const auto& J : increasing_tuples(n, n - 2))
        out.push_back(integrate_torus(wedge(pullback_affine(psi, TrigForm::basis(n, J)), dF)));
    return out;
}

QTwoPi sigma_beta(const TrigForm& beta, const AffineMap& phi, const HatField& a) {
    require_dim(a.psi.dim(), phi.dst_dim(), "hat field must live on the target");
    require_dim(beta.dim(), phi.src_dim(), "beta must live on the source");
    if (a.psi.degree() + beta.degree() != phi.src_dim()) throw DegreeMismatch("deg psi + deg beta must equal dim S");
    return integrate_torus(wedge(pullback_affine(phi, a.psi), beta));
}

QTwoPi sigma_bar_alpha(const TrigForm& alpha, const AffineMap& phi, const HatField& a) {
    require_dim(alpha.dim(), phi.dst_dim(), "alpha must live on the target");
    require_dim(a.psi.dim(), phi.src_dim(), "hat field must live on the source");
    if (alpha.degree() + a.psi.degree() != phi.src_dim())
        throw DegreeMismatch("deg alpha + deg psi must equal dim S");
    return integrate_torus(wedge(pullback_affine(phi, alpha), a.psi));
}

DceResult dce_check_tau(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& X,
                        const TrigField& Y) {
    const QTwoPi tau = tau_cocycle(alpha, beta, phi, X, Y);
    const HatField b = hat_bracket(alpha, make_hat(alpha, X), make_hat(alpha, Y));
    return DceResult{tau, -sigma_beta(beta, phi, b)};
}

DceResult dce_check_nu(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& u,
                       const TrigField& v) {
    const QTwoPi nu = nu_cocycle(alpha, beta, phi, u, v);
    const HatField b = hat_bracket(beta, make_hat(beta, u), make_hat(beta, v));
    return DceResult{nu, -sigma_bar_alpha(alpha, phi, b)};
}

// ---- lambda extensions ------------------------------------------------------

CocycleValueTable xi_extension(const TrigForm& omega, const Functional& lambda, const std::vector<TrigField>& fields) {
    std::vector<HatField> lifts;
    for (const auto& X : fields) lifts.push_back(make_hat(omega, X));
    CocycleValueTable t;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            const QTwoPi v = lambda.apply(hat_bracket(omega, lifts[i], lifts[j]));
            if (lambda.apply(hat_bracket(omega, lifts[j], lifts[i])) != -v)
                throw InternalVerificationFailed("extension cocycle is not antisymmetric");
            t.pairs.emplace_back(i, j);
            t.values.push_back(v);
        }
    return t;
}

bool xi_restriction_check(const TrigForm& omega, const Functional& l1, const Functional& l2,
                          const std::vector<TrigField>& fields) {
    if (l1.harmonic != l2.harmonic) return false;
    const CocycleValueTable t1 = xi_extension(omega, l1, fields);
    const CocycleValueTable t2 = xi_extension(omega, l2, fields);
    for (std::size_t p = 0; p < t1.pairs.size(); ++p) {
        const auto [i, j] = t1.pairs[p];
        const HatField lifted = make_hat(omega, bracket_fields(fields[i], fields[j]));
        const QTwoPi c = l2.apply(lifted) - l1.apply(lifted);
        if (t1.values[p] - t2.values[p] != -c) return false;
    }
    return true;
}

PdResult pd_compare(const AffineMap& phi, std::int64_t cycle_coefficient, const TrigForm& omega, const QTwoPi& k) {
    const int n = omega.dim();
    if (omega.degree() != 2) throw DegreeMismatch("omega must be a 2-form");
    require_dim(phi.dst_dim(), n, "Phi must land on M");
    require_dim(phi.src_dim(), n - 2, "S must have dimension dim M - 2");
    PdResult r;
    for (const auto& J : increasing_tuples(n, n - 2)) {
        const TrigForm a = TrigForm::basis(n, J);
        r.lambda_tau.push_back(integrate_torus(pullback_affine(phi, a)) * Q(cycle_coefficient));
        r.lambda_nu.push_back(k * integrate_torus(wedge(omega, a)));
    }
    return r;
}

bool is_positive_volume(const TrigForm& mu) {
    if (mu.degree() != mu.dim()) throw DegreeMismatch("volume form must be top degree");
    Indices top(mu.dim());
    for (int i = 0; i < mu.dim(); ++i) top[i] = i;
    const TrigScalar c = mu.coeff(top);
    const Q lo = value_lo(c.mean());
    Q rest = 0;
    for (const auto& [key, v] : c.terms()) {
        bool zero = true;
        for (auto f : key.freq) zero = zero && f == 0;
        if (!zero) rest += abs_hi(v);
    }
    return lo > rest;
}

}  // namespace charcalc
