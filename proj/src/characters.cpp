#include "charcalc/characters.hpp"

#include "charcalc/errors.hpp"

#include <algorithm>

namespace charcalc {

namespace {

void require_match(const DifferentialCharacter& a, const DifferentialCharacter& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("characters on different tori");
    if (a.degree() != b.degree()) throw DegreeMismatch("characters of different degree");
}

bool harmonic_is_zero(const TrigForm& f) { return harmonic_part(f).is_zero(); }

}  // namespace

// ---- Angle ------------------------------------------------------------------

Angle::Angle(const Real& x) : value_(frac(x)) {
    if (!value_.is_exact() && value_.to_double() >= 1.0) value_ = Real::from_double(0.0);
}

bool Angle::near(const Angle& o, double tol) const {
    if (is_exact() && o.is_exact()) return value_.exact() == o.value_.exact();
    return distance(o) <= tol;
}

// ---- DifferentialCharacter --------------------------------------------------

DifferentialCharacter::DifferentialCharacter(TrigForm curvature, std::vector<Angle> hol)
    : curvature_(std::move(curvature)), hol_(std::move(hol)) {
    const int n = curvature_.dim(), k = degree();
    if (k < 0) throw DegreeMismatch("character degree must be >= 0");
    if (static_cast<std::int64_t>(hol_.size()) != binomial(n, k))
        throw InvalidArgument("hol vector needs one angle per generator sub-torus");
    if (!is_closed(curvature_)) throw NotClosed("curvature is not closed");
    const TrigForm harmonic = harmonic_part(curvature_);
    for (const auto& [I, s] : harmonic.components()) {
        const QTwoPi m = s.mean();
        if (!m.is_rational() || frac_q(m.rational()) != 0)
            throw NonIntegralCurvature("harmonic coefficient " + m.to_string() + " is not an integer");
    }
}

const Angle& DifferentialCharacter::hol(const Indices& J) const {
    const auto tuples = increasing_tuples(dim(), degree());
    const auto it = std::find(tuples.begin(), tuples.end(), J);
    if (it == tuples.end()) throw InvalidArgument("no generator with that index tuple");
    return hol_[it - tuples.begin()];
}

bool DifferentialCharacter::near(const DifferentialCharacter& o, double tol) const {
    if (dim() != o.dim() || degree() != o.degree() || curvature_ != o.curvature_) return false;
    for (std::size_t i = 0; i < hol_.size(); ++i)
        if (!hol_[i].near(o.hol_[i], tol)) return false;
    return true;
}

// ---- periods ----------------------------------------------------------------

QTwoPi generator_period(const TrigForm& f, const Indices& J) {
    if (static_cast<int>(J.size()) != f.degree()) throw DegreeMismatch("period tuple length differs from degree");
    QTwoPi total;
    // On T_J through 0 only cos terms with no frequency along J survive.
    const TrigScalar coeff = f.coeff(J);
    for (const auto& [key, c] : coeff.terms()) {
        if (key.phase != Phase::Cos) continue;
        bool along = false;
        for (int j : J) along = along || key.freq[j] != 0;
        if (!along) total += c;
    }
    return total;
}

Real generator_period(const RealForm& f, const TrigForm& g, const Indices& J) {
    Real total = generator_period(wedge(f.trig, g), J).to_real();
    for (const auto& [I, c] : f.constant) {
        if (c.is_zero()) continue;
        total += c * generator_period(wedge(TrigForm::basis(f.dim(), I), g), J).to_real();
    }
    return total;
}

// ---- evaluation -------------------------------------------------------------

Angle evaluate(const DifferentialCharacter& h, const Chain& z) {
    if (z.ambient() != h.dim()) throw DimensionMismatch("cycle and character on different tori");
    if (z.k() != h.degree()) throw DegreeMismatch("cycle dimension differs from character degree");
    const BoundingChain b = bounding_chain(z);
    Real total = integrate_chain(h.curvature(), b.sigma);
    for (std::size_t t = 0; t < b.cls.coefficients.size(); ++t)
        if (b.cls.coefficients[t] != 0) total += Real(b.cls.coefficients[t]) * h.hol()[t].value();
    return Angle(total);
}

Angle evaluate(const DifferentialCharacter& h, const PLLoop& loop) {
    if (loop.ambient != h.dim()) throw DimensionMismatch("loop and character on different tori");
    if (h.degree() != 1) throw DegreeMismatch("loops pair with degree-1 characters");
    const BoundingChain b = bounding_chain(loop);
    Real total = integrate_chain(h.curvature(), b.sigma);
    for (std::size_t t = 0; t < b.cls.coefficients.size(); ++t)
        if (b.cls.coefficients[t] != 0) total += Real(b.cls.coefficients[t]) * h.hol()[t].value();
    return Angle(total);
}

// ---- inclusion of forms -----------------------------------------------------

DifferentialCharacter include_form(const TrigForm& alpha) { return include_form(RealForm(alpha)); }

DifferentialCharacter include_form(const RealForm& alpha) {
    const int n = alpha.dim(), k = alpha.degree();
    std::vector<Angle> hol;
    for (const auto& J : increasing_tuples(n, k)) {
        Real v = generator_period(alpha.trig, J).to_real();
        const auto it = alpha.constant.find(J);
        if (it != alpha.constant.end()) v += it->second;
        hol.emplace_back(v);
    }
    return DifferentialCharacter(exterior_d(alpha.trig), std::move(hol));
}

std::optional<RealForm> as_form(const DifferentialCharacter& x) {
    if (!harmonic_is_zero(x.curvature())) return std::nullopt;
    const int n = x.dim(), k = x.degree();
    TrigForm theta = primitive(x.curvature(), true);
    const auto tuples = increasing_tuples(n, k);
    // Remove the generator periods of theta so that its periods are the hol entries.
    TrigForm shift(n, k);
    for (const auto& J : tuples) {
        const QTwoPi c = generator_period(theta, J);
        if (!c.is_zero()) shift.add_component(J, TrigScalar::constant(n, c));
    }
    RealForm a(theta - shift);
    for (std::size_t t = 0; t < tuples.size(); ++t)
        if (!x.hol()[t].value().is_zero()) a.constant[tuples[t]] = x.hol()[t].value();
    return a;
}

CharClass characteristic_class(const DifferentialCharacter& h) {
    const int n = h.dim(), k = h.degree() + 1;
    CharClass c{k, std::vector<std::int64_t>(binomial(n, k), 0)};
    const auto tuples = increasing_tuples(n, k);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        const QTwoPi m = h.curvature().coeff(tuples[t]).mean();
        if (m.is_zero()) continue;
        if (!m.is_rational() || frac_q(m.rational()) != 0)
            throw NonIntegralCurvature("harmonic coefficient " + m.to_string() + " is not an integer");
        c.coefficients[t] = floor_q(m.rational()).convert_to<std::int64_t>();
    }
    return c;
}

// ---- group structure --------------------------------------------------------

DifferentialCharacter add(const DifferentialCharacter& a, const DifferentialCharacter& b) {
    require_match(a, b);
    std::vector<Angle> hol(a.hol().size());
    for (std::size_t i = 0; i < hol.size(); ++i) hol[i] = a.hol()[i] + b.hol()[i];
    return DifferentialCharacter(a.curvature() + b.curvature(), std::move(hol));
}

DifferentialCharacter negate(const DifferentialCharacter& h) {
    std::vector<Angle> hol(h.hol().size());
    for (std::size_t i = 0; i < hol.size(); ++i) hol[i] = -h.hol()[i];
    return DifferentialCharacter(-h.curvature(), std::move(hol));
}

DifferentialCharacter subtract(const DifferentialCharacter& a, const DifferentialCharacter& b) {
    return add(a, negate(b));
}

DifferentialCharacter h_canonical(const TrigForm& omega) {
    if (omega.degree() < 1) throw DegreeMismatch("curvature must have degree >= 1");
    const int n = omega.dim(), k = omega.degree() - 1;
    return DifferentialCharacter(omega, std::vector<Angle>(binomial(n, k)));
}

DifferentialCharacter flat_character(int dim, int degree, std::vector<Angle> hol) {
    return DifferentialCharacter(TrigForm(dim, degree + 1), std::move(hol));
}

DifferentialCharacter trivial_character(int dim, int degree) {
    return flat_character(dim, degree, std::vector<Angle>(binomial(dim, degree)));
}

FlatSplit flat_part(const DifferentialCharacter& h) {
    DifferentialCharacter canonical = h_canonical(h.curvature());
    return FlatSplit{canonical, flat_character(h.dim(), h.degree(), h.hol())};
}

// ---- pullback ---------------------------------------------------------------

DifferentialCharacter pullback_character(const DifferentialCharacter& h, const AffineMap& F) {
    if (F.dst_dim() != h.dim()) throw DimensionMismatch("pullback map does not land on the character's torus");
    const int d = F.src_dim(), n = F.dst_dim(), k = h.degree();
    if (k > d) return trivial_character(d, k);
    TrigForm curv = pullback_affine(F, h.curvature());
    std::vector<Angle> hol;
    const auto row_tuples = increasing_tuples(n, k);
    for (const auto& J : increasing_tuples(d, k)) {
        bool full_rank = k == 0;
        for (const auto& R : row_tuples) full_rank = full_rank || minor_det(F.linear(), R, J) != 0;
        if (!full_rank) {
            // The image factors through a torus of dimension below k.
            hol.emplace_back(Real(0));
            continue;
        }
        std::vector<RealVec> cols;
        for (int j : J) {
            RealVec c(n);
            for (int i = 0; i < n; ++i) c[i] = Real(F.linear()[i][j]);
            cols.push_back(c);
        }
        try {
            hol.push_back(evaluate(h, Chain::of(BoxCell::cube(F.translation(), cols))));
        } catch (const Unsupported& e) {
            throw UnsupportedPullback(std::string("generator image not decomposable: ") + e.what());
        }
    }
    return DifferentialCharacter(std::move(curv), std::move(hol));
}

}  // namespace charcalc
