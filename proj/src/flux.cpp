#include "charcalc/flux.hpp"

#include "charcalc/errors.hpp"

#include <cmath>

namespace charcalc {

namespace {

// n.b is an integer, within the cell tolerance for floats.
bool integral_phase(const Real& t) {
    if (t.is_exact()) return frac_q(t.exact()) == 0;
    return dist_mod1(t, Real(0)) <= kCellTolerance;
}

Real phase_of(const Freq& n, const RealVec& b) {
    Real t(0);
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] != 0) t += Real(n[i]) * b[i];
    return t;
}

}  // namespace

// ---- AffineDiffeo -----------------------------------------------------------

AffineDiffeo::AffineDiffeo(AffineMap m) : map_(std::move(m)) {}

AffineDiffeo::AffineDiffeo(IntMatrix linear, RealVec translation) : map_(std::move(linear), std::move(translation)) {
    if (map_.src_dim() != map_.dst_dim()) throw InvalidArgument("diffeomorphism needs a square linear part");
    const std::int64_t d = determinant(map_.linear());
    if (d != 1 && d != -1) throw InvalidArgument("linear part must have determinant +-1");
}

AffineDiffeo AffineDiffeo::translation(RealVec b) {
    const int n = static_cast<int>(b.size());
    return AffineDiffeo(AffineMap::identity(n).linear(), std::move(b));
}

AffineDiffeo AffineDiffeo::identity(int dim) { return AffineDiffeo(AffineMap::identity(dim)); }

bool AffineDiffeo::is_translation() const { return linear() == AffineMap::identity(dim()).linear(); }

bool AffineDiffeo::is_signed_permutation() const {
    for (const auto& row : linear()) {
        int nonzero = 0;
        for (auto v : row) {
            if (v == 0) continue;
            if (v != 1 && v != -1) return false;
            ++nonzero;
        }
        if (nonzero != 1) return false;
    }
    return true;
}

std::int64_t AffineDiffeo::det() const { return determinant(linear()); }

AffineDiffeo AffineDiffeo::inverse() const { return AffineDiffeo(map_.inverse()); }

AffineDiffeo AffineDiffeo::compose(const AffineDiffeo& inner) const { return AffineDiffeo(map_.compose(inner.map_)); }

// ---- flux values ------------------------------------------------------------

bool FluxValue::near(const FluxValue& o, double tol) const {
    if (degree != o.degree || angles.size() != o.angles.size()) return false;
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (!angles[i].near(o.angles[i], tol)) return false;
    return true;
}

bool RealFlux::is_zero() const {
    for (const auto& v : values)
        if (!v.is_zero()) return false;
    return true;
}

// ---- operations -------------------------------------------------------------

bool preserves_form(const AffineDiffeo& phi, const TrigForm& omega) {
    if (phi.dim() != omega.dim()) throw DimensionMismatch("diffeomorphism and form on different tori");
    if (phi.is_translation()) {
        // A translation multiplies each frequency-n term by a rotation through n.b.
        for (const auto& [I, s] : omega.components())
            for (const auto& [key, c] : s.terms())
                if (!integral_phase(phase_of(key.freq, phi.translation_part()))) return false;
        return true;
    }
    return pullback_affine(phi.map(), omega) == omega;
}

FluxValue group_flux(const DifferentialCharacter& h, const AffineDiffeo& phi) {
    if (phi.dim() != h.dim()) throw DimensionMismatch("diffeomorphism and character on different tori");
    if (!phi.is_signed_permutation())
        throw UnsupportedLinearPart("group flux needs a signed permutation linear part");
    if (!preserves_form(phi, h.curvature())) throw FormNotPreserved("diffeomorphism does not preserve the curvature");
    const int n = h.dim(), k = h.degree();
    const AffineDiffeo inv = phi.inverse();
    FluxValue out{k, {}};
    const auto tuples = increasing_tuples(n, k);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        std::vector<RealVec> cols;
        for (int j : tuples[t]) {
            RealVec c(n);
            for (int i = 0; i < n; ++i) c[i] = Real(inv.linear()[i][j]);
            cols.push_back(c);
        }
        const Angle moved = evaluate(h, Chain::of(BoxCell::cube(inv.translation_part(), cols)));
        out.angles.push_back(moved - h.hol()[t]);
    }
    return out;
}

FluxValue path_flux(const TrigForm& omega, const RealVec& b) {
    if (static_cast<int>(b.size()) != omega.dim()) throw DimensionMismatch("translation vector length");
    if (omega.degree() < 1) throw DegreeMismatch("path flux needs a form of degree >= 1");
    for (const auto& [I, s] : omega.components())
        for (const auto& [key, c] : s.terms())
            if (!phase_of(key.freq, b).is_zero())
                throw FormNotPreserved("form is not invariant along the translation path");
    const int n = omega.dim(), k = omega.degree() - 1;
    FluxValue out{k, {}};
    for (const auto& J : increasing_tuples(n, k)) {
        // Coefficient of dx^J in i_b(harmonic part).
        Real v(0);
        for (int i = 0; i < n; ++i) {
            const int s = shuffle_sign({i}, J);
            if (s == 0 || b[i].is_zero()) continue;
            const QTwoPi m = omega.coeff(merge_sorted({i}, J)).mean();
            if (m.is_zero()) continue;
            v += Real(s) * b[i] * m.to_real();
        }
        out.angles.emplace_back(-v);
    }
    return out;
}

RealFlux infinitesimal_flux(const TrigForm& omega, const TrigField& X) {
    if (X.dim() != omega.dim()) throw DimensionMismatch("field and form on different tori");
    if (!lie_derivative(X, omega).is_zero()) throw NotSymmetryField("L_X omega is not zero");
    const int n = omega.dim(), k = std::max(omega.degree() - 1, 0);
    const TrigForm contracted = interior(X, omega);
    RealFlux out{k, {}};
    for (const auto& J : increasing_tuples(n, k))
        out.values.push_back(omega.degree() == 0 ? QTwoPi() : contracted.coeff(J).mean());
    return out;
}

bool is_exact_field(const TrigForm& omega, const TrigField& X) { return infinitesimal_flux(omega, X).is_zero(); }

}  // namespace charcalc
