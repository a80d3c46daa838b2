#ifndef CHARCALC_TRIG_HPP
#define CHARCALC_TRIG_HPP

#include "charcalc/qtwopi.hpp"
#include "charcalc/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace charcalc {

// Exterior calculus on the flat torus T^n = R^n / Z^n. Coefficients are
// trigonometric polynomials in the basis cos(2 pi n.x), sin(2 pi n.x) with
// QTwoPi coefficients, so every operation is exact.

enum class Phase { Cos, Sin };

using Freq = std::vector<std::int64_t>;
using Indices = std::vector<int>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct TrigKey {
    Freq freq;
    Phase phase;
    friend auto operator<=>(const TrigKey&, const TrigKey&) = default;
    friend bool operator==(const TrigKey&, const TrigKey&) = default;
};

class AffineMap;

class TrigScalar {
public:
    explicit TrigScalar(int dim);
    static TrigScalar constant(int dim, const QTwoPi& c);
    /// coeff * cos|sin(2 pi freq.x); the frequency is normalized on entry.
    static TrigScalar term(const Freq& freq, Phase phase, const QTwoPi& coeff);

    int dim() const { return dim_; }
    const std::map<TrigKey, QTwoPi>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    /// Adds coeff * cos|sin(2 pi freq.x). A negative leading frequency entry
    /// is flipped using parity; sin at zero frequency vanishes.
    void add_term(Freq freq, Phase phase, const QTwoPi& coeff);

    /// Zero-frequency cosine coefficient (the mean over the torus).
    QTwoPi mean() const;
    TrigScalar partial(int i) const;
    double eval(const std::vector<double>& x) const;
    std::int64_t max_abs_freq() const;

    TrigScalar operator-() const;
    TrigScalar& operator+=(const TrigScalar& o);
    TrigScalar& operator-=(const TrigScalar& o);
    friend TrigScalar operator+(TrigScalar a, const TrigScalar& b) { return a += b; }
    friend TrigScalar operator-(TrigScalar a, const TrigScalar& b) { return a -= b; }
    friend TrigScalar operator*(const TrigScalar& a, const TrigScalar& b);
    friend TrigScalar operator*(const TrigScalar& a, const QTwoPi& c);
    friend TrigScalar operator*(const QTwoPi& c, const TrigScalar& a) { return a * c; }
    friend bool operator==(const TrigScalar& a, const TrigScalar& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const TrigScalar& a, const TrigScalar& b) { return !(a == b); }

    std::string to_string() const;

private:
    int dim_;
    std::map<TrigKey, QTwoPi> terms_;
};

using Components = std::map<Indices, TrigScalar>;

class TrigForm {
public:
    /// The zero form. Degrees above dim are allowed and always zero.
    TrigForm(int dim, int degree);
    TrigForm(int dim, int degree, const Components& comps);
    static TrigForm from_scalar(const TrigScalar& f);
    /// coeff * dx^{I}.
    static TrigForm basis(int dim, const Indices& I, const TrigScalar& coeff);
    static TrigForm basis(int dim, const Indices& I, const QTwoPi& coeff = QTwoPi(1));

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const Components& components() const { return comps_; }
    TrigScalar coeff(const Indices& I) const;
    bool is_zero() const { return comps_.empty(); }
    void add_component(const Indices& I, const TrigScalar& f);

    TrigForm operator-() const;
    TrigForm& operator+=(const TrigForm& o);
    TrigForm& operator-=(const TrigForm& o);
    friend TrigForm operator+(TrigForm a, const TrigForm& b) { return a += b; }
    friend TrigForm operator-(TrigForm a, const TrigForm& b) { return a -= b; }
    friend TrigForm operator*(const TrigForm& a, const QTwoPi& c);
    friend TrigForm operator*(const QTwoPi& c, const TrigForm& a) { return a * c; }
    friend TrigForm operator*(const TrigScalar& f, const TrigForm& a);
    friend bool operator==(const TrigForm& a, const TrigForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const TrigForm& a, const TrigForm& b) { return !(a == b); }

    std::int64_t max_abs_freq() const;
    std::string to_string() const;

private:
    int dim_;
    int degree_;
    Components comps_;
};

/// Vector field in the global frame d/dx^1, ..., d/dx^n.
class TrigField {
public:
    explicit TrigField(int dim);
    explicit TrigField(std::vector<TrigScalar> comps);
    /// coeff * d/dx^i.
    static TrigField basis(int dim, int i, const TrigScalar& coeff);

    int dim() const { return static_cast<int>(comps_.size()); }
    const std::vector<TrigScalar>& components() const { return comps_; }
    const TrigScalar& operator[](int i) const { return comps_.at(i); }
    bool is_zero() const;
    /// X(f) = sum_i X^i df/dx^i.
    TrigScalar apply(const TrigScalar& f) const;

    TrigField operator-() const;
    TrigField& operator+=(const TrigField& o);
    TrigField& operator-=(const TrigField& o);
    friend TrigField operator+(TrigField a, const TrigField& b) { return a += b; }
    friend TrigField operator-(TrigField a, const TrigField& b) { return a -= b; }
    friend TrigField operator*(const TrigField& a, const QTwoPi& c);
    friend TrigField operator*(const QTwoPi& c, const TrigField& a) { return a * c; }
    friend bool operator==(const TrigField& a, const TrigField& b) { return a.comps_ == b.comps_; }
    friend bool operator!=(const TrigField& a, const TrigField& b) { return !(a == b); }

private:
    std::vector<TrigScalar> comps_;
};

/// x -> linear * x + translation, from T^src_dim to T^dst_dim.
class AffineMap {
public:
    AffineMap(IntMatrix linear, RealVec translation);
    static AffineMap identity(int dim);
    static AffineMap linear_only(IntMatrix linear);

    int src_dim() const { return src_dim_; }
    int dst_dim() const { return static_cast<int>(linear_.size()); }
    const IntMatrix& linear() const { return linear_; }
    const RealVec& translation() const { return translation_; }

    /// this o inner.
    AffineMap compose(const AffineMap& inner) const;
    /// Precondition: square with determinant +-1.
    AffineMap inverse() const;
    RealVec apply(const RealVec& x) const;

    friend bool operator==(const AffineMap& a, const AffineMap& b) {
        return a.linear_ == b.linear_ && a.translation_ == b.translation_;
    }

private:
    int src_dim_;
    IntMatrix linear_;
    RealVec translation_;
};

// ---- index-tuple helpers -------------------------------------------------

/// All strictly increasing k-tuples of {0..n-1}, lexicographic.
std::vector<Indices> increasing_tuples(int n, int k);
std::int64_t binomial(int n, int k);
/// Sign of the shuffle putting I followed by J into increasing order, or 0
/// if they intersect.
int shuffle_sign(const Indices& I, const Indices& J);
Indices merge_sorted(const Indices& I, const Indices& J);
/// Determinant of the integer submatrix with the given rows and columns.
std::int64_t minor_det(const IntMatrix& A, const Indices& rows, const Indices& cols);
std::int64_t determinant(const IntMatrix& A);

// ---- calculus ------------------------------------------------------------

TrigForm exterior_d(const TrigForm& f);
TrigForm wedge(const TrigForm& f, const TrigForm& g);
TrigForm interior(const TrigField& X, const TrigForm& f);
/// Defined by Cartan's formula i_X d + d i_X.
TrigForm lie_derivative(const TrigField& X, const TrigForm& f);
TrigField bracket_fields(const TrigField& X, const TrigField& Y);
/// f o phi for a scalar on T^dst_dim. Throws InexactTranslation when a phase
/// n.b is not a multiple of 1/4.
TrigScalar compose_affine(const TrigScalar& f, const AffineMap& phi);
TrigForm pullback_affine(const AffineMap& phi, const TrigForm& f);
QTwoPi integrate_torus(const TrigForm& f);
/// Integrates over the coordinates in fiber_dims. The fiber directions are
/// ordered last, so fiber_integrate(pr1^* a ^ f) = a ^ fiber_integrate(f).
TrigForm fiber_integrate(const TrigForm& f, const Indices& fiber_dims);

bool is_closed(const TrigForm& f);
/// Constant-coefficient part.
TrigForm harmonic_part(const TrigForm& f);

struct HodgeSplit {
    TrigForm harmonic;
    TrigForm exact;
    TrigForm coexact;
};
HodgeSplit hodge_split(const TrigForm& f);
/// Canonical coexact psi with d psi = exact part of f.
TrigForm primitive(const TrigForm& f, bool require_exact);
/// Removes the exact part: harmonic + coexact.
TrigForm canonical_class(const TrigForm& f);

}  // namespace charcalc

#endif
