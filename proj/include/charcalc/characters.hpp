#ifndef CHARCALC_CHARACTERS_HPP
#define CHARCALC_CHARACTERS_HPP

#include "charcalc/cycles.hpp"
#include "charcalc/rational.hpp"
#include "charcalc/trig.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace charcalc {

inline constexpr double kAngleTolerance = 1e-9;

/// Element of R/Z, stored in [0, 1).
class Angle {
public:
    Angle() = default;
    explicit Angle(const Real& x);

    const Real& value() const { return value_; }
    bool is_exact() const { return value_.is_exact(); }
    double to_double() const { return value_.to_double(); }

    friend Angle operator+(const Angle& a, const Angle& b) { return Angle(a.value_ + b.value_); }
    friend Angle operator-(const Angle& a, const Angle& b) { return Angle(a.value_ - b.value_); }
    Angle operator-() const { return Angle(-value_); }
    friend Angle operator*(std::int64_t n, const Angle& a) { return Angle(Real(n) * a.value_); }

    /// Exact equality when both are exact, otherwise circle distance <= tol.
    bool near(const Angle& o, double tol = kAngleTolerance) const;
    double distance(const Angle& o) const { return dist_mod1(value_, o.value_); }
    std::string to_string() const { return value_.to_string(); }

private:
    Real value_{0};
};

struct CharClass {
    int degree = 0;
    std::vector<std::int64_t> coefficients;  // over increasing_tuples(dim, degree)
    friend bool operator==(const CharClass&, const CharClass&) = default;
};

/// Degree-k character on T^n: a closed integral (k+1)-form plus the values
/// on the generator sub-tori T_J through the origin.
class DifferentialCharacter {
public:
    /// Throws NotClosed or NonIntegralCurvature.
    DifferentialCharacter(TrigForm curvature, std::vector<Angle> hol);

    int dim() const { return curvature_.dim(); }
    int degree() const { return curvature_.degree() - 1; }
    const TrigForm& curvature() const { return curvature_; }
    const std::vector<Angle>& hol() const { return hol_; }
    const Angle& hol(const Indices& J) const;
    bool is_flat() const { return curvature_.is_zero(); }

    /// Same curvature exactly and hol entries within tol.
    bool near(const DifferentialCharacter& o, double tol = kAngleTolerance) const;

private:
    TrigForm curvature_;
    std::vector<Angle> hol_;
};

/// Form with trig part plus constant real coefficients; the constant part
/// may carry floats.
struct RealForm {
    TrigForm trig;
    std::map<Indices, Real> constant;

    explicit RealForm(TrigForm t) : trig(std::move(t)) {}
    int dim() const { return trig.dim(); }
    int degree() const { return trig.degree(); }
};

/// Integral of f over T_J through the origin.
QTwoPi generator_period(const TrigForm& f, const Indices& J);
/// Integral of f ^ g over T_J through the origin.
Real generator_period(const RealForm& f, const TrigForm& g, const Indices& J);

Angle evaluate(const DifferentialCharacter& h, const Chain& z);
Angle evaluate(const DifferentialCharacter& h, const PLLoop& loop);

DifferentialCharacter include_form(const TrigForm& alpha);
DifferentialCharacter include_form(const RealForm& alpha);
/// a with include_form(a) = x; empty unless the curvature is exact.
std::optional<RealForm> as_form(const DifferentialCharacter& x);

CharClass characteristic_class(const DifferentialCharacter& h);

DifferentialCharacter add(const DifferentialCharacter& a, const DifferentialCharacter& b);
DifferentialCharacter negate(const DifferentialCharacter& h);
DifferentialCharacter subtract(const DifferentialCharacter& a, const DifferentialCharacter& b);

/// Curvature omega, zero on the generators through the origin.
DifferentialCharacter h_canonical(const TrigForm& omega);
DifferentialCharacter flat_character(int dim, int degree, std::vector<Angle> hol);
DifferentialCharacter trivial_character(int dim, int degree);

struct FlatSplit {
    DifferentialCharacter canonical;
    DifferentialCharacter flat;
};
FlatSplit flat_part(const DifferentialCharacter& h);

/// F^* h for an affine F: T^d -> T^n. Degree >= 2 needs generator images
/// spanned by distinct signed unit columns; otherwise UnsupportedPullback.
DifferentialCharacter pullback_character(const DifferentialCharacter& h, const AffineMap& F);

}  // namespace charcalc

#endif
