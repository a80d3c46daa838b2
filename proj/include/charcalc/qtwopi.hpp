#ifndef CHARCALC_QTWOPI_HPP
#define CHARCALC_QTWOPI_HPP

#include "charcalc/rational.hpp"

#include <map>
#include <string>

namespace charcalc {

/// Laurent polynomial in a formal symbol T = 2*pi with rational
/// coefficients. Zero coefficients are never stored, so equality is
/// structural.
class QTwoPi {
public:
    QTwoPi() = default;
    QTwoPi(const Q& q) { if (q != 0) terms_[0] = q; }                 // NOLINT
    QTwoPi(std::int64_t n) : QTwoPi(Q(n)) {}                           // NOLINT
    QTwoPi(int n) : QTwoPi(Q(n)) {}                                    // NOLINT
    static QTwoPi monomial(int power, const Q& coeff);

    const std::map<int, Q>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// True when only the T^0 coefficient may be nonzero.
    bool is_rational() const;
    /// Precondition: is_rational().
    Q rational() const;
    /// T^0 coefficient.
    Q constant_term() const;
    double to_double() const;
    /// Exact when rational, float otherwise.
    Real to_real() const;

    /// Multiplication by T^p.
    QTwoPi shifted(int p) const;

    QTwoPi operator-() const;
    friend QTwoPi operator+(const QTwoPi& a, const QTwoPi& b);
    friend QTwoPi operator-(const QTwoPi& a, const QTwoPi& b);
    friend QTwoPi operator*(const QTwoPi& a, const QTwoPi& b);
    friend QTwoPi operator*(const QTwoPi& a, const Q& q);
    friend QTwoPi operator*(const Q& q, const QTwoPi& a) { return a * q; }
    QTwoPi& operator+=(const QTwoPi& o);
    QTwoPi& operator-=(const QTwoPi& o);
    friend bool operator==(const QTwoPi& a, const QTwoPi& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const QTwoPi& a, const QTwoPi& b) { return !(a == b); }

    /// e.g. "-1/2*T^-1 + 3"; T stands for 2*pi.
    std::string to_string() const;

private:
    std::map<int, Q> terms_;
};

}  // namespace charcalc

#endif
