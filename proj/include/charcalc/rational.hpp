#ifndef CHARCALC_RATIONAL_HPP
#define CHARCALC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace charcalc {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

Q parse_rational(const std::string& text);
std::string format_rational(const Q& q);
double to_double(const Q& q);

/// floor(q) and q - floor(q) in [0, 1).
Z floor_q(const Q& q);
Q frac_q(const Q& q);

/// A real number that is either an exact rational or a double.
/// Arithmetic with a float operand produces a float.
class Real {
public:
    Real() = default;
    Real(const Q& q) : exact_(true), q_(q) {}         // NOLINT
    Real(std::int64_t n) : exact_(true), q_(n) {}     // NOLINT
    Real(int n) : exact_(true), q_(n) {}              // NOLINT
    static Real from_double(double x);

    bool is_exact() const { return exact_; }
    /// Precondition: is_exact().
    const Q& exact() const { return q_; }
    double to_double() const;
    bool is_zero() const { return exact_ ? q_ == 0 : f_ == 0.0; }

    Real operator-() const;
    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }

    /// Structural equality: exact values compare exactly, floats bitwise.
    friend bool operator==(const Real& a, const Real& b);

    std::string to_string() const;

private:
    bool exact_ = true;
    Q q_ = 0;
    double f_ = 0.0;
};

using RealVec = std::vector<Real>;

/// Representative of x mod 1 in [0, 1).
Real frac(const Real& x);

/// |a - b| <= tol, exact when both are exact.
bool near(const Real& a, const Real& b, double tol);

/// Distance on R/Z, exact to zero when both are exact.
bool near_mod1(const Real& a, const Real& b, double tol);
double dist_mod1(const Real& a, const Real& b);

/// If x mod 1 is a multiple of 1/4, its index in {0,1,2,3}. Floats match
/// within 1e-12.
std::optional<int> quarter_index(const Real& x);

}  // namespace charcalc

#endif
