#include "charcalc/rational.hpp"

#include "charcalc/errors.hpp"

#include <cmath>
#include <cstdio>

namespace charcalc {

Q parse_rational(const std::string& text) {
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string s = trim(text);
    const auto slash = s.find('/');
    auto parse_int = [&](const std::string& part) {
        const std::string p = trim(part);
        if (p.empty()) throw ParseError("empty integer in rational '" + text + "'");
        std::size_t i = (p[0] == '-' || p[0] == '+') ? 1 : 0;
        if (i == p.size()) throw ParseError("malformed rational '" + text + "'");
        for (; i < p.size(); ++i)
            if (p[i] < '0' || p[i] > '9') throw ParseError("malformed rational '" + text + "'");
        return Z(p[0] == '+' ? p.substr(1) : p);
    };
    if (slash == std::string::npos) return Q(parse_int(s));
    const Z num = parse_int(s.substr(0, slash));
    const Z den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return Q(num, den);
}

std::string format_rational(const Q& q) {
    const Z n = boost::multiprecision::numerator(q);
    const Z d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

double to_double(const Q& q) { return q.convert_to<double>(); }

Z floor_q(const Q& q) {
    const Z n = boost::multiprecision::numerator(q);
    const Z d = boost::multiprecision::denominator(q);
    Z f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

Q frac_q(const Q& q) { return q - Q(floor_q(q)); }

Real Real::from_double(double x) {
    Real r;
    r.exact_ = false;
    r.f_ = x;
    return r;
}

double Real::to_double() const { return exact_ ? charcalc::to_double(q_) : f_; }

Real Real::operator-() const { return exact_ ? Real(Q(-q_)) : from_double(-f_); }

Real operator+(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(Q(a.q_ + b.q_));
    return Real::from_double(a.to_double() + b.to_double());
}
Real operator-(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(Q(a.q_ - b.q_));
    return Real::from_double(a.to_double() - b.to_double());
}
Real operator*(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(Q(a.q_ * b.q_));
    // Exact zero annihilates floats so that zero-measure terms stay exact.
    if (a.exact_ && a.q_ == 0) return Real(0);
    if (b.exact_ && b.q_ == 0) return Real(0);
    return Real::from_double(a.to_double() * b.to_double());
}
Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw InvalidArgument("division by zero");
    if (a.exact_ && b.exact_) return Real(Q(a.q_ / b.q_));
    return Real::from_double(a.to_double() / b.to_double());
}

bool operator==(const Real& a, const Real& b) {
    if (a.exact_ != b.exact_) return false;
    return a.exact_ ? a.q_ == b.q_ : a.f_ == b.f_;
}

std::string Real::to_string() const {
    if (exact_) return format_rational(q_);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", f_);
    return buf;
}

Real frac(const Real& x) {
    if (x.is_exact()) return Real(frac_q(x.exact()));
    double f = x.to_double() - std::floor(x.to_double());
    if (f >= 1.0) f = 0.0;
    return Real::from_double(f);
}

bool near(const Real& a, const Real& b, double tol) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return std::fabs(a.to_double() - b.to_double()) <= tol;
}

double dist_mod1(const Real& a, const Real& b) {
    const double d = frac(a - b).to_double();
    return std::min(d, 1.0 - d);
}

bool near_mod1(const Real& a, const Real& b, double tol) {
    if (a.is_exact() && b.is_exact()) return frac_q(a.exact() - b.exact()) == 0;
    return dist_mod1(a, b) <= tol;
}

std::optional<int> quarter_index(const Real& x) {
    if (x.is_exact()) {
        const Q f = frac_q(x.exact() * 4);
        if (f != 0) return std::nullopt;
        const Z i = floor_q(x.exact() * 4);
        Z r = i % 4;
        if (r < 0) r += 4;
        return r.convert_to<int>();
    }
    const double v = x.to_double() * 4.0;
    const double r = std::round(v);
    if (std::fabs(v - r) > 4e-12) return std::nullopt;
    long long i = static_cast<long long>(r) % 4;
    if (i < 0) i += 4;
    return static_cast<int>(i);
}

}  // namespace charcalc
