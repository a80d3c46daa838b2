#include "charcalc/qtwopi.hpp"

#include <cmath>
#include <numbers>

namespace charcalc {

QTwoPi QTwoPi::monomial(int power, const Q& coeff) {
    QTwoPi r;
    if (coeff != 0) r.terms_[power] = coeff;
    return r;
}

bool QTwoPi::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Q QTwoPi::rational() const { return constant_term(); }

Q QTwoPi::constant_term() const {
    const auto it = terms_.find(0);
    return it == terms_.end() ? Q(0) : it->second;
}

double QTwoPi::to_double() const {
    const double two_pi = 2.0 * std::numbers::pi;
    double s = 0.0;
    for (const auto& [p, c] : terms_) s += charcalc::to_double(c) * std::pow(two_pi, p);
    return s;
}

Real QTwoPi::to_real() const {
    if (is_rational()) return Real(rational());
    return Real::from_double(to_double());
}

QTwoPi QTwoPi::shifted(int p) const {
    QTwoPi r;
    for (const auto& [k, c] : terms_) r.terms_[k + p] = c;
    return r;
}

QTwoPi QTwoPi::operator-() const {
    QTwoPi r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
}

QTwoPi& QTwoPi::operator+=(const QTwoPi& o) {
    for (const auto& [k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

QTwoPi& QTwoPi::operator-=(const QTwoPi& o) { return *this += -o; }

QTwoPi operator+(const QTwoPi& a, const QTwoPi& b) {
    QTwoPi r = a;
    r += b;
    return r;
}

QTwoPi operator-(const QTwoPi& a, const QTwoPi& b) {
    QTwoPi r = a;
    r -= b;
    return r;
}

QTwoPi operator*(const QTwoPi& a, const QTwoPi& b) {
    QTwoPi r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) r += QTwoPi::monomial(ka + kb, ca * cb);
    return r;
}

QTwoPi operator*(const QTwoPi& a, const Q& q) {
    QTwoPi r;
    if (q == 0) return r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = c * q;
    return r;
}

std::string QTwoPi::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) s += " + ";
        first = false;
        s += format_rational(it->second);
        if (it->first != 0) s += "*T^" + std::to_string(it->first);
    }
    return s;
}

}  // namespace charcalc
