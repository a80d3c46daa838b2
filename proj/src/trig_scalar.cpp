#include "charcalc/errors.hpp"
#include "charcalc/trig.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace charcalc {

TrigScalar::TrigScalar(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("torus dimension must be positive");
}

TrigScalar TrigScalar::constant(int dim, const QTwoPi& c) {
    TrigScalar s(dim);
    s.add_term(Freq(dim, 0), Phase::Cos, c);
    return s;
}

TrigScalar TrigScalar::term(const Freq& freq, Phase phase, const QTwoPi& coeff) {
    TrigScalar s(static_cast<int>(freq.size()));
    s.add_term(freq, phase, coeff);
    return s;
}

bool TrigScalar::is_constant() const {
    for (const auto& [k, c] : terms_)
        for (auto n : k.freq)
            if (n != 0) return false;
    return true;
}

void TrigScalar::add_term(Freq freq, Phase phase, const QTwoPi& coeff) {
    if (static_cast<int>(freq.size()) != dim_)
        throw DimensionMismatch("frequency length " + std::to_string(freq.size()) +
                                " on a scalar of dimension " + std::to_string(dim_));
    if (coeff.is_zero()) return;
    QTwoPi c = coeff;
    std::size_t lead = 0;
    while (lead < freq.size() && freq[lead] == 0) ++lead;
    if (lead == freq.size()) {
        if (phase == Phase::Sin) return;
    } else if (freq[lead] < 0) {
        for (auto& n : freq) n = -n;
        if (phase == Phase::Sin) c = -c;
    }
    TrigKey key{std::move(freq), phase};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

QTwoPi TrigScalar::mean() const {
    const auto it = terms_.find(TrigKey{Freq(dim_, 0), Phase::Cos});
    return it == terms_.end() ? QTwoPi() : it->second;
}

TrigScalar TrigScalar::partial(int i) const {
    if (i < 0 || i >= dim_) throw DimensionMismatch("partial derivative index out of range");
    TrigScalar r(dim_);
    for (const auto& [k, c] : terms_) {
        const std::int64_t ni = k.freq[i];
        if (ni == 0) continue;
        // d/dx cos(2 pi n.x) = -2 pi n_i sin,  d/dx sin = 2 pi n_i cos.
        if (k.phase == Phase::Cos)
            r.add_term(k.freq, Phase::Sin, c.shifted(1) * Q(-ni));
        else
            r.add_term(k.freq, Phase::Cos, c.shifted(1) * Q(ni));
    }
    return r;
}

double TrigScalar::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("evaluation point length");
    double s = 0.0;
    for (const auto& [k, c] : terms_) {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += static_cast<double>(k.freq[i]) * x[i];
        t *= 2.0 * std::numbers::pi;
        s += c.to_double() * (k.phase == Phase::Cos ? std::cos(t) : std::sin(t));
    }
    return s;
}

std::int64_t TrigScalar::max_abs_freq() const {
    std::int64_t m = 0;
    for (const auto& [k, c] : terms_)
        for (auto n : k.freq) m = std::max<std::int64_t>(m, std::llabs(n));
    return m;
}

TrigScalar TrigScalar::operator-() const {
    TrigScalar r(dim_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

TrigScalar& TrigScalar::operator+=(const TrigScalar& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("adding scalars on different tori");
    for (const auto& [k, c] : o.terms_) add_term(k.freq, k.phase, c);
    return *this;
}

TrigScalar& TrigScalar::operator-=(const TrigScalar& o) { return *this += -o; }

TrigScalar operator*(const TrigScalar& a, const TrigScalar& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch("multiplying scalars on different tori");
    TrigScalar r(a.dim_);
    const Q half(1, 2);
    Freq sum(a.dim_), diff(a.dim_);
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            const QTwoPi c = ca * cb * half;
            for (int i = 0; i < a.dim_; ++i) {
                sum[i] = ka.freq[i] + kb.freq[i];
                diff[i] = ka.freq[i] - kb.freq[i];
            }
            const bool sa = ka.phase == Phase::Sin, sb = kb.phase == Phase::Sin;
            if (!sa && !sb) {
                r.add_term(diff, Phase::Cos, c);
                r.add_term(sum, Phase::Cos, c);
            } else if (sa && sb) {
                r.add_term(diff, Phase::Cos, c);
                r.add_term(sum, Phase::Cos, -c);
            } else if (sa) {
                r.add_term(sum, Phase::Sin, c);
                r.add_term(diff, Phase::Sin, c);
            } else {
                r.add_term(sum, Phase::Sin, c);
                r.add_term(diff, Phase::Sin, -c);
            }
        }
    }
    return r;
}

TrigScalar operator*(const TrigScalar& a, const QTwoPi& c) {
    TrigScalar r(a.dim_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : a.terms_) r.add_term(k.freq, k.phase, v * c);
    return r;
}

std::string TrigScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) s += " + ";
        first = false;
        s += "(" + c.to_string() + ")";
        bool zero = true;
        for (auto n : k.freq) zero = zero && n == 0;
        if (zero) continue;
        s += k.phase == Phase::Cos ? "cos[" : "sin[";
        for (std::size_t i = 0; i < k.freq.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(k.freq[i]);
        }
        s += "]";
    }
    return s;
}

}  // namespace charcalc
