#include "charcalc/errors.hpp"
#include "charcalc/trig.hpp"

#include <algorithm>

namespace charcalc {

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b));
}

// Constant-coefficient form at a fixed (frequency, phase), used by the
// per-frequency Hodge projections.
using ConstForm = std::map<Indices, QTwoPi>;

void add_to(ConstForm& f, const Indices& I, const QTwoPi& c) {
    if (c.is_zero()) return;
    auto it = f.find(I);
    if (it == f.end()) {
        f.emplace(I, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) f.erase(it);
    }
}

// n^flat ^ C.
ConstForm covector_wedge(const Freq& n, const ConstForm& C) {
    ConstForm out;
    for (const auto& [I, c] : C)
        for (int i = 0; i < static_cast<int>(n.size()); ++i) {
            if (n[i] == 0) continue;
            const int s = shuffle_sign({i}, I);
            if (s == 0) continue;
            add_to(out, merge_sorted({i}, I), c * Q(s * n[i]));
        }
    return out;
}

// i_n C for the constant vector n.
ConstForm vector_contract(const Freq& n, const ConstForm& C) {
    ConstForm out;
    for (const auto& [I, c] : C)
        for (std::size_t p = 0; p < I.size(); ++p) {
            if (n[I[p]] == 0) continue;
            Indices J = I;
            J.erase(J.begin() + static_cast<long>(p));
            add_to(out, J, c * Q((p % 2 ? -1 : 1) * n[I[p]]));
        }
    return out;
}

ConstForm scale(const ConstForm& C, const Q& q) {
    ConstForm out;
    for (const auto& [I, c] : C) add_to(out, I, c * q);
    return out;
}

// Groups a form by (frequency, phase).
std::map<TrigKey, ConstForm> by_frequency(const TrigForm& f) {
    std::map<TrigKey, ConstForm> out;
    for (const auto& [I, s] : f.components())
        for (const auto& [k, c] : s.terms()) add_to(out[k], I, c);
    return out;
}

void deposit(TrigForm& f, const TrigKey& key, const ConstForm& C) {
    for (const auto& [I, c] : C) f.add_component(I, TrigScalar::term(key.freq, key.phase, c));
}

bool is_zero_freq(const Freq& n) {
    return std::all_of(n.begin(), n.end(), [](std::int64_t v) { return v == 0; });
}

std::int64_t norm2(const Freq& n) {
    std::int64_t s = 0;
    for (auto v : n) s += v * v;
    return s;
}

}  // namespace

TrigForm exterior_d(const TrigForm& f) {
    TrigForm r(f.dim(), f.degree() + 1);
    for (const auto& [I, s] : f.components())
        for (int i = 0; i < f.dim(); ++i) {
            const int sign = shuffle_sign({i}, I);
            if (sign == 0) continue;
            const TrigScalar ds = s.partial(i);
            if (ds.is_zero()) continue;
            r.add_component(merge_sorted({i}, I), sign > 0 ? ds : -ds);
        }
    return r;
}

TrigForm wedge(const TrigForm& f, const TrigForm& g) {
    require_same_dim(f.dim(), g.dim(), "wedge");
    TrigForm r(f.dim(), f.degree() + g.degree());
    for (const auto& [I, a] : f.components())
        for (const auto& [J, b] : g.components()) {
            const int sign = shuffle_sign(I, J);
            if (sign == 0) continue;
            const TrigScalar ab = a * b;
            r.add_component(merge_sorted(I, J), sign > 0 ? ab : -ab);
        }
    return r;
}

TrigForm interior(const TrigField& X, const TrigForm& f) {
    require_same_dim(X.dim(), f.dim(), "interior");
    if (f.degree() == 0) return TrigForm(f.dim(), 0);
    TrigForm r(f.dim(), f.degree() - 1);
    for (const auto& [I, s] : f.components())
        for (std::size_t p = 0; p < I.size(); ++p) {
            const TrigScalar& xi = X[I[p]];
            if (xi.is_zero()) continue;
            Indices J = I;
            J.erase(J.begin() + static_cast<long>(p));
            const TrigScalar t = xi * s;
            r.add_component(J, p % 2 ? -t : t);
        }
    return r;
}

TrigForm lie_derivative(const TrigField& X, const TrigForm& f) {
    require_same_dim(X.dim(), f.dim(), "lie_derivative");
    TrigForm r = interior(X, exterior_d(f));
    if (f.degree() > 0) r += exterior_d(interior(X, f));
    return r;
}

TrigField bracket_fields(const TrigField& X, const TrigField& Y) {
    require_same_dim(X.dim(), Y.dim(), "bracket_fields");
    std::vector<TrigScalar> comps;
    comps.reserve(X.dim());
    for (int j = 0; j < X.dim(); ++j) comps.push_back(X.apply(Y[j]) - Y.apply(X[j]));
    return TrigField(std::move(comps));
}

TrigScalar compose_affine(const TrigScalar& f, const AffineMap& phi) {
    require_same_dim(f.dim(), phi.dst_dim(), "compose_affine");
    const int d = phi.src_dim();
    TrigScalar r(d);
    const auto& A = phi.linear();
    for (const auto& [k, c] : f.terms()) {
        Freq m(d, 0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < phi.dst_dim(); ++i) m[j] += A[i][j] * k.freq[i];
        Real t(0);
        for (int i = 0; i < phi.dst_dim(); ++i)
            if (k.freq[i] != 0) t += Real(k.freq[i]) * phi.translation()[i];
        const auto q = quarter_index(t);
        if (!q) throw InexactTranslation("phase " + t.to_string() + " is not a multiple of 1/4");
        // cos(a + q pi/2), sin(a + q pi/2) as signed cos/sin of a.
        static const int cos_sign[4][2] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        static const int sin_sign[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
        const auto& tab = k.phase == Phase::Cos ? cos_sign[*q] : sin_sign[*q];
        if (tab[0] != 0) r.add_term(m, Phase::Cos, c * Q(tab[0]));
        if (tab[1] != 0) r.add_term(m, Phase::Sin, c * Q(tab[1]));
    }
    return r;
}

TrigForm pullback_affine(const AffineMap& phi, const TrigForm& f) {
    require_same_dim(f.dim(), phi.dst_dim(), "pullback_affine");
    const int d = phi.src_dim();
    TrigForm r(d, f.degree());
    if (f.degree() > d) return r;
    const auto targets = increasing_tuples(d, f.degree());
    for (const auto& [I, s] : f.components()) {
        const TrigScalar sc = compose_affine(s, phi);
        if (sc.is_zero()) continue;
        for (const auto& J : targets) {
            const std::int64_t m = minor_det(phi.linear(), I, J);
            if (m != 0) r.add_component(J, sc * QTwoPi(Q(m)));
        }
    }
    return r;
}

QTwoPi integrate_torus(const TrigForm& f) {
    if (f.degree() != f.dim())
        throw DegreeMismatch("integrate_torus needs a top-degree form, got degree " + std::to_string(f.degree()) +
                             " on T^" + std::to_string(f.dim()));
    Indices top(f.dim());
    for (int i = 0; i < f.dim(); ++i) top[i] = i;
    return f.coeff(top).mean();
}

TrigForm fiber_integrate(const TrigForm& f, const Indices& fiber_dims) {
    Indices F = fiber_dims;
    std::sort(F.begin(), F.end());
    if (std::adjacent_find(F.begin(), F.end()) != F.end()) throw InvalidArgument("repeated fiber index");
    for (int i : F)
        if (i < 0 || i >= f.dim()) throw InvalidArgument("fiber index out of range");
    const int p = f.dim() - static_cast<int>(F.size());
    if (p < 1) throw InvalidArgument("fiber_integrate needs at least one parameter direction; use integrate_torus");
    if (f.degree() < static_cast<int>(F.size())) return TrigForm(p, 0);

    std::vector<int> new_index(f.dim(), -1);
    Indices params;
    for (int i = 0, c = 0; i < f.dim(); ++i)
        if (!std::binary_search(F.begin(), F.end(), i)) {
            new_index[i] = c++;
            params.push_back(i);
        }

    TrigForm r(p, f.degree() - static_cast<int>(F.size()));
    for (const auto& [I, s] : f.components()) {
        if (!std::includes(I.begin(), I.end(), F.begin(), F.end())) continue;
        Indices P;
        std::set_difference(I.begin(), I.end(), F.begin(), F.end(), std::back_inserter(P));
        // dx^I = sign * dx^P ^ dx^F.
        const int sign = shuffle_sign(P, F);
        TrigScalar g(p);
        for (const auto& [k, c] : s.terms()) {
            bool fiber_zero = true;
            for (int i : F) fiber_zero = fiber_zero && k.freq[i] == 0;
            if (!fiber_zero) continue;
            Freq m(p);
            for (int j = 0; j < p; ++j) m[j] = k.freq[params[j]];
            g.add_term(m, k.phase, sign > 0 ? c : -c);
        }
        Indices Pn;
        for (int i : P) Pn.push_back(new_index[i]);
        r.add_component(Pn, g);
    }
    return r;
}

bool is_closed(const TrigForm& f) { return exterior_d(f).is_zero(); }

TrigForm harmonic_part(const TrigForm& f) {
    TrigForm r(f.dim(), f.degree());
    for (const auto& [I, s] : f.components()) {
        const QTwoPi m = s.mean();
        if (!m.is_zero()) r.add_component(I, TrigScalar::constant(f.dim(), m));
    }
    return r;
}

HodgeSplit hodge_split(const TrigForm& f) {
    HodgeSplit out{TrigForm(f.dim(), f.degree()), TrigForm(f.dim(), f.degree()), TrigForm(f.dim(), f.degree())};
    for (const auto& [key, C] : by_frequency(f)) {
        if (is_zero_freq(key.freq)) {
            deposit(out.harmonic, key, C);
            continue;
        }
        // With n^2 = |n|^2:  C = (n ^ i_n C + i_n (n ^ C)) / n^2.
        const Q inv(1, norm2(key.freq));
        deposit(out.exact, key, scale(covector_wedge(key.freq, vector_contract(key.freq, C)), inv));
        deposit(out.coexact, key, scale(vector_contract(key.freq, covector_wedge(key.freq, C)), inv));
    }
    return out;
}

TrigForm primitive(const TrigForm& f, bool require_exact) {
    if (f.degree() == 0) throw DegreeMismatch("a function has no primitive");
    if (!is_closed(f)) throw NotClosed("primitive of a form that is not closed");
    TrigForm psi(f.dim(), f.degree() - 1);
    for (const auto& [key, C] : by_frequency(f)) {
        if (is_zero_freq(key.freq)) {
            if (require_exact) throw NotExact("harmonic part is nonzero");
            continue;
        }
        // d(sin(2 pi n.x) B) = 2 pi cos(2 pi n.x) n ^ B and
        // d(-cos(2 pi n.x) B) = 2 pi sin(2 pi n.x) n ^ B, with B = i_n C / (2 pi n^2).
        const ConstForm B = scale(vector_contract(key.freq, C), Q(1, norm2(key.freq)));
        for (const auto& [J, c] : B) {
            const QTwoPi cc = c.shifted(-1);
            if (key.phase == Phase::Cos)
                psi.add_component(J, TrigScalar::term(key.freq, Phase::Sin, cc));
            else
                psi.add_component(J, TrigScalar::term(key.freq, Phase::Cos, -cc));
        }
    }
    return psi;
}

TrigForm canonical_class(const TrigForm& f) {
    const HodgeSplit h = hodge_split(f);
    return h.harmonic + h.coexact;
}

}  // namespace charcalc
