#include "charcalc/generators.hpp"

#include <algorithm>
#include <numeric>

namespace charcalc::gen {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::int64_t integer(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

Q rational(Rng& rng, std::int64_t max_num, std::int64_t max_den) {
    return Q(integer(rng, -max_num, max_num), integer(rng, 1, max_den));
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

QTwoPi coefficient(Rng& rng, bool allow_two_pi) {
    Q q = rational(rng);
    if (q == 0) q = 1;
    if (allow_two_pi && integer(rng, 0, 3) == 0) return QTwoPi::monomial(static_cast<int>(integer(rng, -1, 1)), q);
    return QTwoPi(q);
}

TrigScalar scalar(Rng& rng, int dim, int terms, int max_freq, bool allow_constant) {
    TrigScalar f(dim);
    for (int t = 0; t < terms; ++t) {
        Freq n(dim);
        bool zero = true;
        for (auto& x : n) {
            x = integer(rng, -max_freq, max_freq);
            zero = zero && x == 0;
        }
        if (zero && !allow_constant) n[integer(rng, 0, dim - 1)] = 1;
        f.add_term(n, integer(rng, 0, 1) ? Phase::Cos : Phase::Sin, coefficient(rng));
    }
    return f;
}

TrigForm form(Rng& rng, int dim, int degree, int terms, int max_freq) {
    TrigForm f(dim, degree);
    const auto tuples = increasing_tuples(dim, degree);
    if (tuples.empty()) return f;
    for (int t = 0; t < terms; ++t) {
        const auto& I = tuples[integer(rng, 0, static_cast<std::int64_t>(tuples.size()) - 1)];
        f.add_component(I, scalar(rng, dim, 2, max_freq));
    }
    return f;
}

TrigField field(Rng& rng, int dim, int terms, int max_freq) {
    std::vector<TrigScalar> comps;
    for (int i = 0; i < dim; ++i) comps.push_back(scalar(rng, dim, terms, max_freq));
    return TrigField(comps);
}

TrigForm integral_closed_form(Rng& rng, int dim, int degree, int terms, int max_freq) {
    TrigForm w(dim, degree);
    if (degree > dim) return w;
    if (degree >= 1) w = exterior_d(form(rng, dim, degree - 1, terms, max_freq));
    for (const auto& I : increasing_tuples(dim, degree))
        if (integer(rng, 0, 1)) w += TrigForm::basis(dim, I, QTwoPi(integer(rng, -2, 2)));
    return w;
}

IntMatrix int_matrix(Rng& rng, int rows, int cols) {
    IntMatrix A(rows, std::vector<std::int64_t>(cols));
    for (auto& r : A)
        for (auto& x : r) x = integer(rng, -2, 2);
    return A;
}

RealVec quarter_vector(Rng& rng, int dim) {
    RealVec v;
    for (int i = 0; i < dim; ++i) v.emplace_back(Q(integer(rng, -4, 4), 4));
    return v;
}

RealVec rational_vector(Rng& rng, int dim, std::int64_t max_den) {
    RealVec v;
    for (int i = 0; i < dim; ++i) {
        const std::int64_t d = integer(rng, 1, max_den);
        v.emplace_back(Q(integer(rng, -d, d), d));
    }
    return v;
}

IntMatrix signed_permutation(Rng& rng, int dim) {
    std::vector<int> p(dim);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    IntMatrix A(dim, std::vector<std::int64_t>(dim, 0));
    for (int i = 0; i < dim; ++i) A[i][p[i]] = integer(rng, 0, 1) ? 1 : -1;
    return A;
}

IntMatrix unimodular(Rng& rng, int dim) {
    IntMatrix A = AffineMap::identity(dim).linear();
    if (dim < 2) return A;
    for (int step = 0; step < 3; ++step) {
        const int i = static_cast<int>(integer(rng, 0, dim - 1));
        int j = static_cast<int>(integer(rng, 0, dim - 2));
        if (j >= i) ++j;
        const std::int64_t c = integer(rng, 0, 1) ? 1 : -1;
        for (int col = 0; col < dim; ++col) A[i][col] += c * A[j][col];
    }
    return A;
}

DifferentialCharacter character(Rng& rng, int dim, int degree, bool exact_hol) {
    const TrigForm curv = integral_closed_form(rng, dim, degree + 1);
    std::vector<Angle> hol;
    for (std::int64_t t = 0; t < binomial(dim, degree); ++t)
        hol.emplace_back(exact_hol ? Real(rational(rng, 7, 8)) : Real::from_double(uniform(rng, 0, 1)));
    return DifferentialCharacter(curv, hol);
}

namespace {

Real coord(Rng& rng, bool floats, double lo, double hi) {
    if (floats) return Real::from_double(uniform(rng, lo, hi));
    const std::int64_t den = 8;
    return Real(Q(integer(rng, static_cast<std::int64_t>(lo * den), static_cast<std::int64_t>(hi * den)), den));
}

RealVec point(Rng& rng, int dim, bool floats, double lo, double hi) {
    RealVec p;
    for (int i = 0; i < dim; ++i) p.push_back(coord(rng, floats, lo, hi));
    return p;
}

RealVec unit(int dim, int i, int sign) {
    RealVec e(dim, Real(0));
    e[i] = Real(sign);
    return e;
}

}  // namespace

Chain small_chain(Rng& rng, int dim, int k, bool floats) {
    Chain c(dim, k);
    const int cells = static_cast<int>(integer(rng, 1, 3));
    for (int t = 0; t < cells; ++t) {
        const std::int64_t coeff = integer(rng, 0, 3) == 0 ? 2 : (integer(rng, 0, 1) ? 1 : -1);
        if (k <= 2) {
            if (k == 2 && integer(rng, 0, 1)) {
                const RealVec a = point(rng, dim, floats, 0, 1);
                std::vector<RealVec> v{a};
                for (int s = 0; s < 2; ++s) {
                    RealVec b = a;
                    for (int i = 0; i < dim; ++i) b[i] += coord(rng, floats, -0.5, 0.5);
                    v.push_back(b);
                }
                c.add(coeff, BoxCell::simplex(v));
            } else {
                std::vector<RealVec> cols;
                for (int s = 0; s < k; ++s) cols.push_back(point(rng, dim, floats, -0.5, 0.5));
                c.add(coeff, BoxCell::cube(point(rng, dim, floats, 0, 1), cols));
            }
        } else {
            // Tube over a translated axis sub-torus: k - 1 unit columns and one free column.
            std::vector<int> axes(dim);
            std::iota(axes.begin(), axes.end(), 0);
            std::shuffle(axes.begin(), axes.end(), rng);
            std::vector<RealVec> cols;
            for (int s = 0; s < k - 1; ++s) cols.push_back(unit(dim, axes[s], integer(rng, 0, 1) ? 1 : -1));
            cols.insert(cols.begin() + integer(rng, 0, k - 1), point(rng, dim, floats, -0.5, 0.5));
            c.add(coeff, BoxCell::cube(point(rng, dim, floats, 0, 1), cols));
        }
    }
    return c;
}

PLLoop pl_loop(Rng& rng, int dim, int interior, bool floats, int max_wind) {
    const RealVec start = point(rng, dim, floats, 0, 1);
    std::vector<RealVec> v{start};
    for (int s = 0; s < interior; ++s) v.push_back(point(rng, dim, floats, -1, 2));
    RealVec end = start;
    for (int i = 0; i < dim; ++i) end[i] += Real(integer(rng, -max_wind, max_wind));
    v.push_back(end);
    return PLLoop(v);
}

TrigField hamiltonian_t2(Rng& rng, int terms, int max_freq) {
    const TrigScalar f = scalar(rng, 2, terms, max_freq, false);
    return TrigField(std::vector<TrigScalar>{f.partial(1), -f.partial(0)});
}

TrigField hamiltonian_t3(Rng& rng, int terms, int max_freq) {
    TrigScalar f(3);
    for (int t = 0; t < terms; ++t) {
        std::int64_t a = integer(rng, -max_freq, max_freq), b = integer(rng, -max_freq, max_freq);
        if (a == 0 && b == 0) b = 1;
        f.add_term({a, b, -a}, integer(rng, 0, 1) ? Phase::Cos : Phase::Sin, coefficient(rng));
    }
    const TrigScalar g = scalar(rng, 3, 1, max_freq);
    return TrigField(std::vector<TrigScalar>{f.partial(1) + g, f.partial(2), g});
}

TrigField curl_t3(Rng& rng, int terms, int max_freq) {
    const TrigScalar a = scalar(rng, 3, terms, max_freq, false);
    const TrigScalar b = scalar(rng, 3, terms, max_freq, false);
    const TrigScalar c = scalar(rng, 3, terms, max_freq, false);
    return TrigField(std::vector<TrigScalar>{c.partial(1) - b.partial(2), a.partial(2) - c.partial(0),
                                             b.partial(0) - a.partial(1)});
}

}  // namespace charcalc::gen
