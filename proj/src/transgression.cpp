#include "charcalc/transgression.hpp"

#include "charcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace charcalc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Form along Phi: target index tuples, coefficients on the source.
using MixedForm = std::map<Indices, TrigScalar>;

void mixed_add(MixedForm& f, const Indices& I, const TrigScalar& c) {
    if (c.is_zero()) return;
    auto it = f.find(I);
    if (it == f.end()) {
        f.emplace(I, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) f.erase(it);
    }
}

MixedForm compose_along(const TrigForm& alpha, const MapPoint& phi) {
    MixedForm out;
    for (const auto& [I, c] : alpha.components()) mixed_add(out, I, compose_affine(c, phi));
    return out;
}

MixedForm mixed_interior(const std::vector<TrigScalar>& U, const MixedForm& f) {
    MixedForm out;
    for (const auto& [I, c] : f)
        for (std::size_t p = 0; p < I.size(); ++p) {
            const TrigScalar& u = U[I[p]];
            if (u.is_zero()) continue;
            Indices J = I;
            J.erase(J.begin() + static_cast<long>(p));
            const TrigScalar t = u * c;
            mixed_add(out, J, p % 2 ? -t : t);
        }
    return out;
}

TrigForm mixed_pullback(const MixedForm& f, const IntMatrix& A, int d, int degree) {
    TrigForm out(d, degree);
    if (degree > d) return out;
    const auto targets = increasing_tuples(d, degree);
    for (const auto& [I, c] : f)
        for (const auto& J : targets) {
            const std::int64_t m = minor_det(A, I, J);
            if (m != 0) out.add_component(J, c * QTwoPi(Q(m)));
        }
    return out;
}

// ---- pointwise exterior algebra in double precision ----

using PForm = std::map<Indices, double>;

PForm eval_form(const TrigForm& f, const std::vector<double>& x) {
    PForm out;
    for (const auto& [I, c] : f.components()) out[I] = c.eval(x);
    return out;
}

PForm p_interior(const std::vector<double>& u, const PForm& f) {
    PForm out;
    for (const auto& [I, c] : f)
        for (std::size_t p = 0; p < I.size(); ++p) {
            const double v = u[I[p]];
            if (v == 0.0) continue;
            Indices J = I;
            J.erase(J.begin() + static_cast<long>(p));
            out[J] += (p % 2 ? -1.0 : 1.0) * v * c;
        }
    return out;
}

double det_small(std::vector<std::vector<double>> M) {
    const std::size_t n = M.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(M[i][k]) > std::fabs(M[piv][k])) piv = i;
        if (M[piv][k] == 0.0) return 0.0;
        if (piv != k) {
            std::swap(M[piv], M[k]);
            det = -det;
        }
        det *= M[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double r = M[i][k] / M[k][k];
            for (std::size_t j = k; j < n; ++j) M[i][j] -= r * M[k][j];
        }
    }
    return det;
}

// Pullback along a Jacobian J (m x D).
PForm p_pullback(const PForm& f, const std::vector<std::vector<double>>& J, int D) {
    PForm out;
    for (const auto& [I, c] : f) {
        if (c == 0.0) continue;
        const int k = static_cast<int>(I.size());
        for (const auto& K : increasing_tuples(D, k)) {
            std::vector<std::vector<double>> M(k, std::vector<double>(k));
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) M[a][b] = J[I[a]][K[b]];
            const double m = det_small(M);
            if (m != 0.0) out[K] += c * m;
        }
    }
    return out;
}

PForm p_wedge(const PForm& f, const PForm& g) {
    PForm out;
    for (const auto& [I, a] : f)
        for (const auto& [J, b] : g) {
            const int s = shuffle_sign(I, J);
            if (s != 0) out[merge_sorted(I, J)] += s * a * b;
        }
    return out;
}

double top_coeff(const PForm& f, int D) {
    Indices top(D);
    for (int i = 0; i < D; ++i) top[i] = i;
    const auto it = f.find(top);
    return it == f.end() ? 0.0 : it->second;
}

// Iterates over the N^D equispaced grid on T^D.
template <class Fn>
void for_grid(int D, int N, Fn fn) {
    std::vector<int> idx(D, 0);
    std::vector<double> s(D, 0.0);
    while (true) {
        for (int i = 0; i < D; ++i) s[i] = static_cast<double>(idx[i]) / N;
        fn(s);
        int p = 0;
        while (p < D && ++idx[p] == N) idx[p++] = 0;
        if (p == D) break;
    }
}

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
}

std::vector<double> to_doubles(const RealVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
    return out;
}

void require_loop_degrees(const DifferentialCharacter& h, const DifferentialCharacter& g, const MapLoop& gamma) {
    gamma.validate();
    if (h.dim() != gamma.target_dim()) throw DimensionMismatch("character h does not live on the loop's target");
    if (g.dim() != gamma.source_dim()) throw DimensionMismatch("character g does not live on the loop's source");
    if (h.degree() + g.degree() != gamma.source_dim())
        throw DegreeMismatch("deg h + deg g must equal the source dimension");
}

// Largest |A^T n| entry over the frequencies n of alpha.
std::int64_t source_freq_bound(const TrigForm& alpha, const IntMatrix& A) {
    const int m = static_cast<int>(A.size()), d = A.empty() ? 0 : static_cast<int>(A[0].size());
    std::int64_t fa = 0;
    for (const auto& [I, c] : alpha.components())
        for (const auto& [key, v] : c.terms())
            for (int j = 0; j < d; ++j) {
                std::int64_t f = 0;
                for (int i = 0; i < m; ++i) f += A[i][j] * key.freq[i];
                fa = std::max<std::int64_t>(fa, std::llabs(f));
            }
    return fa;
}

// Integral over T^{1+d} of Gamma_1^* a ^ pr_2^* beta for the wiggled loop.
double direct_wiggled(const RealForm& a, const TrigForm& beta, const MapLoop& gamma) {
    const int m = gamma.target_dim(), d = gamma.source_dim(), D = d + 1;
    const Wiggle& wg = *gamma.wiggle;
    const auto e = to_doubles(wg.direction);
    const auto base = to_doubles(gamma.base);
    const double c = wg.amplitude.to_double();
    const int q = wg.harmonic;
    const int Ns = static_cast<int>(source_freq_bound(a.trig, gamma.A) + beta.max_abs_freq() + 1);
    const int Nt = 256;
    PForm a_const;
    for (const auto& [I, v] : a.constant) a_const[I] = v.to_double();
    double total = 0.0;
    for (int it = 0; it < Nt; ++it) {
        const double t = static_cast<double>(it) / Nt;
        const double sn = std::sin(kTwoPi * q * t), cs = std::cos(kTwoPi * q * t);
        for_grid(d, Ns, [&](const std::vector<double>& s) {
            std::vector<double> x(m);
            std::vector<std::vector<double>> J(m, std::vector<double>(D));
            for (int i = 0; i < m; ++i) {
                x[i] = base[i] + static_cast<double>(gamma.speed[i]) * t + c * sn * e[i];
                for (int j = 0; j < d; ++j) x[i] += static_cast<double>(gamma.A[i][j]) * s[j];
                J[i][0] = static_cast<double>(gamma.speed[i]) + c * kTwoPi * q * cs * e[i];
                for (int j = 0; j < d; ++j) J[i][j + 1] = static_cast<double>(gamma.A[i][j]);
            }
            PForm ax = eval_form(a.trig, x);
            for (const auto& [I, v] : a_const) ax[I] += v;
            const PForm pulled = p_pullback(ax, J, D);
            PForm b;
            for (const auto& [I, v] : eval_form(beta, s)) {
                Indices shifted;
                for (int i : I) shifted.push_back(i + 1);
                b[shifted] = v;
            }
            total += top_coeff(p_wedge(pulled, b), D);
        });
    }
    return total / (static_cast<double>(Nt) * std::pow(static_cast<double>(Ns), d));
}

}  // namespace

// ---- TangentAtMap -----------------------------------------------------------

TangentAtMap::TangentAtMap(MapPoint b, std::vector<TrigScalar> v) : base(std::move(b)), value(std::move(v)) {
    if (static_cast<int>(value.size()) != base.dst_dim()) throw DimensionMismatch("tangent needs one component per target direction");
    for (const auto& c : value)
        if (c.dim() != base.src_dim()) throw DimensionMismatch("tangent component must be a scalar on the source");
}

TangentAtMap TangentAtMap::along(const TrigField& X, const MapPoint& phi) {
    if (X.dim() != phi.dst_dim()) throw DimensionMismatch("field does not live on the target");
    std::vector<TrigScalar> v;
    for (int i = 0; i < X.dim(); ++i) v.push_back(compose_affine(X[i], phi));
    return TangentAtMap(phi, std::move(v));
}

TangentAtMap TangentAtMap::pushed(const TrigField& u, const MapPoint& phi) {
    if (u.dim() != phi.src_dim()) throw DimensionMismatch("field does not live on the source");
    std::vector<TrigScalar> v(phi.dst_dim(), TrigScalar(phi.src_dim()));
    for (int i = 0; i < phi.dst_dim(); ++i)
        for (int j = 0; j < phi.src_dim(); ++j)
            if (phi.linear()[i][j] != 0) v[i] -= u[j] * QTwoPi(Q(phi.linear()[i][j]));
    return TangentAtMap(phi, std::move(v));
}

// ---- hat forms --------------------------------------------------------------

QTwoPi hat_form_at(const TrigForm& alpha, const TrigForm& beta, const TangentAtMap& U, const TangentAtMap& V) {
    if (!(U.base == V.base)) throw BaseMismatch("tangent vectors based at different maps");
    const MapPoint& phi = U.base;
    const int m = phi.dst_dim(), d = phi.src_dim();
    if (alpha.dim() != m) throw DimensionMismatch("alpha must live on the target");
    if (beta.dim() != d) throw DimensionMismatch("beta must live on the source");
    if (alpha.degree() + beta.degree() != d + 2) throw DegreeMismatch("deg alpha + deg beta must be dim S + 2");
    const MixedForm c = mixed_interior(V.value, mixed_interior(U.value, compose_along(alpha, phi)));
    const TrigForm pulled = mixed_pullback(c, phi.linear(), d, alpha.degree() - 2);
    return integrate_torus(wedge(pulled, beta));
}

double hat_form_numeric(const TrigForm& alpha, const TrigForm& beta, const IntMatrix& A, const std::vector<double>& p,
                        const std::vector<double>& U, const std::vector<double>& V) {
    const int m = static_cast<int>(A.size()), d = A.empty() ? 0 : static_cast<int>(A[0].size());
    if (alpha.dim() != m || beta.dim() != d) throw DimensionMismatch("hat form numeric dimensions");
    if (alpha.degree() + beta.degree() != d + 2) throw DegreeMismatch("deg alpha + deg beta must be dim S + 2");
    const int N = static_cast<int>(source_freq_bound(alpha, A) + beta.max_abs_freq() + 1);
    std::vector<std::vector<double>> J(m, std::vector<double>(d));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) J[i][j] = static_cast<double>(A[i][j]);
    double total = 0.0;
    for_grid(d, N, [&](const std::vector<double>& s) {
        std::vector<double> x = p;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < d; ++j) x[i] += J[i][j] * s[j];
        const PForm c = p_interior(V, p_interior(U, eval_form(alpha, x)));
        total += top_coeff(p_wedge(p_pullback(c, J, d), eval_form(beta, s)), d);
    });
    return total / std::pow(static_cast<double>(N), d);
}

// ---- loops ------------------------------------------------------------------

void MapLoop::validate() const {
    const int m = target_dim(), d = source_dim();
    if (m < 1 || d < 1) throw InvalidArgument("loop needs positive source and target dimensions");
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != d) throw InvalidArgument("ragged loop matrix");
    if (static_cast<int>(base.size()) != m || static_cast<int>(speed.size()) != m)
        throw DimensionMismatch("loop base and speed need target length");
    if (wiggle) {
        if (static_cast<int>(wiggle->direction.size()) != m) throw DimensionMismatch("wiggle direction length");
        if (wiggle->harmonic < 1) throw InvalidArgument("wiggle harmonic must be positive");
    }
}

AffineMap MapLoop::gamma() const {
    validate();
    const int m = target_dim(), d = source_dim();
    IntMatrix L(m, std::vector<std::int64_t>(d + 1));
    for (int i = 0; i < m; ++i) {
        L[i][0] = speed[i];
        for (int j = 0; j < d; ++j) L[i][j + 1] = A[i][j];
    }
    return AffineMap(L, base);
}

MapPoint MapLoop::at_zero() const {
    validate();
    return AffineMap(A, base);
}

// ---- star product -----------------------------------------------------------

DifferentialCharacter star_product(const DifferentialCharacter& x, const DifferentialCharacter& y) {
    if (x.dim() != y.dim()) throw DimensionMismatch("star product of characters on different tori");
    const int n = x.dim(), kx = x.degree(), ky = y.degree(), k = kx + ky + 1;
    const TrigForm curv = wedge(x.curvature(), y.curvature());
    std::vector<Angle> hol;
    if (const auto a = as_form(x)) {
        for (const auto& J : increasing_tuples(n, k)) hol.emplace_back(generator_period(*a, y.curvature(), J));
    } else if (const auto b = as_form(y)) {
        // curv x ^ b = (-1)^{(kx+1) ky} b ^ curv x.
        const int sign = (((kx + 1) + (kx + 1) * ky) % 2) ? -1 : 1;
        for (const auto& J : increasing_tuples(n, k))
            hol.emplace_back(Real(sign) * generator_period(*b, x.curvature(), J));
    } else {
        throw UnsupportedStarProduct("both factors have curvature with nonzero harmonic part");
    }
    DifferentialCharacter out(curv, std::move(hol));
    if (const auto a = as_form(x)) {
        if (exterior_d(wedge(a->trig, y.curvature())) != curv)
            throw InternalVerificationFailed("star product curvature rule violated");
    } else {
        const auto b = as_form(y);
        const int sign = ((kx + 1) % 2) ? -1 : 1;
        if (exterior_d(wedge(x.curvature(), b->trig)) * QTwoPi(sign) != curv)
            throw InternalVerificationFailed("star product curvature rule violated");
    }
    return out;
}

Angle loop_holonomy(const DifferentialCharacter& h, const DifferentialCharacter& g, const MapLoop& gamma) {
    require_loop_degrees(h, g, gamma);
    const int d = gamma.source_dim();
    IntMatrix pr(d, std::vector<std::int64_t>(d + 1, 0));
    for (int j = 0; j < d; ++j) pr[j][j + 1] = 1;
    const DifferentialCharacter P =
        star_product(pullback_character(h, gamma.gamma()), pullback_character(g, AffineMap::linear_only(pr)));
    Angle result = P.hol().at(0);
    if (!gamma.wiggle || gamma.wiggle->amplitude.is_zero()) return result;
    result = result + Angle(Real::from_double(wiggle_correction(h.curvature(), g.curvature(), gamma)));
    if (const auto a = as_form(h)) {
        const Angle direct(Real::from_double(direct_wiggled(*a, g.curvature(), gamma)));
        if (!result.near(direct, kAngleTolerance))
            throw InternalVerificationFailed("wiggle correction disagrees with direct integration by " +
                                             std::to_string(result.distance(direct)));
    }
    return result;
}

double wiggle_correction(const TrigForm& alpha, const TrigForm& beta, const MapLoop& gamma) {
    gamma.validate();
    if (!gamma.wiggle) return 0.0;
    const int m = gamma.target_dim();
    const Wiggle& wg = *gamma.wiggle;
    const auto e = to_doubles(wg.direction);
    const auto base = to_doubles(gamma.base);
    const double c = wg.amplitude.to_double();
    const int q = wg.harmonic;
    constexpr int Nr = 24, Nt = 256;
    std::vector<double> rx, rw;
    gauss_legendre(Nr, rx, rw);
    double total = 0.0;
    for (int ir = 0; ir < Nr; ++ir) {
        const double r = rx[ir];
        double row = 0.0;
        for (int it = 0; it < Nt; ++it) {
            const double t = static_cast<double>(it) / Nt;
            const double sn = std::sin(kTwoPi * q * t), cs = std::cos(kTwoPi * q * t);
            std::vector<double> p(m), U(m), V(m);
            for (int i = 0; i < m; ++i) {
                p[i] = base[i] + static_cast<double>(gamma.speed[i]) * t + r * c * sn * e[i];
                U[i] = c * sn * e[i];
                V[i] = static_cast<double>(gamma.speed[i]) + r * c * kTwoPi * q * cs * e[i];
            }
            row += hat_form_numeric(alpha, beta, gamma.A, p, U, V);
        }
        total += rw[ir] * row / Nt;
    }
    return total;
}

// ---- equivariance -----------------------------------------------------------

MapLoop compose_left(const AffineDiffeo& phi, const MapLoop& gamma) {
    gamma.validate();
    if (phi.dim() != gamma.target_dim()) throw DimensionMismatch("diffeomorphism does not act on the loop's target");
    const int m = gamma.target_dim(), d = gamma.source_dim();
    const auto& B = phi.linear();
    MapLoop out;
    out.A.assign(m, std::vector<std::int64_t>(d, 0));
    out.speed.assign(m, 0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < d; ++j) out.A[i][j] += B[i][k] * gamma.A[k][j];
            out.speed[i] += B[i][k] * gamma.speed[k];
        }
    out.base = phi.map().apply(gamma.base);
    if (gamma.wiggle) {
        Wiggle w = *gamma.wiggle;
        RealVec dir(m, Real(0));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                if (B[i][k] != 0) dir[i] += Real(B[i][k]) * gamma.wiggle->direction[k];
        w.direction = dir;
        out.wiggle = w;
    }
    return out;
}

MapLoop compose_right_inverse(const MapLoop& gamma, const AffineDiffeo& psi) {
    gamma.validate();
    if (psi.dim() != gamma.source_dim()) throw DimensionMismatch("diffeomorphism does not act on the loop's source");
    const AffineMap composed = gamma.at_zero().compose(psi.inverse().map());
    MapLoop out = gamma;
    out.A = composed.linear();
    out.base = composed.translation();
    return out;
}

FormComparison equivariance_check_A(const TrigForm& alpha, const TrigForm& beta, const AffineDiffeo& phi,
                                    const TangentAtMap& U, const TangentAtMap& V) {
    if (phi.dim() != U.base.dst_dim()) throw DimensionMismatch("diffeomorphism does not act on the target");
    const MapPoint moved = phi.map().compose(U.base);
    auto push = [&](const TangentAtMap& W) {
        const int m = phi.dim();
        std::vector<TrigScalar> v(m, TrigScalar(W.base.src_dim()));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                if (phi.linear()[i][k] != 0) v[i] += W.value[k] * QTwoPi(Q(phi.linear()[i][k]));
        return TangentAtMap(moved, std::move(v));
    };
    return FormComparison{hat_form_at(alpha, beta, push(U), push(V)),
                          hat_form_at(pullback_affine(phi.map(), alpha), beta, U, V)};
}

FormComparison equivariance_check_B(const TrigForm& alpha, const TrigForm& beta, const AffineDiffeo& psi,
                                    const TangentAtMap& U, const TangentAtMap& V) {
    if (psi.det() != 1) throw InvalidArgument("source diffeomorphism must preserve orientation");
    if (psi.dim() != U.base.src_dim()) throw DimensionMismatch("diffeomorphism does not act on the source");
    const AffineMap inv = psi.inverse().map();
    const MapPoint moved = U.base.compose(inv);
    auto pull = [&](const TangentAtMap& W) {
        std::vector<TrigScalar> v;
        for (const auto& c : W.value) v.push_back(compose_affine(c, inv));
        return TangentAtMap(moved, std::move(v));
    };
    return FormComparison{hat_form_at(alpha, beta, pull(U), pull(V)),
                          hat_form_at(alpha, pullback_affine(psi.map(), beta), U, V)};
}

AngleComparison equivariance_check_A(const DifferentialCharacter& h, const DifferentialCharacter& g,
                                     const AffineDiffeo& phi, const MapLoop& gamma) {
    return AngleComparison{loop_holonomy(pullback_character(h, phi.map()), g, gamma),
                           loop_holonomy(h, g, compose_left(phi, gamma))};
}

AngleComparison equivariance_check_B(const DifferentialCharacter& h, const DifferentialCharacter& g,
                                     const AffineDiffeo& psi, const MapLoop& gamma) {
    if (psi.det() != 1) throw InvalidArgument("source diffeomorphism must preserve orientation");
    return AngleComparison{loop_holonomy(h, g, compose_right_inverse(gamma, psi)),
                           loop_holonomy(h, pullback_character(g, psi.map()), gamma)};
}

}  // namespace charcalc
