#include "charcalc/cycles.hpp"

#include "charcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace charcalc {

namespace {

using cplx = std::complex<double>;

int cmp_real(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) {
        if (a.exact() == b.exact()) return 0;
        return a.exact() < b.exact() ? -1 : 1;
    }
    const double d = a.to_double() - b.to_double();
    if (std::fabs(d) <= kCellTolerance) return 0;
    return d < 0 ? -1 : 1;
}

int cmp_vec(const RealVec& a, const RealVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = cmp_real(a[i], b[i])) return c;
    return 0;
}

bool vec_is_zero(const RealVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Real& x) { return cmp_real(x, Real(0)) == 0; });
}

bool leading_negative(const RealVec& v) {
    for (const auto& x : v) {
        const int c = cmp_real(x, Real(0));
        if (c != 0) return c < 0;
    }
    return false;
}

RealVec add(const RealVec& a, const RealVec& b) {
    RealVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RealVec sub(const RealVec& a, const RealVec& b) {
    RealVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Real reduce_mod1(const Real& x) {
    Real f = frac(x);
    if (!f.is_exact() && f.to_double() > 1.0 - kCellTolerance) return Real::from_double(0.0);
    return f;
}

bool same_mod1(const RealVec& a, const RealVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact() && b[i].is_exact()) {
            if (frac_q(a[i].exact() - b[i].exact()) != 0) return false;
        } else if (dist_mod1(a[i], b[i]) > kCellTolerance) {
            return false;
        }
    }
    return true;
}

// Sorts in place and returns the permutation parity.
template <class T, class Cmp>
int sort_with_parity(std::vector<T>& v, Cmp less) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && less(v[j], v[j - 1]); --j) {
            std::swap(v[j], v[j - 1]);
            sign = -sign;
        }
    return sign;
}

Real det_real(const std::vector<RealVec>& M) {
    const std::size_t n = M.size();
    if (n == 0) return Real(1);
    if (n == 1) return M[0][0];
    if (n == 2) return M[0][0] * M[1][1] - M[0][1] * M[1][0];
    Real s(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        std::vector<RealVec> sub;
        for (std::size_t i = 1; i < n; ++i) {
            RealVec row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(M[i][c]);
            sub.push_back(row);
        }
        const Real t = M[0][j] * det_real(sub);
        s = (j % 2) ? s - t : s + t;
    }
    return s;
}

// (e^z - 1) / z.
cplx e1(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 24; ++k) {
            term *= z / static_cast<double>(k + 1);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

// exp[a, b].
cplx dd1(cplx a, cplx b) { return std::exp(b) * e1(a - b); }

// exp[a, b, c], stable for clustered nodes.
cplx dd2(cplx a, cplx b, cplx c) {
    cplx nodes[3] = {a, b, c};
    double best = -1;
    int bx = 0, bz = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(nodes[i] - nodes[j]) > best) {
                best = std::abs(nodes[i] - nodes[j]);
                bx = i;
                bz = j;
            }
    const cplx x = nodes[bx], z = nodes[bz], y = nodes[3 - bx - bz];
    if (best >= 0.5) return (dd1(x, y) - dd1(y, z)) / (x - z);
    // All nodes within 0.5: series in complete homogeneous polynomials.
    const cplx m = (a + b + c) / 3.0;
    const cplx u = a - m, v = b - m, w = c - m;
    constexpr int N = 30;
    cplx h1[N], h2[N], h3[N];
    h1[0] = 1.0;
    for (int n = 1; n < N; ++n) h1[n] = h1[n - 1] * u;
    for (int n = 0; n < N; ++n) {
        h2[n] = h1[n];
        if (n > 0) h2[n] += v * h2[n - 1];
    }
    for (int n = 0; n < N; ++n) {
        h3[n] = h2[n];
        if (n > 0) h3[n] += w * h3[n - 1];
    }
    cplx sum = 0.0;
    double fact = 2.0;
    for (int n = 0; n < N; ++n) {
        sum += h3[n] / fact;
        fact *= static_cast<double>(n + 3);
    }
    return std::exp(m) * sum;
}

// Integral of exp(sum_j z_j u_j) over [0,1]^k or the standard simplex.
cplx exp_integral(CellShape shape, const std::vector<cplx>& z) {
    if (shape == CellShape::Cube || z.size() <= 1) {
        cplx r = 1.0;
        for (auto zj : z) r *= e1(zj);
        return r;
    }
    if (z.size() == 2) return dd2(0.0, z[0], z[1]);
    throw Unsupported("integration over simplices of dimension above 2");
}

Q inv_factorial(int k) {
    Z f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Q(Z(1), f);
}

}  // namespace

// ---- BoxCell ----------------------------------------------------------------

BoxCell BoxCell::cube(RealVec base, std::vector<RealVec> columns, int orientation) {
    BoxCell c;
    c.ambient = static_cast<int>(base.size());
    c.k = static_cast<int>(columns.size());
    c.columns = std::move(columns);
    c.base = std::move(base);
    c.orientation = orientation;
    c.shape = CellShape::Cube;
    c.validate();
    return c;
}

BoxCell BoxCell::simplex(const std::vector<RealVec>& vertices, int orientation) {
    if (vertices.empty()) throw InvalidArgument("simplex needs vertices");
    BoxCell c;
    c.ambient = static_cast<int>(vertices[0].size());
    c.k = static_cast<int>(vertices.size()) - 1;
    c.base = vertices[0];
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        if (vertices[i].size() != vertices[0].size()) throw DimensionMismatch("simplex vertex length");
        c.columns.push_back(sub(vertices[i], vertices[0]));
    }
    c.orientation = orientation;
    c.shape = c.k >= 2 ? CellShape::Simplex : CellShape::Cube;
    c.validate();
    return c;
}

BoxCell BoxCell::segment(const RealVec& from, const RealVec& to) { return simplex({from, to}); }

BoxCell BoxCell::generator(int ambient, const Indices& J) {
    std::vector<RealVec> cols;
    for (int j : J) {
        RealVec e(ambient, Real(0));
        e.at(j) = Real(1);
        cols.push_back(e);
    }
    return cube(RealVec(ambient, Real(0)), cols);
}

bool BoxCell::is_cycle() const {
    if (shape != CellShape::Cube) return false;
    for (const auto& col : columns) {
        if (vec_is_zero(col)) return false;
        for (const auto& x : col)
            if (!x.is_exact() || frac_q(x.exact()) != 0) return false;
    }
    return true;
}

bool BoxCell::is_degenerate() const {
    for (const auto& col : columns)
        if (vec_is_zero(col)) return true;
    if (shape == CellShape::Simplex)
        for (std::size_t i = 0; i < columns.size(); ++i)
            for (std::size_t j = i + 1; j < columns.size(); ++j)
                if (cmp_vec(columns[i], columns[j]) == 0) return true;
    return false;
}

void BoxCell::validate() const {
    if (ambient < 1) throw InvalidArgument("cell ambient dimension must be positive");
    if (k < 0 || static_cast<int>(columns.size()) != k) throw InvalidArgument("cell column count differs from k");
    if (static_cast<int>(base.size()) != ambient) throw DimensionMismatch("cell base length");
    for (const auto& col : columns)
        if (static_cast<int>(col.size()) != ambient) throw DimensionMismatch("cell column length");
    if (orientation != 1 && orientation != -1) throw InvalidArgument("orientation must be +1 or -1");
}

BoxCell canonical_cell(const BoxCell& c, int* sign) {
    BoxCell r = c;
    int s = r.orientation;
    r.orientation = 1;
    if (r.k <= 1) r.shape = CellShape::Cube;
    if (r.shape == CellShape::Cube) {
        for (auto& col : r.columns)
            if (leading_negative(col)) {
                r.base = add(r.base, col);
                for (auto& x : col) x = -x;
                s = -s;
            }
        s *= sort_with_parity(r.columns, [](const RealVec& a, const RealVec& b) { return cmp_vec(a, b) < 0; });
    } else {
        std::vector<RealVec> verts{r.base};
        for (const auto& col : r.columns) verts.push_back(add(r.base, col));
        s *= sort_with_parity(verts, [](const RealVec& a, const RealVec& b) { return cmp_vec(a, b) < 0; });
        r.base = verts[0];
        for (int i = 0; i < r.k; ++i) r.columns[i] = sub(verts[i + 1], verts[0]);
    }
    for (auto& x : r.base) x = reduce_mod1(x);
    if (sign) *sign = s;
    return r;
}

bool same_cell(const BoxCell& a, const BoxCell& b) {
    if (a.shape != b.shape || a.k != b.k || a.ambient != b.ambient) return false;
    for (int i = 0; i < a.k; ++i)
        if (cmp_vec(a.columns[i], b.columns[i]) != 0) return false;
    return same_mod1(a.base, b.base);
}

// ---- Chain ------------------------------------------------------------------

Chain::Chain(int ambient, int k) : ambient_(ambient), k_(k) {
    if (ambient < 1 || k < 0) throw InvalidArgument("chain needs positive ambient dimension and k >= 0");
}

Chain Chain::of(const BoxCell& cell, std::int64_t coeff) {
    Chain c(cell.ambient, cell.k);
    c.add(coeff, cell);
    return c;
}

void Chain::add(std::int64_t coeff, const BoxCell& cell) {
    cell.validate();
    if (cell.ambient != ambient_ || cell.k != k_) throw DimensionMismatch("cell does not match chain dimensions");
    if (coeff == 0 || cell.is_degenerate()) return;
    int s = 1;
    BoxCell canon = canonical_cell(cell, &s);
    const std::int64_t c = coeff * s;
    for (auto it = cells_.begin(); it != cells_.end(); ++it)
        if (same_cell(it->second, canon)) {
            it->first += c;
            if (it->first == 0) cells_.erase(it);
            return;
        }
    cells_.emplace_back(c, std::move(canon));
}

Chain& Chain::operator+=(const Chain& o) {
    if (o.ambient_ != ambient_ || o.k_ != k_) throw DimensionMismatch("adding chains of different dimensions");
    for (const auto& [c, cell] : o.cells_) add(c, cell);
    return *this;
}

Chain& Chain::operator-=(const Chain& o) {
    if (o.ambient_ != ambient_ || o.k_ != k_) throw DimensionMismatch("subtracting chains of different dimensions");
    for (const auto& [c, cell] : o.cells_) add(-c, cell);
    return *this;
}

Chain operator*(std::int64_t s, const Chain& c) {
    Chain r(c.ambient_, c.k_);
    for (const auto& [k, cell] : c.cells_) r.add(s * k, cell);
    return r;
}

bool Chain::equals(const Chain& o) const {
    Chain d = *this;
    d -= o;
    return d.is_zero();
}

// ---- PLLoop -----------------------------------------------------------------

PLLoop::PLLoop(std::vector<RealVec> verts) : vertices(std::move(verts)) {
    if (vertices.empty()) throw InvalidArgument("path needs at least one vertex");
    ambient = static_cast<int>(vertices[0].size());
    if (ambient < 1) throw InvalidArgument("path ambient dimension must be positive");
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != ambient) throw DimensionMismatch("path vertex length");
}

bool PLLoop::is_closed() const {
    for (int i = 0; i < ambient; ++i) {
        const Real d = vertices.back()[i] - vertices.front()[i];
        if (d.is_exact() ? frac_q(d.exact()) != 0 : dist_mod1(d, Real(0)) > kCellTolerance) return false;
    }
    return true;
}

std::vector<std::int64_t> PLLoop::closure_defect() const {
    if (!is_closed()) throw NotClosed("path end - start is not integral");
    std::vector<std::int64_t> m(ambient);
    for (int i = 0; i < ambient; ++i)
        m[i] = static_cast<std::int64_t>(std::llround((vertices.back()[i] - vertices.front()[i]).to_double()));
    return m;
}

Chain PLLoop::to_chain() const {
    Chain c(ambient, 1);
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) c.add(1, BoxCell::segment(vertices[i], vertices[i + 1]));
    return c;
}

PLLoop PLLoop::concat(const PLLoop& next) const {
    if (next.ambient != ambient) throw DimensionMismatch("concatenating paths in different dimensions");
    const RealVec shift = sub(vertices.back(), next.vertices.front());
    if (!same_mod1(shift, RealVec(ambient, Real(0))))
        throw PathMismatch("next path does not start where this one ends");
    std::vector<RealVec> v = vertices;
    for (std::size_t i = 1; i < next.vertices.size(); ++i) v.push_back(add(next.vertices[i], shift));
    return PLLoop(v);
}

PLLoop PLLoop::reversed() const {
    std::vector<RealVec> v(vertices.rbegin(), vertices.rend());
    return PLLoop(v);
}

// ---- homology ---------------------------------------------------------------

HomologyClass HomologyClass::zero(int ambient, int k) {
    return HomologyClass{ambient, k, std::vector<std::int64_t>(binomial(ambient, k), 0)};
}

Chain boundary(const Chain& c) {
    if (c.k() < 1) throw InvalidArgument("boundary of a 0-chain");
    Chain out(c.ambient(), c.k() - 1);
    for (const auto& [coeff, cell] : c.cells()) {
        if (cell.shape == CellShape::Cube) {
            for (int j = 0; j < cell.k; ++j) {
                std::vector<RealVec> cols;
                for (int i = 0; i < cell.k; ++i)
                    if (i != j) cols.push_back(cell.columns[i]);
                for (int eps = 0; eps < 2; ++eps) {
                    const RealVec base = eps ? add(cell.base, cell.columns[j]) : cell.base;
                    const int sign = ((j + 1 + eps) % 2) ? -1 : 1;
                    out.add(coeff * sign, BoxCell::cube(base, cols));
                }
            }
        } else {
            std::vector<RealVec> verts{cell.base};
            for (const auto& col : cell.columns) verts.push_back(add(cell.base, col));
            for (int i = 0; i <= cell.k; ++i) {
                std::vector<RealVec> face;
                for (int v = 0; v <= cell.k; ++v)
                    if (v != i) face.push_back(verts[v]);
                out.add(coeff * ((i % 2) ? -1 : 1), BoxCell::simplex(face));
            }
        }
    }
    return out;
}

HomologyClass homology_class(const Chain& z) {
    const int n = z.ambient(), k = z.k();
    HomologyClass cls = HomologyClass::zero(n, k);
    if (k == 0) {
        for (const auto& [c, cell] : z.cells()) cls.coefficients[0] += c;
        return cls;
    }
    if (!boundary(z).is_zero()) throw NotACycle("chain has nonzero boundary");
    const auto tuples = increasing_tuples(n, k);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        Real total(0);
        for (const auto& [c, cell] : z.cells()) {
            std::vector<RealVec> M(k, RealVec(k));
            for (int r = 0; r < k; ++r)
                for (int col = 0; col < k; ++col) M[r][col] = cell.columns[col][tuples[t][r]];
            Real m = det_real(M);
            if (cell.shape == CellShape::Simplex) m = m * Real(inv_factorial(k));
            total += Real(c) * m;
        }
        if (total.is_exact()) {
            if (frac_q(total.exact()) != 0) throw InternalVerificationFailed("non-integral homology coefficient");
            cls.coefficients[t] = floor_q(total.exact()).convert_to<std::int64_t>();
        } else {
            const double r = std::round(total.to_double());
            if (std::fabs(total.to_double() - r) > 1e-9)
                throw InternalVerificationFailed("non-integral homology coefficient");
            cls.coefficients[t] = static_cast<std::int64_t>(r);
        }
    }
    return cls;
}

HomologyClass winding(const PLLoop& loop) {
    const auto m = loop.closure_defect();
    HomologyClass cls = HomologyClass::zero(loop.ambient, 1);
    for (int i = 0; i < loop.ambient; ++i) cls.coefficients[i] = m[i];
    return cls;
}

Chain translate(const Chain& c, const RealVec& v) {
    Chain out(c.ambient(), c.k());
    for (const auto& [coeff, cell] : c.cells()) {
        BoxCell moved = cell;
        moved.base = add(cell.base, v);
        out.add(coeff, moved);
    }
    return out;
}

Chain generator_chain(const HomologyClass& cls) {
    Chain out(cls.ambient, cls.k);
    const auto tuples = increasing_tuples(cls.ambient, cls.k);
    for (std::size_t t = 0; t < tuples.size(); ++t)
        if (cls.coefficients[t] != 0) out.add(cls.coefficients[t], BoxCell::generator(cls.ambient, tuples[t]));
    return out;
}

// ---- bounding chains --------------------------------------------------------

namespace {

// Axis index of an exact unit column, or -1.
int unit_axis(const RealVec& col) {
    int axis = -1;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (!col[i].is_exact()) return -1;
        const Q& q = col[i].exact();
        if (q == 0) continue;
        if (q != 1 || axis >= 0) return -1;
        axis = static_cast<int>(i);
    }
    return axis;
}

RealVec unit(int n, int i, int s = 1) {
    RealVec e(n, Real(0));
    e[i] = Real(s);
    return e;
}

// Appends the cone-plus-cylinder filling of one closed lift.
void fill_loop(const std::vector<RealVec>& lift, Chain& sigma, HomologyClass& cls) {
    const int n = static_cast<int>(lift[0].size());
    const PLLoop loop(lift);
    const auto m = loop.closure_defect();
    const RealVec& O = lift.front();
    std::vector<RealVec> poly = lift;
    struct Step {
        int axis;
        int sign;
        RealVec point;
    };
    std::vector<Step> steps;
    std::vector<std::int64_t> offset = m;
    for (int i = n - 1; i >= 0; --i) {
        const int s = m[i] > 0 ? 1 : -1;
        for (std::int64_t r = 0; r < std::llabs(m[i]); ++r) {
            offset[i] -= s;
            RealVec p(n);
            for (int a = 0; a < n; ++a) p[a] = O[a] + Real(offset[a]);
            poly.push_back(p);
            RealVec red = p;
            for (auto& x : red) x = reduce_mod1(x);
            steps.push_back({i, s, red});
        }
        cls.coefficients[i] += m[i];
    }
    poly.back() = O;
    for (std::size_t j = 0; j + 1 < poly.size(); ++j) {
        BoxCell tri = BoxCell::simplex({O, poly[j], poly[j + 1]});
        sigma.add(1, tri);
    }
    for (const auto& st : steps)
        sigma.add(-st.sign, BoxCell::cube(RealVec(n, Real(0)), {unit(n, st.axis), st.point}));
}

// Splits a 1-cycle into closed lifts by walking edges.
std::vector<std::vector<RealVec>> split_loops(const Chain& z) {
    struct Edge {
        RealVec start, dir;
    };
    std::vector<Edge> edges;
    for (const auto& [c, cell] : z.cells()) {
        const RealVec& col = cell.columns[0];
        for (std::int64_t r = 0; r < std::llabs(c); ++r) {
            if (c > 0) {
                edges.push_back({cell.base, col});
            } else {
                RealVec neg = col;
                for (auto& x : neg) x = -x;
                edges.push_back({add(cell.base, col), neg});
            }
        }
    }
    std::vector<bool> used(edges.size(), false);
    std::vector<std::vector<RealVec>> loops;
    for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
        if (used[e0]) continue;
        used[e0] = true;
        std::vector<RealVec> lift{edges[e0].start, add(edges[e0].start, edges[e0].dir)};
        while (!same_mod1(lift.back(), lift.front())) {
            std::size_t next = edges.size();
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (!used[e] && same_mod1(edges[e].start, lift.back())) {
                    next = e;
                    break;
                }
            if (next == edges.size()) throw NotACycle("1-chain is not balanced at a vertex");
            used[next] = true;
            lift.push_back(add(lift.back(), edges[next].dir));
        }
        // Snap the closing vertex onto the exact integral translate.
        RealVec& last = lift.back();
        for (std::size_t i = 0; i < last.size(); ++i) {
            const Real d = last[i] - lift.front()[i];
            if (!d.is_exact()) last[i] = lift.front()[i] + Real(static_cast<std::int64_t>(std::llround(d.to_double())));
        }
        loops.push_back(std::move(lift));
    }
    return loops;
}

void verify(const Chain& z, const BoundingChain& out) {
    Chain expected = z - generator_chain(out.cls);
    if (!boundary(out.sigma).equals(expected))
        throw InternalVerificationFailed("boundary of the constructed filling differs from z - sum m_J T_J");
}

}  // namespace

BoundingChain bounding_chain(const Chain& z) {
    const int n = z.ambient(), k = z.k();
    BoundingChain out{HomologyClass::zero(n, k), Chain(n, k + 1)};
    if (k == 0) {
        // p - origin = boundary of the segment from the origin to p.
        for (const auto& [c, cell] : z.cells()) {
            out.cls.coefficients[0] += c;
            out.sigma.add(c, BoxCell::segment(RealVec(n, Real(0)), cell.base));
        }
        verify(z, out);
        return out;
    }
    bool axis_family = true;
    for (const auto& [c, cell] : z.cells()) {
        if (cell.shape != CellShape::Cube) {
            axis_family = false;
            break;
        }
        std::vector<int> axes;
        for (const auto& col : cell.columns) axes.push_back(unit_axis(col));
        Indices sorted(axes.begin(), axes.end());
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front() < 0 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            axis_family = false;
            break;
        }
    }
    if (axis_family) {
        const auto tuples = increasing_tuples(n, k);
        for (const auto& [c, cell] : z.cells()) {
            std::vector<int> axes;
            for (const auto& col : cell.columns) axes.push_back(unit_axis(col));
            const int perm = sort_with_parity(axes, [](int a, int b) { return a < b; });
            const Indices J(axes.begin(), axes.end());
            const auto t = std::find(tuples.begin(), tuples.end(), J) - tuples.begin();
            out.cls.coefficients[t] += c * perm;
            // T_J(p) - T_J = boundary of (-1)^k * cylinder(e_J, p).
            std::vector<RealVec> cols;
            for (int a : J) cols.push_back(unit(n, a));
            cols.push_back(cell.base);
            out.sigma.add(c * perm * ((k % 2) ? -1 : 1), BoxCell::cube(RealVec(n, Real(0)), cols));
        }
    } else if (k == 1) {
        if (!boundary(z).is_zero()) throw NotACycle("chain has nonzero boundary");
        for (const auto& lift : split_loops(z)) fill_loop(lift, out.sigma, out.cls);
    } else {
        throw Unsupported("cycle is neither a sum of translated axis sub-tori nor a 1-cycle");
    }
    verify(z, out);
    return out;
}

BoundingChain bounding_chain(const PLLoop& loop) {
    const int n = loop.ambient;
    loop.closure_defect();
    BoundingChain out{HomologyClass::zero(n, 1), Chain(n, 2)};
    fill_loop(loop.vertices, out.sigma, out.cls);
    verify(loop.to_chain(), out);
    return out;
}

// ---- integration ------------------------------------------------------------

Real integrate_cell(const TrigForm& f, const BoxCell& cell) {
    cell.validate();
    if (f.dim() != cell.ambient) throw DimensionMismatch("form and cell live on different tori");
    if (f.degree() != cell.k) throw DegreeMismatch("form degree differs from cell dimension");
    if (cell.is_degenerate()) return Real(0);
    const int k = cell.k, n = cell.ambient;
    const Q vol = cell.shape == CellShape::Cube ? Q(1) : inv_factorial(k);
    Real total(0);
    for (const auto& [I, s] : f.components()) {
        std::vector<RealVec> M(k, RealVec(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) M[r][c] = cell.columns[c][I[r]];
        const Real minor = det_real(M);
        if (minor.is_zero()) continue;
        for (const auto& [key, coeff] : s.terms()) {
            Real phase(0);
            std::vector<Real> a(k, Real(0));
            for (int i = 0; i < n; ++i) {
                if (key.freq[i] == 0) continue;
                phase += Real(key.freq[i]) * cell.base[i];
                for (int j = 0; j < k; ++j) a[j] += Real(key.freq[i]) * cell.columns[j][i];
            }
            bool all_exact = phase.is_exact() && coeff.is_rational() && minor.is_exact();
            bool all_zero = true, some_int = false;
            for (const auto& aj : a) {
                all_exact = all_exact && aj.is_exact();
                if (aj.is_exact()) {
                    if (aj.exact() != 0) {
                        all_zero = false;
                        if (frac_q(aj.exact()) == 0) some_int = true;
                    }
                } else {
                    all_zero = false;
                }
            }
            if (all_exact && cell.shape == CellShape::Cube && some_int) continue;
            if (all_exact && all_zero) {
                const auto q = quarter_index(phase);
                if (q) {
                    static const int cos_v[4] = {1, 0, -1, 0};
                    static const int sin_v[4] = {0, 1, 0, -1};
                    const int v = key.phase == Phase::Cos ? cos_v[*q] : sin_v[*q];
                    total += Real(coeff.rational() * vol * v) * minor;
                    continue;
                }
            }
            std::vector<cplx> z(k);
            for (int j = 0; j < k; ++j) z[j] = cplx(0.0, 2.0 * std::numbers::pi * a[j].to_double());
            const double ph = 2.0 * std::numbers::pi * frac(phase).to_double();
            const cplx val = std::exp(cplx(0.0, ph)) * exp_integral(cell.shape, z);
            const double part = key.phase == Phase::Cos ? val.real() : val.imag();
            total += Real::from_double(coeff.to_double() * minor.to_double() * part);
        }
    }
    return total;
}

Real integrate_chain(const TrigForm& f, const Chain& c) {
    if (f.dim() != c.ambient()) throw DimensionMismatch("form and chain live on different tori");
    if (f.degree() != c.k()) throw DegreeMismatch("form degree differs from chain dimension");
    Real total(0);
    for (const auto& [coeff, cell] : c.cells()) total += Real(coeff) * integrate_cell(f, cell);
    return total;
}

}  // namespace charcalc
