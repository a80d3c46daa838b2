#include "charcalc/errors.hpp"
#include "charcalc/trig.hpp"

#include <algorithm>
#include <cstdlib>

namespace charcalc {

namespace {

void check_tuple(int dim, int degree, const Indices& I) {
    if (static_cast<int>(I.size()) != degree)
        throw InvalidArgument("index tuple length does not match degree " + std::to_string(degree));
    for (std::size_t p = 0; p < I.size(); ++p) {
        if (I[p] < 0 || I[p] >= dim) throw InvalidArgument("index out of range for dimension " + std::to_string(dim));
        if (p > 0 && I[p] <= I[p - 1]) throw InvalidArgument("index tuple not strictly increasing");
    }
}

}  // namespace

// ---- TrigForm ---------------------------------------------------------------

TrigForm::TrigForm(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1) throw InvalidArgument("torus dimension must be positive");
    if (degree < 0) throw InvalidArgument("negative form degree");
}

TrigForm::TrigForm(int dim, int degree, const Components& comps) : TrigForm(dim, degree) {
    for (const auto& [I, f] : comps) add_component(I, f);
}

TrigForm TrigForm::from_scalar(const TrigScalar& f) {
    TrigForm r(f.dim(), 0);
    r.add_component({}, f);
    return r;
}

TrigForm TrigForm::basis(int dim, const Indices& I, const TrigScalar& coeff) {
    TrigForm r(dim, static_cast<int>(I.size()));
    r.add_component(I, coeff);
    return r;
}

TrigForm TrigForm::basis(int dim, const Indices& I, const QTwoPi& coeff) {
    return basis(dim, I, TrigScalar::constant(dim, coeff));
}

TrigScalar TrigForm::coeff(const Indices& I) const {
    const auto it = comps_.find(I);
    return it == comps_.end() ? TrigScalar(dim_) : it->second;
}

void TrigForm::add_component(const Indices& I, const TrigScalar& f) {
    check_tuple(dim_, degree_, I);
    if (f.dim() != dim_) throw DimensionMismatch("component scalar dimension differs from form dimension");
    if (f.is_zero()) return;
    auto it = comps_.find(I);
    if (it == comps_.end()) {
        comps_.emplace(I, f);
    } else {
        it->second += f;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

TrigForm TrigForm::operator-() const {
    TrigForm r(dim_, degree_);
    for (const auto& [I, f] : comps_) r.comps_.emplace(I, -f);
    return r;
}

TrigForm& TrigForm::operator+=(const TrigForm& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("adding forms on different tori");
    if (o.degree_ != degree_) throw DegreeMismatch("adding forms of different degree");
    for (const auto& [I, f] : o.comps_) add_component(I, f);
    return *this;
}

TrigForm& TrigForm::operator-=(const TrigForm& o) { return *this += -o; }

TrigForm operator*(const TrigForm& a, const QTwoPi& c) {
    TrigForm r(a.dim_, a.degree_);
    for (const auto& [I, f] : a.comps_) r.add_component(I, f * c);
    return r;
}

TrigForm operator*(const TrigScalar& s, const TrigForm& a) {
    if (s.dim() != a.dim_) throw DimensionMismatch("scalar times form on different tori");
    TrigForm r(a.dim_, a.degree_);
    for (const auto& [I, f] : a.comps_) r.add_component(I, s * f);
    return r;
}

std::int64_t TrigForm::max_abs_freq() const {
    std::int64_t m = 0;
    for (const auto& [I, f] : comps_) m = std::max(m, f.max_abs_freq());
    return m;
}

std::string TrigForm::to_string() const {
    if (comps_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [I, f] : comps_) {
        if (!first) s += " + ";
        first = false;
        s += "[" + f.to_string() + "]";
        for (std::size_t p = 0; p < I.size(); ++p) s += (p ? "^dx" : " dx") + std::to_string(I[p]);
    }
    return s;
}

// ---- TrigField --------------------------------------------------------------

TrigField::TrigField(int dim) {
    if (dim < 1) throw InvalidArgument("torus dimension must be positive");
    comps_.assign(dim, TrigScalar(dim));
}

TrigField::TrigField(std::vector<TrigScalar> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw InvalidArgument("vector field needs at least one component");
    for (const auto& c : comps_)
        if (c.dim() != dim()) throw DimensionMismatch("vector field component dimension mismatch");
}

TrigField TrigField::basis(int dim, int i, const TrigScalar& coeff) {
    TrigField X(dim);
    if (i < 0 || i >= dim) throw InvalidArgument("basis field index out of range");
    X.comps_[i] = coeff;
    return X;
}

bool TrigField::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const TrigScalar& c) { return c.is_zero(); });
}

TrigScalar TrigField::apply(const TrigScalar& f) const {
    if (f.dim() != dim()) throw DimensionMismatch("vector field applied to scalar on another torus");
    TrigScalar r(dim());
    for (int i = 0; i < dim(); ++i)
        if (!comps_[i].is_zero()) r += comps_[i] * f.partial(i);
    return r;
}

TrigField TrigField::operator-() const {
    TrigField r = *this;
    for (auto& c : r.comps_) c = -c;
    return r;
}

TrigField& TrigField::operator+=(const TrigField& o) {
    if (o.dim() != dim()) throw DimensionMismatch("adding fields on different tori");
    for (int i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
    return *this;
}

TrigField& TrigField::operator-=(const TrigField& o) { return *this += -o; }

TrigField operator*(const TrigField& a, const QTwoPi& c) {
    TrigField r = a;
    for (auto& x : r.comps_) x = x * c;
    return r;
}

// ---- AffineMap --------------------------------------------------------------

AffineMap::AffineMap(IntMatrix linear, RealVec translation)
    : src_dim_(linear.empty() ? 0 : static_cast<int>(linear[0].size())),
      linear_(std::move(linear)),
      translation_(std::move(translation)) {
    if (linear_.empty() || src_dim_ < 1) throw InvalidArgument("affine map needs positive dimensions");
    for (const auto& row : linear_)
        if (static_cast<int>(row.size()) != src_dim_) throw InvalidArgument("ragged linear part");
    if (translation_.size() != linear_.size())
        throw DimensionMismatch("translation length differs from target dimension");
}

AffineMap AffineMap::identity(int dim) {
    IntMatrix I(dim, std::vector<std::int64_t>(dim, 0));
    for (int i = 0; i < dim; ++i) I[i][i] = 1;
    return AffineMap(I, RealVec(dim, Real(0)));
}

AffineMap AffineMap::linear_only(IntMatrix linear) {
    const std::size_t m = linear.size();
    return AffineMap(std::move(linear), RealVec(m, Real(0)));
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    if (inner.dst_dim() != src_dim_) throw DimensionMismatch("composing affine maps with mismatched dimensions");
    const int m = dst_dim(), d = inner.src_dim();
    IntMatrix L(m, std::vector<std::int64_t>(d, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < src_dim_; ++k) L[i][j] += linear_[i][k] * inner.linear_[k][j];
    return AffineMap(L, apply(inner.translation_));
}

AffineMap AffineMap::inverse() const {
    const int n = dst_dim();
    if (n != src_dim_) throw InvalidArgument("inverse of a non-square affine map");
    const std::int64_t det = determinant(linear_);
    if (det != 1 && det != -1) throw InvalidArgument("linear part is not unimodular");
    // Adjugate / det is integral for det = +-1.
    IntMatrix inv(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Indices rows, cols;
            for (int r = 0; r < n; ++r)
                if (r != j) rows.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            const std::int64_t cof = n == 1 ? 1 : minor_det(linear_, rows, cols);
            inv[i][j] = (((i + j) % 2) ? -cof : cof) * det;
        }
    }
    RealVec t(n, Real(0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) t[i] -= Real(inv[i][k]) * translation_[k];
    return AffineMap(inv, t);
}

RealVec AffineMap::apply(const RealVec& x) const {
    if (static_cast<int>(x.size()) != src_dim_) throw DimensionMismatch("affine map applied to wrong-length point");
    RealVec y = translation_;
    for (int i = 0; i < dst_dim(); ++i)
        for (int j = 0; j < src_dim_; ++j)
            if (linear_[i][j] != 0) y[i] += Real(linear_[i][j]) * x[j];
    return y;
}

// ---- index helpers ----------------------------------------------------------

std::vector<Indices> increasing_tuples(int n, int k) {
    std::vector<Indices> out;
    if (k < 0 || k > n) return out;
    Indices cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int p = k - 1;
        while (p >= 0 && cur[p] == n - k + p) --p;
        if (p < 0) break;
        ++cur[p];
        for (int q = p + 1; q < k; ++q) cur[q] = cur[q - 1] + 1;
    }
    return out;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int shuffle_sign(const Indices& I, const Indices& J) {
    int inversions = 0;
    for (int a : I)
        for (int b : J) {
            if (a == b) return 0;
            if (a > b) ++inversions;
        }
    return (inversions % 2) ? -1 : 1;
}

Indices merge_sorted(const Indices& I, const Indices& J) {
    Indices out;
    out.reserve(I.size() + J.size());
    std::merge(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(out));
    return out;
}

std::int64_t determinant(const IntMatrix& A) {
    const int n = static_cast<int>(A.size());
    if (n == 0) return 1;
    // Fraction-free Bareiss elimination; exact for integer input.
    std::vector<std::vector<Z>> M(n, std::vector<Z>(n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(A[i].size()) != n) throw InvalidArgument("determinant of non-square matrix");
        for (int j = 0; j < n; ++j) M[i][j] = A[i][j];
    }
    int sign = 1;
    Z prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M[k][k] == 0) {
            int s = k + 1;
            while (s < n && M[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(M[k], M[s]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return (sign * M[n - 1][n - 1]).convert_to<std::int64_t>();
}

std::int64_t minor_det(const IntMatrix& A, const Indices& rows, const Indices& cols) {
    if (rows.size() != cols.size()) throw InvalidArgument("minor with unequal row/column counts");
    IntMatrix S(rows.size(), std::vector<std::int64_t>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) S[i][j] = A.at(rows[i]).at(cols[j]);
    return determinant(S);
}

}  // namespace charcalc
