#ifndef CHARCALC_CYCLES_HPP
#define CHARCALC_CYCLES_HPP

#include "charcalc/rational.hpp"
#include "charcalc/trig.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace charcalc {

/// Face identification tolerance when floats are involved.
inline constexpr double kCellTolerance = 1e-12;

enum class CellShape { Cube, Simplex };

/// Affine singular cell u -> base + L u on [0,1]^k (cube) or on the standard
/// simplex (simplex), followed by the projection to T^n. Columns of L may be
/// arbitrary reals; the cell is a closed sub-torus only for integer columns.
struct BoxCell {
    int ambient = 0;
    int k = 0;
    std::vector<RealVec> columns;  // k columns of length ambient
    RealVec base;
    int orientation = 1;
    CellShape shape = CellShape::Cube;

    static BoxCell cube(RealVec base, std::vector<RealVec> columns, int orientation = 1);
    static BoxCell simplex(const std::vector<RealVec>& vertices, int orientation = 1);
    static BoxCell segment(const RealVec& from, const RealVec& to);
    /// The generator sub-torus T_J through the origin.
    static BoxCell generator(int ambient, const Indices& J);

    /// A cube whose columns are all nonzero integer vectors.
    bool is_cycle() const;
    bool is_degenerate() const;
    void validate() const;
};

class Chain {
public:
    Chain(int ambient, int k);
    static Chain of(const BoxCell& cell, std::int64_t coeff = 1);

    int ambient() const { return ambient_; }
    int k() const { return k_; }
    const std::vector<std::pair<std::int64_t, BoxCell>>& cells() const { return cells_; }
    bool is_zero() const { return cells_.empty(); }

    /// Adds coeff * cell. Orientation is absorbed, bases reduced mod Z^n,
    /// degenerate cells dropped and equal cells merged.
    void add(std::int64_t coeff, const BoxCell& cell);
    Chain& operator+=(const Chain& o);
    Chain& operator-=(const Chain& o);
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator*(std::int64_t s, const Chain& c);
    /// Same cells up to the identification tolerance.
    bool equals(const Chain& o) const;

private:
    int ambient_;
    int k_;
    std::vector<std::pair<std::int64_t, BoxCell>> cells_;
};

/// Piecewise-linear path given by a lift to R^n. It is a loop on the torus
/// when end - start is integral.
struct PLLoop {
    int ambient = 0;
    std::vector<RealVec> vertices;

    explicit PLLoop(std::vector<RealVec> vertices);
    bool is_closed() const;
    /// end - start; throws NotClosed when not integral.
    std::vector<std::int64_t> closure_defect() const;
    Chain to_chain() const;
    /// This path followed by `next`, whose lift is shifted by an integer vector to
    /// start at our end. Throws PathMismatch when the endpoints differ on the torus.
    PLLoop concat(const PLLoop& next) const;
    PLLoop reversed() const;
};

struct HomologyClass {
    int ambient = 0;
    int k = 0;
    std::vector<std::int64_t> coefficients;  // over increasing_tuples(ambient, k)

    static HomologyClass zero(int ambient, int k);
    friend bool operator==(const HomologyClass&, const HomologyClass&) = default;
};

/// Canonical form used for face identification: positive columns, sorted
/// columns (cubes) or vertices (simplices), base in [0,1)^n.
BoxCell canonical_cell(const BoxCell& c, int* sign);
bool same_cell(const BoxCell& a, const BoxCell& b);

Chain boundary(const Chain& c);
HomologyClass homology_class(const Chain& z);
HomologyClass winding(const PLLoop& loop);
Chain translate(const Chain& c, const RealVec& v);

struct BoundingChain {
    HomologyClass cls;
    Chain sigma;
};
/// sigma with boundary(sigma) = z - sum_J cls_J T_J, verified before return.
BoundingChain bounding_chain(const Chain& z);
BoundingChain bounding_chain(const PLLoop& loop);

/// Sum over generators cls_J * T_J.
Chain generator_chain(const HomologyClass& cls);

/// Integral of a k-form over a k-chain. Exact when every term reduces to a
/// rational zero-frequency contribution; otherwise a closed-form float.
Real integrate_chain(const TrigForm& f, const Chain& c);
Real integrate_cell(const TrigForm& f, const BoxCell& cell);

}  // namespace charcalc

#endif
