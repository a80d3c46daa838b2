#ifndef CHARCALC_TRANSGRESSION_HPP
#define CHARCALC_TRANSGRESSION_HPP

#include "charcalc/characters.hpp"
#include "charcalc/flux.hpp"
#include "charcalc/trig.hpp"

#include <optional>
#include <vector>

namespace charcalc {

/// An affine map Phi: S = T^d -> M = T^m viewed as a point of the mapping space.
using MapPoint = AffineMap;

/// Tangent vector at Phi: a section of Phi^* TM, one trig scalar on S per
/// coordinate direction of M.
struct TangentAtMap {
    MapPoint base;
    std::vector<TrigScalar> value;  // size m, each of dimension d

    TangentAtMap(MapPoint base, std::vector<TrigScalar> value);
    /// X o Phi.
    static TangentAtMap along(const TrigField& X, const MapPoint& phi);
    /// -Phi_* u.
    static TangentAtMap pushed(const TrigField& u, const MapPoint& phi);
};

/// (alpha hat beta)_Phi(U, V) = integral over S of Phi^*(i_V i_U (alpha o Phi)) ^ beta,
/// where i_U feeds U into the first slot.
QTwoPi hat_form_at(const TrigForm& alpha, const TrigForm& beta, const TangentAtMap& U, const TangentAtMap& V);

/// Same quantity with a constant-in-s translation part that need not be
/// rational, and constant tangent vectors. Double precision; exact for
/// trig integrands up to rounding.
double hat_form_numeric(const TrigForm& alpha, const TrigForm& beta, const IntMatrix& A, const std::vector<double>& p,
                        const std::vector<double>& U, const std::vector<double>& V);

/// Homotopy from the geodesic loop to Phi_t + amplitude * sin(2 pi q t) * direction.
struct Wiggle {
    RealVec direction;
    Real amplitude{0};
    int harmonic = 1;
};

/// t -> (s -> A s + base + speed t), optionally wiggled.
struct MapLoop {
    IntMatrix A;  // m x d
    RealVec base;
    std::vector<std::int64_t> speed;
    std::optional<Wiggle> wiggle;

    int target_dim() const { return static_cast<int>(A.size()); }
    int source_dim() const { return A.empty() ? 0 : static_cast<int>(A[0].size()); }
    void validate() const;
    /// Gamma: T^{1+d} -> T^m, (t, s) -> A s + base + speed t.
    AffineMap gamma() const;
    MapPoint at_zero() const;
};

/// Subcases: x exact curvature, x * y = i(a ^ curv y) with x = i(a); y exact
/// curvature, x * i(b) = (-1)^(deg x + 1) i(curv x ^ b). Anything else is
/// UnsupportedStarProduct. The curvature rule is asserted on every call.
DifferentialCharacter star_product(const DifferentialCharacter& x, const DifferentialCharacter& y);

/// (h hat g)(gamma) via (Gamma^* h * pr_2^* g) on the fundamental class of
/// T^{1+d}, plus the curvature integral over the declared wiggle homotopy.
Angle loop_holonomy(const DifferentialCharacter& h, const DifferentialCharacter& g, const MapLoop& gamma);

/// Integral over the wiggle homotopy of (alpha hat beta)(d_r H, d_t H).
double wiggle_correction(const TrigForm& alpha, const TrigForm& beta, const MapLoop& gamma);

struct FormComparison {
    QTwoPi lhs;
    QTwoPi rhs;
    bool equal() const { return lhs == rhs; }
};

struct AngleComparison {
    Angle lhs;
    Angle rhs;
    bool equal(double tol = kAngleTolerance) const { return lhs.near(rhs, tol); }
};

/// hat(alpha; phi o Phi, phi_* U, phi_* V) against hat(phi^* alpha; Phi, U, V).
FormComparison equivariance_check_A(const TrigForm& alpha, const TrigForm& beta, const AffineDiffeo& phi,
                                    const TangentAtMap& U, const TangentAtMap& V);
/// hat(alpha, beta; Phi o psi^-1, U o psi^-1, V o psi^-1) against
/// hat(alpha, psi^* beta; Phi, U, V). Requires det psi = +1.
FormComparison equivariance_check_B(const TrigForm& alpha, const TrigForm& beta, const AffineDiffeo& psi,
                                    const TangentAtMap& U, const TangentAtMap& V);
/// loop_holonomy(phi^* h, g, gamma) against loop_holonomy(h, g, phi o gamma).
AngleComparison equivariance_check_A(const DifferentialCharacter& h, const DifferentialCharacter& g,
                                     const AffineDiffeo& phi, const MapLoop& gamma);
/// loop_holonomy(h, g, gamma o psi^-1) against loop_holonomy(h, psi^* g, gamma).
AngleComparison equivariance_check_B(const DifferentialCharacter& h, const DifferentialCharacter& g,
                                     const AffineDiffeo& psi, const MapLoop& gamma);

MapLoop compose_left(const AffineDiffeo& phi, const MapLoop& gamma);
/// gamma o psi^-1.
MapLoop compose_right_inverse(const MapLoop& gamma, const AffineDiffeo& psi);

}  // namespace charcalc

#endif
