#ifndef CHARCALC_FLUX_HPP
#define CHARCALC_FLUX_HPP

#include "charcalc/characters.hpp"
#include "charcalc/trig.hpp"

#include <vector>

namespace charcalc {

/// Affine diffeomorphism of T^n: linear part in GL(n, Z).
class AffineDiffeo {
public:
    AffineDiffeo(IntMatrix linear, RealVec translation);
    static AffineDiffeo translation(RealVec b);
    static AffineDiffeo identity(int dim);

    int dim() const { return map_.src_dim(); }
    const AffineMap& map() const { return map_; }
    const IntMatrix& linear() const { return map_.linear(); }
    const RealVec& translation_part() const { return map_.translation(); }
    bool is_translation() const;
    bool is_signed_permutation() const;
    std::int64_t det() const;

    AffineDiffeo inverse() const;
    /// this o inner.
    AffineDiffeo compose(const AffineDiffeo& inner) const;

private:
    explicit AffineDiffeo(AffineMap m);
    AffineMap map_;
};

/// Group flux, in H^k(T^n, R/Z), over increasing_tuples(n, k).
struct FluxValue {
    int degree = 0;
    std::vector<Angle> angles;
    bool near(const FluxValue& o, double tol = kAngleTolerance) const;
};

/// Infinitesimal flux, in H^k(T^n, R).
struct RealFlux {
    int degree = 0;
    std::vector<QTwoPi> values;
    bool is_zero() const;
};

bool preserves_form(const AffineDiffeo& phi, const TrigForm& omega);

/// (phi^-1)^* h - h on the generators. Linear part restricted to signed
/// permutations.
FluxValue group_flux(const DifferentialCharacter& h, const AffineDiffeo& phi);

/// Flux along the straight path t -> x + t b: minus the class of i_b omega,
/// mod 1. This sign agrees with group_flux.
FluxValue path_flux(const TrigForm& omega, const RealVec& b);

/// Harmonic part of i_X omega. Requires L_X omega = 0.
RealFlux infinitesimal_flux(const TrigForm& omega, const TrigField& X);
bool is_exact_field(const TrigForm& omega, const TrigField& X);

}  // namespace charcalc

#endif
