#ifndef CHARCALC_EXTENSIONS_HPP
#define CHARCALC_EXTENSIONS_HPP

#include "charcalc/trig.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace charcalc {

/// Element (X, [psi]) of the central extension of the exact symmetry fields
/// of omega: L_X omega = 0 and d psi = i_X omega.
struct HatField {
    TrigField X;
    TrigForm psi;
    TrigForm psi_class;  // harmonic + coexact part of psi

    /// Validates d psi = i_X omega and L_X omega = 0.
    static HatField make(const TrigForm& omega, const TrigField& X, const TrigForm& psi);
    static HatField central(const TrigForm& omega, const TrigForm& psi);
};

/// Canonical lift with the coexact primitive. Throws NotSymmetryField or
/// NotExactField.
HatField make_hat(const TrigForm& omega, const TrigField& X);

/// ([a.X, b.X], [i_{a.X} i_{b.X} omega]); also checks the representative
/// [L_{a.X} psi_b].
HatField hat_bracket(const TrigForm& omega, const HatField& a, const HatField& b);
bool hat_equal(const HatField& a, const HatField& b);
bool jacobi_check(const TrigForm& omega, const HatField& a, const HatField& b, const HatField& c);

/// Linear functional on classes of (k-1)-forms: harmonic coefficients plus an
/// optional L2 pairing of the coexact part against a density.
struct Functional {
    int degree = 0;
    std::vector<QTwoPi> harmonic;  // over increasing_tuples(dim, degree)
    std::optional<TrigForm> coexact_density;

    QTwoPi apply(const TrigForm& psi) const;
    QTwoPi apply(const HatField& a) const { return apply(a.psi_class); }
};

struct CocycleValueTable {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<QTwoPi> values;
};

using FieldCocycle = std::function<QTwoPi(const TrigField&, const TrigField&)>;
/// Values on i < j. Antisymmetry is checked on every pair.
CocycleValueTable cocycle_table(const std::vector<TrigField>& fields, const FieldCocycle& c);

QTwoPi tau_cocycle(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& X,
                   const TrigField& Y);
/// Both expressions are evaluated and must agree.
QTwoPi nu_cocycle(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& u,
                  const TrigField& v);

/// F: N -> R/Z with dF = sum_i winding_i ds^i + df.
struct CircleMap {
    std::vector<std::int64_t> winding;
    TrigScalar f;
    TrigForm derivative() const;
};

QTwoPi kappa_cocycle(const TrigForm& mu, const AffineMap& psi, const CircleMap& F, const TrigField& X,
                     const TrigField& Y);
/// [a] -> integral over N of Psi^* a ^ dF on the harmonic (n-2)-forms.
std::vector<QTwoPi> kappa_functional(const TrigForm& mu, const AffineMap& psi, const CircleMap& F);

/// Integral over S of Phi^* psi_X ^ beta.
QTwoPi sigma_beta(const TrigForm& beta, const AffineMap& phi, const HatField& a);
/// Integral over S of Phi^* alpha ^ psi_u, for a hat field on S.
QTwoPi sigma_bar_alpha(const TrigForm& alpha, const AffineMap& phi, const HatField& a);

struct DceResult {
    QTwoPi cocycle;
    QTwoPi coboundary;  // (d_CE sigma)(X, Y) = -sigma([X, Y])
    bool equal() const { return cocycle == coboundary; }
};
/// tau(X, Y) against d_CE sigma_beta on the canonical lifts for omega = alpha.
DceResult dce_check_tau(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& X,
                        const TrigField& Y);
/// nu(u, v) against d_CE sigma_bar_alpha on the canonical lifts for omega = beta.
DceResult dce_check_nu(const TrigForm& alpha, const TrigForm& beta, const AffineMap& phi, const TrigField& u,
                       const TrigField& v);

/// (v, w) -> lambda([v, w], [i_v i_w omega]) on every pair i < j.
CocycleValueTable xi_extension(const TrigForm& omega, const Functional& lambda, const std::vector<TrigField>& fields);
/// Tables of two functionals agreeing on harmonic classes differ by d_CE of
/// (lambda_2 - lambda_1) o lift.
bool xi_restriction_check(const TrigForm& omega, const Functional& l1, const Functional& l2,
                          const std::vector<TrigField>& fields);

struct PdResult {
    std::vector<QTwoPi> lambda_tau;
    std::vector<QTwoPi> lambda_nu;
    bool equal() const { return lambda_tau == lambda_nu; }
};
/// lambda_tau([a]) = m * integral over S of Phi^* a and lambda_nu([a]) = k *
/// integral over M of omega ^ a, on the harmonic (n-2)-forms a.
PdResult pd_compare(const AffineMap& phi, std::int64_t cycle_coefficient, const TrigForm& omega, const QTwoPi& k);

/// Constant term exceeds the sum of the other coefficients' magnitudes,
/// with 2 pi bounded by rationals.
bool is_positive_volume(const TrigForm& mu);

}  // namespace charcalc

#endif
