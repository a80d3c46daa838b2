#ifndef CHARCALC_GENERATORS_HPP
#define CHARCALC_GENERATORS_HPP

#include "charcalc/characters.hpp"
#include "charcalc/cycles.hpp"
#include "charcalc/trig.hpp"

#include <cstdint>
#include <random>

namespace charcalc::gen {

using Rng = std::mt19937_64;

/// Deterministic child seed for the i-th stream of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::int64_t integer(Rng& rng, std::int64_t lo, std::int64_t hi);
/// p/q with |p| <= max_num, 1 <= q <= max_den.
Q rational(Rng& rng, std::int64_t max_num = 5, std::int64_t max_den = 6);
double uniform(Rng& rng, double lo, double hi);
/// Rational coefficient, occasionally carrying a power of 2 pi.
QTwoPi coefficient(Rng& rng, bool allow_two_pi = false);

TrigScalar scalar(Rng& rng, int dim, int terms = 3, int max_freq = 2, bool allow_constant = true);
TrigForm form(Rng& rng, int dim, int degree, int terms = 2, int max_freq = 2);
TrigField field(Rng& rng, int dim, int terms = 2, int max_freq = 2);
/// Exact part plus integer harmonic part.
TrigForm integral_closed_form(Rng& rng, int dim, int degree, int terms = 2, int max_freq = 2);
/// Integer matrix with entries in [-2, 2].
IntMatrix int_matrix(Rng& rng, int rows, int cols);
/// Translation with quarter phases so that affine pullback stays exact.
RealVec quarter_vector(Rng& rng, int dim);
RealVec rational_vector(Rng& rng, int dim, std::int64_t max_den = 7);
/// Signed permutation matrix.
IntMatrix signed_permutation(Rng& rng, int dim);
/// Unimodular matrix with det +1.
IntMatrix unimodular(Rng& rng, int dim);

DifferentialCharacter character(Rng& rng, int dim, int degree, bool exact_hol = true);

/// Random supported (k)-chain: small cube cells, and k = 2 simplices.
Chain small_chain(Rng& rng, int dim, int k, bool floats);
/// Random closed PL loop with the given number of interior vertices.
PLLoop pl_loop(Rng& rng, int dim, int interior, bool floats, int max_wind = 1);

/// Exact symmetry fields of the constant forms used by the suites.
/// dx^dy on T^2: Hamiltonian fields (f_y, -f_x).
TrigField hamiltonian_t2(Rng& rng, int terms = 2, int max_freq = 2);
/// dx^dy + dy^dz on T^3: Hamiltonian part of f(x - z, y) plus a multiple of the kernel d/dx + d/dz.
TrigField hamiltonian_t3(Rng& rng, int terms = 2, int max_freq = 2);
/// dx^dy^dz on T^3: curl of a coexact 1-form.
TrigField curl_t3(Rng& rng, int terms = 2, int max_freq = 2);

}  // namespace charcalc::gen

#endif
