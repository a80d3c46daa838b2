#ifndef CHARCALC_SUITES_HPP
#define CHARCALC_SUITES_HPP

#include "charcalc/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace charcalc {

inline constexpr std::uint64_t kDefaultSuiteSeed = 20240611;

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_error = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what, double error = 0);
    bool passed() const { return cases > 0 && failures == 0; }
};

std::vector<std::string> suite_names();
/// Throws UnknownSuite.
Report run_suite(const std::string& name, std::uint64_t seed = kDefaultSuiteSeed);

namespace props {

// calculus
PropertyResult d_squared(std::uint64_t seed, int cases);
PropertyResult cartan_formula(std::uint64_t seed, int cases);
PropertyResult bracket_interior(std::uint64_t seed, int cases);
PropertyResult pullback_naturality(std::uint64_t seed, int cases);

// characters
PropertyResult curvature_axiom(std::uint64_t seed, int cases, int dim);
PropertyResult evaluate_homomorphism(std::uint64_t seed, int cases);
PropertyResult exact_sequences();

// flux
PropertyResult flux_agreement(std::uint64_t seed, int cases, int dim);
PropertyResult flux_additivity(std::uint64_t seed, int cases, int dim);
PropertyResult flux_h_independence(std::uint64_t seed, int cases, int dim);
PropertyResult exact_field_kernel(std::uint64_t seed, int cases);

// transgression
PropertyResult hat_tau_consistency(std::uint64_t seed, int cases);
PropertyResult hat_nu_consistency(std::uint64_t seed, int cases);
PropertyResult equivariance_forms(std::uint64_t seed, int cases);
PropertyResult equivariance_characters(std::uint64_t seed, int cases);

// extensions; scenario 0 is (T^2, dx^dy), 1 is (T^3, dx^dy + dy^dz), 2 is (T^3, dx^dy^dz)
PropertyResult jacobi_centrality(std::uint64_t seed, int cases, int scenario);
PropertyResult trivialization_tau(std::uint64_t seed, int cases, int scenario);
PropertyResult trivialization_nu(std::uint64_t seed, int cases, int scenario);
PropertyResult integrality(std::uint64_t seed, int cases);
PropertyResult xi_restriction(std::uint64_t seed, int cases);

// holonomy
PropertyResult holonomy_reconstruction(std::uint64_t seed, int cases, int dim);
PropertyResult holonomy_curvature(std::uint64_t seed, int cases);
PropertyResult thin_homotopy(std::uint64_t seed, int cases);
PropertyResult transport_equivariance(std::uint64_t seed, int cases);
PropertyResult transport_concatenation(std::uint64_t seed, int cases);
PropertyResult square_holonomy();
PropertyResult diamond_identity(std::uint64_t seed, int cases);

}  // namespace props

}  // namespace charcalc

#endif
