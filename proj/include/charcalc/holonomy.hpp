#ifndef CHARCALC_HOLONOMY_HPP
#define CHARCALC_HOLONOMY_HPP

#include "charcalc/characters.hpp"
#include "charcalc/cycles.hpp"

#include <vector>

namespace charcalc {

// Parallel transport for degree-1 characters. The connection is the global
// potential on R^n
//   A = theta + a + A_H,   A_H = 1/2 sum_{i<j} c_ij (x_i dx_j - x_j dx_i),
// with theta the coexact primitive of the exact part of the curvature, c_ij
// its constant coefficients and a the constant 1-form fixing the generator
// values. Fiber angles are relative to this trivialization over R^n.

struct TransportState {
    DifferentialCharacter base_character;
    Angle fiber_angle;
    RealVec current_point;  // lift in R^n

    TransportState(DifferentialCharacter h, Angle fiber, RealVec point);
};

/// Moves along the open path. The path must start at current_point mod Z^n;
/// it is shifted by the integer offset so that it starts exactly there.
TransportState transport(const DifferentialCharacter& h, const PLLoop& path, const TransportState& start);

/// Transport around the closed loop from angle 0, corrected for the
/// non-periodicity of A_H. Throws NotClosed.
Angle holonomy(const DifferentialCharacter& h, const PLLoop& loop);

/// Coordinate box [lo, hi] in R^n. Each side is shorter than 1 so the box
/// embeds in the torus.
struct ChartBox {
    RealVec lo;
    RealVec hi;
    bool contains(const RealVec& p) const;
};

struct DiamondConfig {
    RealVec x, x_prime, y, y_prime;
    RealVec u, u0, v, v0;
    ChartBox chart_x, chart_x_prime, chart_y, chart_y_prime;
    /// Interior vertices of the path gamma from x to y; empty means straight.
    std::vector<RealVec> gamma_interior;
};

struct DiamondResult {
    Angle holonomy;  // h(eta_{u,v})
    Real integral;   // curvature over the two triangulated diamonds
    bool equal(double tol = kAngleTolerance) const { return holonomy.near(Angle(integral), tol); }
};

/// eta_{u,v} = ux * gamma * yv * vy' * y'v0 * v0y * gamma^-1 * xu0 * u0x' * x'u
/// against the triangles [x,u0,x'] + [x,x',u] + [y,v,y'] + [y,y',v0].
/// Throws PointsNotInChart.
DiamondResult diamond_transition(const DifferentialCharacter& h, const DiamondConfig& cfg);
bool diamond_transition_check(const DifferentialCharacter& h, const DiamondConfig& cfg,
                              double tol = kAngleTolerance);

}  // namespace charcalc

#endif
