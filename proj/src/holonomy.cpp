#include "charcalc/holonomy.hpp"

#include "charcalc/errors.hpp"

#include <cmath>

namespace charcalc {

namespace {

struct Potential {
    TrigForm theta;
    std::vector<Real> a;
    std::vector<std::pair<Indices, Q>> c;  // constant curvature coefficients
};

Potential potential_of(const DifferentialCharacter& h) {
    if (h.degree() != 1) throw DegreeMismatch("transport needs a degree-1 character");
    const int n = h.dim();
    Potential p{primitive(h.curvature(), false), {}, {}};
    for (int i = 0; i < n; ++i)
        p.a.push_back(h.hol()[i].value() - generator_period(p.theta, {i}).to_real());
    const TrigForm harmonic = harmonic_part(h.curvature());
    for (const auto& [I, s] : harmonic.components()) p.c.emplace_back(I, s.mean().rational());
    return p;
}

Real segment_integral(const Potential& pot, const RealVec& p, const RealVec& q) {
    const int n = static_cast<int>(p.size());
    RealVec delta(n);
    bool moves = false;
    for (int i = 0; i < n; ++i) {
        delta[i] = q[i] - p[i];
        moves = moves || !delta[i].is_zero();
    }
    if (!moves) return Real(0);
    Real total(0);
    if (!pot.theta.is_zero()) total += integrate_cell(pot.theta, BoxCell::segment(p, q));
    for (int i = 0; i < n; ++i)
        if (!delta[i].is_zero() && !pot.a[i].is_zero()) total += pot.a[i] * delta[i];
    // The quadratic terms of A_H cancel along a straight segment.
    for (const auto& [I, c] : pot.c) {
        const int i = I[0], j = I[1];
        total += Real(c / 2) * (p[i] * delta[j] - p[j] * delta[i]);
    }
    return total;
}

Real path_integral(const Potential& pot, const std::vector<RealVec>& v) {
    Real total(0);
    for (std::size_t s = 0; s + 1 < v.size(); ++s) total += segment_integral(pot, v[s], v[s + 1]);
    return total;
}

void require_in(const ChartBox& box, const RealVec& p, const char* what) {
    if (!box.contains(p)) throw PointsNotInChart(std::string(what) + " is not in its declared chart");
}

}  // namespace

TransportState::TransportState(DifferentialCharacter h, Angle fiber, RealVec point)
    : base_character(std::move(h)), fiber_angle(fiber), current_point(std::move(point)) {
    if (static_cast<int>(current_point.size()) != base_character.dim())
        throw DimensionMismatch("transport point length");
}

TransportState transport(const DifferentialCharacter& h, const PLLoop& path, const TransportState& start) {
    if (path.ambient != h.dim()) throw DimensionMismatch("path and character on different tori");
    if (static_cast<int>(start.current_point.size()) != h.dim()) throw DimensionMismatch("transport point length");
    const int n = h.dim();
    RealVec shift(n);
    for (int i = 0; i < n; ++i) {
        shift[i] = start.current_point[i] - path.vertices.front()[i];
        const bool integral =
            shift[i].is_exact() ? frac_q(shift[i].exact()) == 0 : dist_mod1(shift[i], Real(0)) <= kCellTolerance;
        if (!integral) throw PathMismatch("path does not start at the current point");
    }
    std::vector<RealVec> v;
    for (const auto& p : path.vertices) {
        RealVec q(n);
        for (int i = 0; i < n; ++i) q[i] = p[i] + shift[i];
        v.push_back(q);
    }
    v.front() = start.current_point;
    const Potential pot = potential_of(h);
    return TransportState(h, start.fiber_angle + Angle(path_integral(pot, v)), v.back());
}

Angle holonomy(const DifferentialCharacter& h, const PLLoop& loop) {
    if (loop.ambient != h.dim()) throw DimensionMismatch("loop and character on different tori");
    const auto m = loop.closure_defect();
    const Potential pot = potential_of(h);
    Real total = path_integral(pot, loop.vertices);
    const RealVec& P = loop.vertices.front();
    for (const auto& [I, c] : pot.c) {
        const int i = I[0], j = I[1];
        // Gauge change between P and P + m, with the quadratic refinement c m_i m_j / 2.
        total += Real(c / 2) * (P[i] * Real(m[j]) - P[j] * Real(m[i]) + Real(m[i] * m[j]));
    }
    return Angle(total);
}

bool ChartBox::contains(const RealVec& p) const {
    if (p.size() != lo.size() || p.size() != hi.size()) throw DimensionMismatch("chart and point lengths differ");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if ((hi[i] - lo[i]).to_double() >= 1.0) throw InvalidArgument("chart side must be shorter than 1");
        if ((p[i] - lo[i]).to_double() < 0 || (hi[i] - p[i]).to_double() < 0) return false;
    }
    return true;
}

DiamondResult diamond_transition(const DifferentialCharacter& h, const DiamondConfig& cfg) {
    if (h.degree() != 1) throw DegreeMismatch("diamond check needs a degree-1 character");
    require_in(cfg.chart_x, cfg.x, "x");
    require_in(cfg.chart_x, cfg.u, "u");
    require_in(cfg.chart_x, cfg.u0, "u0");
    require_in(cfg.chart_x_prime, cfg.x_prime, "x'");
    require_in(cfg.chart_x_prime, cfg.u, "u");
    require_in(cfg.chart_x_prime, cfg.u0, "u0");
    require_in(cfg.chart_y, cfg.y, "y");
    require_in(cfg.chart_y, cfg.v, "v");
    require_in(cfg.chart_y, cfg.v0, "v0");
    require_in(cfg.chart_y_prime, cfg.y_prime, "y'");
    require_in(cfg.chart_y_prime, cfg.v, "v");
    require_in(cfg.chart_y_prime, cfg.v0, "v0");

    std::vector<RealVec> eta{cfg.u, cfg.x};
    eta.insert(eta.end(), cfg.gamma_interior.begin(), cfg.gamma_interior.end());
    for (const auto& p : {cfg.y, cfg.v, cfg.y_prime, cfg.v0, cfg.y}) eta.push_back(p);
    eta.insert(eta.end(), cfg.gamma_interior.rbegin(), cfg.gamma_interior.rend());
    for (const auto& p : {cfg.x, cfg.u0, cfg.x_prime, cfg.u}) eta.push_back(p);

    Chain diamonds(h.dim(), 2);
    diamonds.add(1, BoxCell::simplex({cfg.x, cfg.u0, cfg.x_prime}));
    diamonds.add(1, BoxCell::simplex({cfg.x, cfg.x_prime, cfg.u}));
    diamonds.add(1, BoxCell::simplex({cfg.y, cfg.v, cfg.y_prime}));
    diamonds.add(1, BoxCell::simplex({cfg.y, cfg.y_prime, cfg.v0}));
    return DiamondResult{holonomy(h, PLLoop(eta)), integrate_chain(h.curvature(), diamonds)};
}

bool diamond_transition_check(const DifferentialCharacter& h, const DiamondConfig& cfg, double tol) {
    return diamond_transition(h, cfg).equal(tol);
}

}  // namespace charcalc
