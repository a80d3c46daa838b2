#include "charcalc/json_io.hpp"

#include "charcalc/errors.hpp"

#include <cmath>

namespace charcalc {

namespace {

const Json& at(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
    return *it;
}

const Json* opt(const Json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

const Json& array(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    return j;
}

std::int64_t integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

int small_int(const Json& j, const char* what) { return static_cast<int>(integer(j, what)); }

std::string string(const Json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

std::vector<std::int64_t> int_vec(const Json& j, const char* what) {
    std::vector<std::int64_t> v;
    for (const auto& e : array(j, what)) v.push_back(integer(e, what));
    return v;
}

Indices indices(const Json& j) {
    Indices I;
    for (const auto& e : array(j, "indices")) I.push_back(small_int(e, "index"));
    return I;
}

Json int_matrix_json(const IntMatrix& A) {
    Json j = Json::array();
    for (const auto& row : A) j.push_back(row);
    return j;
}

Json coeff_json(int p, const Q& q) {
    return Json{{"two_pi_pow", p},
                {"num", format_rational(Q(numerator(q)))},
                {"den", format_rational(Q(denominator(q)))}};
}

QTwoPi coeff_from_json(const Json& j) {
    if (j.is_string() || j.is_number_integer()) return QTwoPi(q_from_json(j));
    const int p = small_int(at(j, "two_pi_pow"), "two_pi_pow");
    const Q num = q_from_json(at(j, "num"));
    const Q den = q_from_json(at(j, "den"));
    if (den == 0) throw ParseError("zero denominator");
    return QTwoPi::monomial(p, num / den);
}

Json terms_json(const TrigScalar& f) {
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms())
        for (const auto& [p, q] : c.terms())
            terms.push_back(
                {{"freq", key.freq}, {"phase", key.phase == Phase::Cos ? "cos" : "sin"}, {"coeff", coeff_json(p, q)}});
    return terms;
}

TrigScalar terms_from_json(int dim, const Json& j) {
    TrigScalar f(dim);
    for (const auto& t : array(j, "terms")) {
        Freq freq = int_vec(at(t, "freq"), "freq");
        if (static_cast<int>(freq.size()) != dim) throw ParseError("frequency length differs from dim");
        const std::string ph = string(at(t, "phase"), "phase");
        if (ph != "cos" && ph != "sin") throw ParseError("phase must be cos or sin");
        f.add_term(freq, ph == "cos" ? Phase::Cos : Phase::Sin, coeff_from_json(at(t, "coeff")));
    }
    return f;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

}  // namespace

// ---- scalars ----------------------------------------------------------------

Json to_json(const Q& q) { return format_rational(q); }

Json to_json(const Real& x) {
    if (x.is_exact()) return format_rational(x.exact());
    return x.to_double();
}

Json to_json(const RealVec& v) {
    Json j = Json::array();
    for (const auto& x : v) j.push_back(to_json(x));
    return j;
}

Json to_json(const QTwoPi& c) {
    Json j = Json::array();
    for (const auto& [p, q] : c.terms()) j.push_back(coeff_json(p, q));
    return j;
}

Json to_json(const Angle& a) {
    if (a.is_exact()) {
        const Q& q = a.value().exact();
        return Json{{"exact", {format_rational(Q(numerator(q))), format_rational(Q(denominator(q)))}}};
    }
    return Json{{"float", a.to_double()}};
}

Q q_from_json(const Json& j) {
    if (j.is_number_integer()) return Q(j.get<std::int64_t>());
    if (j.is_string()) return guarded([&] { return parse_rational(j.get<std::string>()); });
    throw ParseError("rational must be a string or an integer");
}

Real real_from_json(const Json& j) {
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) throw ParseError("non-finite real");
        return Real::from_double(x);
    }
    return Real(q_from_json(j));
}

RealVec realvec_from_json(const Json& j) {
    RealVec v;
    for (const auto& e : array(j, "real vector")) v.push_back(real_from_json(e));
    return v;
}

QTwoPi qtwopi_from_json(const Json& j) {
    if (j.is_number_integer() || j.is_string()) return QTwoPi(q_from_json(j));
    QTwoPi c;
    for (const auto& t : array(j, "QTwoPi")) c += coeff_from_json(t);
    return c;
}

Angle angle_from_json(const Json& j) {
    if (const Json* e = opt(j, "exact")) {
        if (!e->is_array() || e->size() != 2) throw ParseError("exact angle needs [num, den]");
        const Q den = q_from_json((*e)[1]);
        if (den == 0) throw ParseError("zero denominator");
        return Angle(Real(q_from_json((*e)[0]) / den));
    }
    if (const Json* f = opt(j, "float")) {
        if (!f->is_number()) throw ParseError("float angle must be a number");
        return Angle(Real::from_double(f->get<double>()));
    }
    throw ParseError("angle needs 'exact' or 'float'");
}

IntMatrix intmatrix_from_json(const Json& j) {
    IntMatrix A;
    for (const auto& row : array(j, "matrix")) A.push_back(int_vec(row, "matrix row"));
    return A;
}

// ---- forms and fields -------------------------------------------------------

Json to_json(const TrigScalar& f) { return Json{{"dim", f.dim()}, {"terms", terms_json(f)}}; }

Json to_json(const TrigForm& f) {
    Json comps = Json::array();
    for (const auto& [I, s] : f.components()) comps.push_back({{"indices", I}, {"terms", terms_json(s)}});
    return Json{{"dim", f.dim()}, {"degree", f.degree()}, {"components", comps}};
}

Json to_json(const TrigField& X) {
    Json comps = Json::array();
    for (const auto& s : X.components()) comps.push_back(terms_json(s));
    return Json{{"dim", X.dim()}, {"components", comps}};
}

TrigScalar scalar_from_json(const Json& j) {
    return guarded([&] { return terms_from_json(small_int(at(j, "dim"), "dim"), at(j, "terms")); });
}

TrigForm form_from_json(const Json& j) {
    return guarded([&] {
        const int dim = small_int(at(j, "dim"), "dim");
        const int degree = small_int(at(j, "degree"), "degree");
        if (dim < 0 || degree < 0) throw ParseError("dim and degree must be non-negative");
        TrigForm f(dim, degree);
        for (const auto& c : array(at(j, "components"), "components")) {
            const Indices I = indices(at(c, "indices"));
            if (static_cast<int>(I.size()) != degree) throw ParseError("component index count differs from degree");
            for (std::size_t k = 0; k < I.size(); ++k)
                if (I[k] < 0 || I[k] >= dim || (k > 0 && I[k] <= I[k - 1]))
                    throw ParseError("component indices must be increasing and below dim");
            f.add_component(I, terms_from_json(dim, at(c, "terms")));
        }
        return f;
    });
}

TrigField field_from_json(const Json& j) {
    return guarded([&] {
        const int dim = small_int(at(j, "dim"), "dim");
        std::vector<TrigScalar> comps;
        for (const auto& c : array(at(j, "components"), "components")) comps.push_back(terms_from_json(dim, c));
        if (static_cast<int>(comps.size()) != dim) throw ParseError("field needs one component per direction");
        return TrigField(comps);
    });
}

// ---- maps -------------------------------------------------------------------

Json to_json(const AffineMap& m) {
    return Json{{"linear", int_matrix_json(m.linear())}, {"translation", to_json(m.translation())}};
}

Json to_json(const AffineDiffeo& phi) { return to_json(phi.map()); }

AffineMap affine_from_json(const Json& j) {
    return guarded([&] {
        return AffineMap(intmatrix_from_json(at(j, "linear")), realvec_from_json(at(j, "translation")));
    });
}

AffineDiffeo diffeo_from_json(const Json& j) {
    return guarded([&] {
        return AffineDiffeo(intmatrix_from_json(at(j, "linear")), realvec_from_json(at(j, "translation")));
    });
}

// ---- chains -----------------------------------------------------------------

Json to_json(const BoxCell& c) {
    Json cols = Json::array();
    for (const auto& col : c.columns) cols.push_back(to_json(col));
    return Json{{"shape", c.shape == CellShape::Cube ? "cube" : "simplex"},
                {"ambient", c.ambient},
                {"k", c.k},
                {"base", to_json(c.base)},
                {"columns", cols},
                {"orientation", c.orientation}};
}

Json to_json(const Chain& c) {
    Json cells = Json::array();
    for (const auto& [coeff, cell] : c.cells()) cells.push_back({{"coeff", coeff}, {"cell", to_json(cell)}});
    return Json{{"ambient", c.ambient()}, {"k", c.k()}, {"cells", cells}};
}

Json to_json(const PLLoop& p) {
    Json v = Json::array();
    for (const auto& x : p.vertices) v.push_back(to_json(x));
    return Json{{"vertices", v}};
}

Json to_json(const HomologyClass& c) {
    return Json{{"ambient", c.ambient}, {"k", c.k}, {"coefficients", c.coefficients}};
}

BoxCell cell_from_json(const Json& j) {
    return guarded([&] {
        const std::string shape = opt(j, "shape") ? string(at(j, "shape"), "shape") : "cube";
        if (shape != "cube" && shape != "simplex") throw ParseError("shape must be cube or simplex");
        std::vector<RealVec> cols;
        for (const auto& c : array(at(j, "columns"), "columns")) cols.push_back(realvec_from_json(c));
        const RealVec base = realvec_from_json(at(j, "base"));
        const int orientation = opt(j, "orientation") ? small_int(at(j, "orientation"), "orientation") : 1;
        BoxCell c = BoxCell::cube(base, cols, orientation);
        c.shape = shape == "cube" ? CellShape::Cube : CellShape::Simplex;
        if (const Json* k = opt(j, "k"); k && small_int(*k, "k") != c.k) throw ParseError("k differs from column count");
        c.validate();
        return c;
    });
}

Chain chain_from_json(const Json& j) {
    return guarded([&] {
        Chain c(small_int(at(j, "ambient"), "ambient"), small_int(at(j, "k"), "k"));
        for (const auto& e : array(at(j, "cells"), "cells")) {
            const BoxCell cell = cell_from_json(at(e, "cell"));
            if (cell.ambient != c.ambient() || cell.k != c.k()) throw ParseError("cell shape differs from chain");
            c.add(integer(at(e, "coeff"), "coeff"), cell);
        }
        return c;
    });
}

PLLoop loop_from_json(const Json& j) {
    return guarded([&] {
        std::vector<RealVec> v;
        for (const auto& x : array(at(j, "vertices"), "vertices")) v.push_back(realvec_from_json(x));
        return PLLoop(v);
    });
}

HomologyClass homology_from_json(const Json& j) {
    return guarded([&] {
        HomologyClass c{small_int(at(j, "ambient"), "ambient"), small_int(at(j, "k"), "k"),
                        int_vec(at(j, "coefficients"), "coefficients")};
        if (static_cast<std::int64_t>(c.coefficients.size()) != binomial(c.ambient, c.k))
            throw ParseError("homology class needs one coefficient per tuple");
        return c;
    });
}

// ---- characters and flux ----------------------------------------------------

Json to_json(const DifferentialCharacter& h) {
    Json hol = Json::array();
    const auto tuples = increasing_tuples(h.dim(), h.degree());
    for (std::size_t t = 0; t < tuples.size(); ++t)
        hol.push_back({{"tuple", tuples[t]}, {"angle", to_json(h.hol()[t])}});
    return Json{{"degree", h.degree()}, {"curvature", to_json(h.curvature())}, {"hol", hol}};
}

Json to_json(const CharClass& c) { return Json{{"degree", c.degree}, {"coefficients", c.coefficients}}; }

DifferentialCharacter character_from_json(const Json& j) {
    return guarded([&] {
        const TrigForm curv = form_from_json(at(j, "curvature"));
        const int k = small_int(at(j, "degree"), "degree");
        if (curv.degree() != k + 1) throw ParseError("curvature degree must be degree + 1");
        const auto tuples = increasing_tuples(curv.dim(), k);
        std::vector<Angle> hol(tuples.size());
        std::vector<bool> seen(tuples.size(), false);
        for (const auto& e : array(at(j, "hol"), "hol")) {
            const Indices J = indices(at(e, "tuple"));
            std::size_t t = 0;
            while (t < tuples.size() && tuples[t] != J) ++t;
            if (t == tuples.size()) throw ParseError("hol tuple is not an increasing tuple of the torus");
            if (seen[t]) throw ParseError("hol tuple listed twice");
            seen[t] = true;
            hol[t] = angle_from_json(at(e, "angle"));
        }
        for (bool s : seen)
            if (!s) throw ParseError("hol must list every generator tuple");
        return DifferentialCharacter(curv, hol);
    });
}

CharClass charclass_from_json(const Json& j) {
    return guarded([&] {
        return CharClass{small_int(at(j, "degree"), "degree"), int_vec(at(j, "coefficients"), "coefficients")};
    });
}

Json to_json(const FluxValue& f) {
    Json v = Json::array();
    for (const auto& a : f.angles) v.push_back(to_json(a));
    return Json{{"degree", f.degree}, {"angles", v}};
}

Json to_json(const RealFlux& f) {
    Json v = Json::array();
    for (const auto& c : f.values) v.push_back(to_json(c));
    return Json{{"degree", f.degree}, {"values", v}};
}

FluxValue flux_from_json(const Json& j) {
    return guarded([&] {
        FluxValue f{small_int(at(j, "degree"), "degree"), {}};
        for (const auto& a : array(at(j, "angles"), "angles")) f.angles.push_back(angle_from_json(a));
        return f;
    });
}

RealFlux realflux_from_json(const Json& j) {
    return guarded([&] {
        RealFlux f{small_int(at(j, "degree"), "degree"), {}};
        for (const auto& c : array(at(j, "values"), "values")) f.values.push_back(qtwopi_from_json(c));
        return f;
    });
}

// ---- transgression and extensions -------------------------------------------

Json to_json(const MapLoop& g) {
    Json j{{"A", int_matrix_json(g.A)}, {"base", to_json(g.base)}, {"speed", g.speed}};
    if (g.wiggle)
        j["wiggle"] = Json{{"direction", to_json(g.wiggle->direction)},
                           {"amplitude", to_json(g.wiggle->amplitude)},
                           {"harmonic", g.wiggle->harmonic}};
    return j;
}

MapLoop maploop_from_json(const Json& j) {
    return guarded([&] {
        MapLoop g{intmatrix_from_json(at(j, "A")), realvec_from_json(at(j, "base")), int_vec(at(j, "speed"), "speed"),
                  std::nullopt};
        if (const Json* w = opt(j, "wiggle"))
            g.wiggle = Wiggle{realvec_from_json(at(*w, "direction")), real_from_json(at(*w, "amplitude")),
                              small_int(at(*w, "harmonic"), "harmonic")};
        g.validate();
        return g;
    });
}

Json to_json(const HatField& a) {
    return Json{{"X", to_json(a.X)}, {"psi", to_json(a.psi)}, {"psi_class", to_json(a.psi_class)}};
}

HatField hat_from_json(const Json& j) {
    return guarded([&] {
        return HatField{field_from_json(at(j, "X")), form_from_json(at(j, "psi")), form_from_json(at(j, "psi_class"))};
    });
}

Json to_json(const Functional& l) {
    Json h = Json::array();
    for (const auto& c : l.harmonic) h.push_back(to_json(c));
    Json j{{"degree", l.degree}, {"harmonic", h}};
    if (l.coexact_density) j["coexact_density"] = to_json(*l.coexact_density);
    return j;
}

Functional functional_from_json(const Json& j) {
    return guarded([&] {
        Functional l;
        l.degree = small_int(at(j, "degree"), "degree");
        for (const auto& c : array(at(j, "harmonic"), "harmonic")) l.harmonic.push_back(qtwopi_from_json(c));
        if (const Json* d = opt(j, "coexact_density")) l.coexact_density = form_from_json(*d);
        return l;
    });
}

Json to_json(const CocycleValueTable& t) {
    Json pairs = Json::array(), values = Json::array();
    for (const auto& [i, k] : t.pairs) pairs.push_back({i, k});
    for (const auto& v : t.values) values.push_back(to_json(v));
    return Json{{"pairs", pairs}, {"values", values}};
}

CocycleValueTable table_from_json(const Json& j) {
    return guarded([&] {
        CocycleValueTable t;
        for (const auto& p : array(at(j, "pairs"), "pairs")) {
            const auto v = int_vec(p, "pair");
            if (v.size() != 2 || v[0] < 0 || v[1] < 0) throw ParseError("pair must be two non-negative integers");
            t.pairs.emplace_back(v[0], v[1]);
        }
        for (const auto& v : array(at(j, "values"), "values")) t.values.push_back(qtwopi_from_json(v));
        if (t.pairs.size() != t.values.size()) throw ParseError("pairs and values differ in length");
        return t;
    });
}

Json to_json(const CircleMap& F) { return Json{{"winding", F.winding}, {"f", to_json(F.f)}}; }

CircleMap circlemap_from_json(const Json& j) {
    return guarded([&] {
        CircleMap F{int_vec(at(j, "winding"), "winding"), scalar_from_json(at(j, "f"))};
        if (static_cast<int>(F.winding.size()) != F.f.dim()) throw ParseError("winding length differs from dim");
        return F;
    });
}

// ---- holonomy ---------------------------------------------------------------

Json to_json(const TransportState& s) {
    return Json{{"character", to_json(s.base_character)},
                {"fiber_angle", to_json(s.fiber_angle)},
                {"current_point", to_json(s.current_point)}};
}

TransportState transport_from_json(const Json& j) {
    return guarded([&] {
        return TransportState(character_from_json(at(j, "character")), angle_from_json(at(j, "fiber_angle")),
                              realvec_from_json(at(j, "current_point")));
    });
}

Json to_json(const ChartBox& b) { return Json{{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

ChartBox chart_from_json(const Json& j) {
    return guarded([&] { return ChartBox{realvec_from_json(at(j, "lo")), realvec_from_json(at(j, "hi"))}; });
}

Json to_json(const DiamondConfig& c) {
    Json gamma = Json::array();
    for (const auto& p : c.gamma_interior) gamma.push_back(to_json(p));
    return Json{{"x", to_json(c.x)},
                {"x_prime", to_json(c.x_prime)},
                {"y", to_json(c.y)},
                {"y_prime", to_json(c.y_prime)},
                {"u", to_json(c.u)},
                {"u0", to_json(c.u0)},
                {"v", to_json(c.v)},
                {"v0", to_json(c.v0)},
                {"chart_x", to_json(c.chart_x)},
                {"chart_x_prime", to_json(c.chart_x_prime)},
                {"chart_y", to_json(c.chart_y)},
                {"chart_y_prime", to_json(c.chart_y_prime)},
                {"gamma_interior", gamma}};
}

DiamondConfig diamond_from_json(const Json& j) {
    return guarded([&] {
        DiamondConfig c;
        c.x = realvec_from_json(at(j, "x"));
        c.x_prime = realvec_from_json(at(j, "x_prime"));
        c.y = realvec_from_json(at(j, "y"));
        c.y_prime = realvec_from_json(at(j, "y_prime"));
        c.u = realvec_from_json(at(j, "u"));
        c.u0 = realvec_from_json(at(j, "u0"));
        c.v = realvec_from_json(at(j, "v"));
        c.v0 = realvec_from_json(at(j, "v0"));
        c.chart_x = chart_from_json(at(j, "chart_x"));
        c.chart_x_prime = chart_from_json(at(j, "chart_x_prime"));
        c.chart_y = chart_from_json(at(j, "chart_y"));
        c.chart_y_prime = chart_from_json(at(j, "chart_y_prime"));
        if (const Json* g = opt(j, "gamma_interior"))
            for (const auto& p : array(*g, "gamma_interior")) c.gamma_interior.push_back(realvec_from_json(p));
        return c;
    });
}

}  // namespace charcalc
