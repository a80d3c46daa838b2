#include "charcalc/scenario.hpp"

#include "charcalc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace charcalc {

namespace {

// ---- object registry --------------------------------------------------------

const std::vector<std::string> kObjectTypes = {"form",       "field",     "fields",     "map",     "diffeo",
                                               "character",  "chain",     "loop",       "map_loop", "functional",
                                               "circle_map", "vector",    "qtwopi",     "integer", "diamond",
                                               "transport_state"};

Object parse_object(const std::string& type, const Json& v) {
    if (type == "form") return form_from_json(v);
    if (type == "field") return field_from_json(v);
    if (type == "fields") {
        if (!v.is_array()) throw ParseError("fields must be an array");
        std::vector<TrigField> out;
        for (const auto& f : v) out.push_back(field_from_json(f));
        return out;
    }
    if (type == "map") return affine_from_json(v);
    if (type == "diffeo") return diffeo_from_json(v);
    if (type == "character") return character_from_json(v);
    if (type == "chain") return chain_from_json(v);
    if (type == "loop") return loop_from_json(v);
    if (type == "map_loop") return maploop_from_json(v);
    if (type == "functional") return functional_from_json(v);
    if (type == "circle_map") return circlemap_from_json(v);
    if (type == "vector") return realvec_from_json(v);
    if (type == "qtwopi") return qtwopi_from_json(v);
    if (type == "integer") {
        if (!v.is_number_integer()) throw ParseError("integer object must be an integer");
        return v.get<std::int64_t>();
    }
    if (type == "diamond") return diamond_from_json(v);
    if (type == "transport_state") return transport_from_json(v);
    throw ParseError("unknown object type '" + type + "'");
}

// Dimension of the torus an object lives on, when it has exactly one.
std::optional<int> object_dim(const Object& o) {
    if (auto p = std::get_if<TrigForm>(&o)) return p->dim();
    if (auto p = std::get_if<TrigField>(&o)) return p->dim();
    if (auto p = std::get_if<std::vector<TrigField>>(&o)) {
        if (p->empty()) return std::nullopt;
        return p->front().dim();
    }
    if (auto p = std::get_if<DifferentialCharacter>(&o)) return p->dim();
    if (auto p = std::get_if<Chain>(&o)) return p->ambient();
    if (auto p = std::get_if<PLLoop>(&o)) return p->ambient;
    if (auto p = std::get_if<CircleMap>(&o)) return p->f.dim();
    if (auto p = std::get_if<AffineDiffeo>(&o)) return p->dim();
    if (auto p = std::get_if<TransportState>(&o)) return p->base_character.dim();
    return std::nullopt;
}

// ---- operations -------------------------------------------------------------

class Args {
public:
    Args(const Scenario& s, const Check& c, std::string loc) : s_(s), c_(c), loc_(std::move(loc)) {}

    template <class T>
    const T& get(const std::string& param) const {
        return std::get<T>(s_.objects.at(c_.args.at(param)));
    }
    [[noreturn]] void fail(const std::string& what) const { throw ValidationError(loc_ + ": " + what); }
    void require(bool ok, const std::string& what) const {
        if (!ok) fail(what);
    }

private:
    const Scenario& s_;
    const Check& c_;
    std::string loc_;
};

struct Param {
    std::string name;
    std::string type;
};

struct OpDef {
    std::vector<Param> params;
    std::function<void(const Args&)> validate;
    std::function<Json(const Args&)> run;
};

Json table_json(const std::vector<TrigField>& fields, const FieldCocycle& c) {
    return to_json(cocycle_table(fields, c));
}

void same_dim(const Args& a, int x, int y, const std::string& what) {
    a.require(x == y, what + " (" + std::to_string(x) + " vs " + std::to_string(y) + ")");
}

void fields_on(const Args& a, const std::vector<TrigField>& fs, int dim, const std::string& what) {
    for (const auto& f : fs) same_dim(a, f.dim(), dim, what);
}

void validate_tau_like(const Args& a) {
    const auto& alpha = a.get<TrigForm>("alpha");
    const auto& beta = a.get<TrigForm>("beta");
    const auto& phi = a.get<AffineMap>("phi");
    same_dim(a, alpha.dim(), phi.dst_dim(), "alpha must live on the target of phi");
    same_dim(a, beta.dim(), phi.src_dim(), "beta must live on the source of phi");
    a.require(alpha.degree() - 2 + beta.degree() == phi.src_dim(),
              "degree mismatch: deg alpha - 2 + deg beta = " + std::to_string(alpha.degree() - 2 + beta.degree()) +
                  " but dim S = " + std::to_string(phi.src_dim()));
}

void validate_kappa(const Args& a) {
    const auto& mu = a.get<TrigForm>("mu");
    const auto& psi = a.get<AffineMap>("psi");
    const auto& F = a.get<CircleMap>("F");
    a.require(mu.degree() == mu.dim(), "degree mismatch: mu must be a top form");
    same_dim(a, psi.dst_dim(), mu.dim(), "psi must land on M");
    same_dim(a, psi.src_dim(), mu.dim() - 1, "N must have dimension dim M - 1");
    same_dim(a, F.f.dim(), psi.src_dim(), "F must live on N");
}

const std::map<std::string, OpDef>& ops() {
    static const std::map<std::string, OpDef> table = [] {
        std::map<std::string, OpDef> t;
        auto none = [](const Args&) {};

        // calculus
        t["exterior_d"] = {{{"f", "form"}}, none, [](const Args& a) { return to_json(exterior_d(a.get<TrigForm>("f"))); }};
        t["wedge"] = {{{"a", "form"}, {"b", "form"}},
                      [](const Args& a) {
                          same_dim(a, a.get<TrigForm>("a").dim(), a.get<TrigForm>("b").dim(), "forms on different tori");
                      },
                      [](const Args& a) { return to_json(wedge(a.get<TrigForm>("a"), a.get<TrigForm>("b"))); }};
        t["interior"] = {{{"X", "field"}, {"f", "form"}},
                         [](const Args& a) {
                             same_dim(a, a.get<TrigField>("X").dim(), a.get<TrigForm>("f").dim(),
                                      "field and form on different tori");
                         },
                         [](const Args& a) { return to_json(interior(a.get<TrigField>("X"), a.get<TrigForm>("f"))); }};
        t["lie_derivative"] = {
            {{"X", "field"}, {"f", "form"}},
            [](const Args& a) {
                same_dim(a, a.get<TrigField>("X").dim(), a.get<TrigForm>("f").dim(), "field and form on different tori");
            },
            [](const Args& a) { return to_json(lie_derivative(a.get<TrigField>("X"), a.get<TrigForm>("f"))); }};
        t["bracket_fields"] = {
            {{"X", "field"}, {"Y", "field"}},
            [](const Args& a) {
                same_dim(a, a.get<TrigField>("X").dim(), a.get<TrigField>("Y").dim(), "fields on different tori");
            },
            [](const Args& a) { return to_json(bracket_fields(a.get<TrigField>("X"), a.get<TrigField>("Y"))); }};
        t["pullback"] = {{{"phi", "map"}, {"f", "form"}},
                         [](const Args& a) {
                             same_dim(a, a.get<AffineMap>("phi").dst_dim(), a.get<TrigForm>("f").dim(),
                                      "form must live on the target of phi");
                         },
                         [](const Args& a) { return to_json(pullback_affine(a.get<AffineMap>("phi"), a.get<TrigForm>("f"))); }};
        t["integrate_torus"] = {{{"f", "form"}},
                                [](const Args& a) {
                                    const auto& f = a.get<TrigForm>("f");
                                    a.require(f.degree() == f.dim(), "degree mismatch: integrand must be a top form");
                                },
                                [](const Args& a) { return to_json(integrate_torus(a.get<TrigForm>("f"))); }};
        t["is_closed"] = {{{"f", "form"}}, none, [](const Args& a) { return Json(is_closed(a.get<TrigForm>("f"))); }};
        t["harmonic_part"] = {{{"f", "form"}}, none,
                              [](const Args& a) { return to_json(harmonic_part(a.get<TrigForm>("f"))); }};
        t["canonical_class"] = {{{"f", "form"}}, none,
                                [](const Args& a) { return to_json(canonical_class(a.get<TrigForm>("f"))); }};

        // cycles
        t["boundary"] = {{{"c", "chain"}},
                         [](const Args& a) { a.require(a.get<Chain>("c").k() >= 1, "boundary of a 0-chain"); },
                         [](const Args& a) { return to_json(boundary(a.get<Chain>("c"))); }};
        t["homology_class"] = {{{"c", "chain"}}, none,
                               [](const Args& a) { return to_json(homology_class(a.get<Chain>("c"))); }};
        t["winding"] = {{{"loop", "loop"}}, none, [](const Args& a) { return to_json(winding(a.get<PLLoop>("loop"))); }};
        t["integrate_chain"] = {{{"f", "form"}, {"c", "chain"}},
                                [](const Args& a) {
                                    const auto& f = a.get<TrigForm>("f");
                                    const auto& c = a.get<Chain>("c");
                                    same_dim(a, f.dim(), c.ambient(), "form and chain on different tori");
                                    same_dim(a, f.degree(), c.k(), "degree mismatch between form and chain");
                                },
                                [](const Args& a) { return to_json(integrate_chain(a.get<TrigForm>("f"), a.get<Chain>("c"))); }};

        // characters
        t["evaluate"] = {{{"h", "character"}, {"c", "chain"}},
                         [](const Args& a) {
                             const auto& h = a.get<DifferentialCharacter>("h");
                             const auto& c = a.get<Chain>("c");
                             same_dim(a, h.dim(), c.ambient(), "character and chain on different tori");
                             same_dim(a, h.degree(), c.k(), "degree mismatch between character and chain");
                         },
                         [](const Args& a) { return to_json(evaluate(a.get<DifferentialCharacter>("h"), a.get<Chain>("c"))); }};
        t["evaluate_loop"] = {{{"h", "character"}, {"loop", "loop"}},
                              [](const Args& a) {
                                  const auto& h = a.get<DifferentialCharacter>("h");
                                  same_dim(a, h.dim(), a.get<PLLoop>("loop").ambient, "character and loop on different tori");
                                  same_dim(a, h.degree(), 1, "degree mismatch: loops need a degree-1 character");
                              },
                              [](const Args& a) {
                                  return to_json(evaluate(a.get<DifferentialCharacter>("h"), a.get<PLLoop>("loop")));
                              }};
        t["characteristic_class"] = {{{"h", "character"}}, none, [](const Args& a) {
                                         return to_json(characteristic_class(a.get<DifferentialCharacter>("h")));
                                     }};
        t["character_add"] = {{{"h", "character"}, {"g", "character"}},
                              [](const Args& a) {
                                  const auto& h = a.get<DifferentialCharacter>("h");
                                  const auto& g = a.get<DifferentialCharacter>("g");
                                  same_dim(a, h.dim(), g.dim(), "characters on different tori");
                                  same_dim(a, h.degree(), g.degree(), "degree mismatch between characters");
                              },
                              [](const Args& a) {
                                  return to_json(add(a.get<DifferentialCharacter>("h"), a.get<DifferentialCharacter>("g")));
                              }};
        t["pullback_character"] = {{{"h", "character"}, {"phi", "map"}},
                                   [](const Args& a) {
                                       same_dim(a, a.get<DifferentialCharacter>("h").dim(), a.get<AffineMap>("phi").dst_dim(),
                                                "character must live on the target of phi");
                                   },
                                   [](const Args& a) {
                                       return to_json(
                                           pullback_character(a.get<DifferentialCharacter>("h"), a.get<AffineMap>("phi")));
                                   }};

        // flux
        t["preserves_form"] = {{{"phi", "diffeo"}, {"omega", "form"}},
                               [](const Args& a) {
                                   same_dim(a, a.get<AffineDiffeo>("phi").dim(), a.get<TrigForm>("omega").dim(),
                                            "diffeomorphism and form on different tori");
                               },
                               [](const Args& a) {
                                   return Json(preserves_form(a.get<AffineDiffeo>("phi"), a.get<TrigForm>("omega")));
                               }};
        t["group_flux"] = {{{"h", "character"}, {"phi", "diffeo"}},
                           [](const Args& a) {
                               same_dim(a, a.get<DifferentialCharacter>("h").dim(), a.get<AffineDiffeo>("phi").dim(),
                                        "diffeomorphism and character on different tori");
                           },
                           [](const Args& a) {
                               return to_json(group_flux(a.get<DifferentialCharacter>("h"), a.get<AffineDiffeo>("phi")));
                           }};
        t["path_flux"] = {{{"omega", "form"}, {"b", "vector"}},
                          [](const Args& a) {
                              const auto& w = a.get<TrigForm>("omega");
                              same_dim(a, static_cast<int>(a.get<RealVec>("b").size()), w.dim(), "translation vector length");
                              a.require(w.degree() >= 1, "degree mismatch: path flux needs degree >= 1");
                          },
                          [](const Args& a) { return to_json(path_flux(a.get<TrigForm>("omega"), a.get<RealVec>("b"))); }};
        t["infinitesimal_flux"] = {{{"omega", "form"}, {"X", "field"}},
                                   [](const Args& a) {
                                       same_dim(a, a.get<TrigField>("X").dim(), a.get<TrigForm>("omega").dim(),
                                                "field and form on different tori");
                                   },
                                   [](const Args& a) {
                                       return to_json(infinitesimal_flux(a.get<TrigForm>("omega"), a.get<TrigField>("X")));
                                   }};

        // transgression
        auto validate_hat = [](const Args& a, const char* fu, const char* fv, bool on_target) {
            const auto& alpha = a.get<TrigForm>("alpha");
            const auto& beta = a.get<TrigForm>("beta");
            const auto& phi = a.get<AffineMap>("phi");
            same_dim(a, alpha.dim(), phi.dst_dim(), "alpha must live on the target of phi");
            same_dim(a, beta.dim(), phi.src_dim(), "beta must live on the source of phi");
            a.require(alpha.degree() + beta.degree() == phi.src_dim() + 2,
                      "degree mismatch: deg alpha + deg beta must equal dim S + 2");
            const int d = on_target ? phi.dst_dim() : phi.src_dim();
            same_dim(a, a.get<TrigField>(fu).dim(), d, std::string(fu) + " on the wrong torus");
            same_dim(a, a.get<TrigField>(fv).dim(), d, std::string(fv) + " on the wrong torus");
        };
        t["hat_form"] = {{{"alpha", "form"}, {"beta", "form"}, {"phi", "map"}, {"X", "field"}, {"Y", "field"}},
                         [validate_hat](const Args& a) { validate_hat(a, "X", "Y", true); },
                         [](const Args& a) {
                             const auto& phi = a.get<AffineMap>("phi");
                             return to_json(hat_form_at(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"),
                                                        TangentAtMap::along(a.get<TrigField>("X"), phi),
                                                        TangentAtMap::along(a.get<TrigField>("Y"), phi)));
                         }};
        t["hat_form_pushed"] = {{{"alpha", "form"}, {"beta", "form"}, {"phi", "map"}, {"u", "field"}, {"v", "field"}},
                                [validate_hat](const Args& a) { validate_hat(a, "u", "v", false); },
                                [](const Args& a) {
                                    const auto& phi = a.get<AffineMap>("phi");
                                    return to_json(hat_form_at(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"),
                                                               TangentAtMap::pushed(a.get<TrigField>("u"), phi),
                                                               TangentAtMap::pushed(a.get<TrigField>("v"), phi)));
                                }};
        t["loop_holonomy"] = {{{"h", "character"}, {"g", "character"}, {"gamma", "map_loop"}},
                              [](const Args& a) {
                                  const auto& gamma = a.get<MapLoop>("gamma");
                                  same_dim(a, a.get<DifferentialCharacter>("h").dim(), gamma.target_dim(),
                                           "h must live on the target of gamma");
                                  same_dim(a, a.get<DifferentialCharacter>("g").dim(), gamma.source_dim(),
                                           "g must live on the source of gamma");
                              },
                              [](const Args& a) {
                                  return to_json(loop_holonomy(a.get<DifferentialCharacter>("h"),
                                                               a.get<DifferentialCharacter>("g"), a.get<MapLoop>("gamma")));
                              }};
        t["star_product"] = {{{"x", "character"}, {"y", "character"}},
                             [](const Args& a) {
                                 same_dim(a, a.get<DifferentialCharacter>("x").dim(), a.get<DifferentialCharacter>("y").dim(),
                                          "characters on different tori");
                             },
                             [](const Args& a) {
                                 return to_json(
                                     star_product(a.get<DifferentialCharacter>("x"), a.get<DifferentialCharacter>("y")));
                             }};

        // extensions
        const std::vector<Param> tau_params = {{"alpha", "form"}, {"beta", "form"}, {"phi", "map"}, {"X", "field"}, {"Y", "field"}};
        const std::vector<Param> tau_table_params = {{"alpha", "form"}, {"beta", "form"}, {"phi", "map"}, {"fields", "fields"}};
        t["tau"] = {tau_params,
                    [](const Args& a) {
                        validate_tau_like(a);
                        const int m = a.get<TrigForm>("alpha").dim();
                        fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y")}, m, "fields must live on M");
                    },
                    [](const Args& a) {
                        return to_json(tau_cocycle(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"), a.get<AffineMap>("phi"),
                                                   a.get<TrigField>("X"), a.get<TrigField>("Y")));
                    }};
        t["tau_table"] = {tau_table_params,
                          [](const Args& a) {
                              validate_tau_like(a);
                              fields_on(a, a.get<std::vector<TrigField>>("fields"), a.get<TrigForm>("alpha").dim(),
                                        "fields must live on M");
                          },
                          [](const Args& a) {
                              const auto& alpha = a.get<TrigForm>("alpha");
                              const auto& beta = a.get<TrigForm>("beta");
                              const auto& phi = a.get<AffineMap>("phi");
                              return table_json(a.get<std::vector<TrigField>>("fields"),
                                                [&](const TrigField& X, const TrigField& Y) {
                                                    return tau_cocycle(alpha, beta, phi, X, Y);
                                                });
                          }};
        t["nu"] = {tau_params,
                   [](const Args& a) {
                       validate_tau_like(a);
                       const int d = a.get<TrigForm>("beta").dim();
                       fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y")}, d, "fields must live on S");
                   },
                   [](const Args& a) {
                       return to_json(nu_cocycle(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"), a.get<AffineMap>("phi"),
                                                 a.get<TrigField>("X"), a.get<TrigField>("Y")));
                   }};
        t["nu_table"] = {tau_table_params,
                         [](const Args& a) {
                             validate_tau_like(a);
                             fields_on(a, a.get<std::vector<TrigField>>("fields"), a.get<TrigForm>("beta").dim(),
                                       "fields must live on S");
                         },
                         [](const Args& a) {
                             const auto& alpha = a.get<TrigForm>("alpha");
                             const auto& beta = a.get<TrigForm>("beta");
                             const auto& phi = a.get<AffineMap>("phi");
                             return table_json(a.get<std::vector<TrigField>>("fields"),
                                               [&](const TrigField& u, const TrigField& v) {
                                                   return nu_cocycle(alpha, beta, phi, u, v);
                                               });
                         }};
        t["kappa"] = {{{"mu", "form"}, {"psi", "map"}, {"F", "circle_map"}, {"X", "field"}, {"Y", "field"}},
                      [](const Args& a) {
                          validate_kappa(a);
                          fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y")}, a.get<TrigForm>("mu").dim(),
                                    "fields must live on M");
                      },
                      [](const Args& a) {
                          return to_json(kappa_cocycle(a.get<TrigForm>("mu"), a.get<AffineMap>("psi"), a.get<CircleMap>("F"),
                                                       a.get<TrigField>("X"), a.get<TrigField>("Y")));
                      }};
        t["kappa_table"] = {{{"mu", "form"}, {"psi", "map"}, {"F", "circle_map"}, {"fields", "fields"}},
                            [](const Args& a) {
                                validate_kappa(a);
                                fields_on(a, a.get<std::vector<TrigField>>("fields"), a.get<TrigForm>("mu").dim(),
                                          "fields must live on M");
                            },
                            [](const Args& a) {
                                const auto& mu = a.get<TrigForm>("mu");
                                const auto& psi = a.get<AffineMap>("psi");
                                const auto& F = a.get<CircleMap>("F");
                                return table_json(a.get<std::vector<TrigField>>("fields"),
                                                  [&](const TrigField& X, const TrigField& Y) {
                                                      return kappa_cocycle(mu, psi, F, X, Y);
                                                  });
                            }};
        t["kappa_functional"] = {{{"mu", "form"}, {"psi", "map"}, {"F", "circle_map"}}, validate_kappa,
                                 [](const Args& a) {
                                     Json out = Json::array();
                                     for (const auto& v : kappa_functional(a.get<TrigForm>("mu"), a.get<AffineMap>("psi"),
                                                                           a.get<CircleMap>("F")))
                                         out.push_back(to_json(v));
                                     return out;
                                 }};
        t["pd_compare"] = {{{"phi", "map"}, {"m", "integer"}, {"omega", "form"}, {"k", "qtwopi"}},
                           [](const Args& a) {
                               const auto& w = a.get<TrigForm>("omega");
                               const auto& phi = a.get<AffineMap>("phi");
                               a.require(w.degree() == 2, "degree mismatch: omega must be a 2-form");
                               same_dim(a, phi.dst_dim(), w.dim(), "phi must land on M");
                               same_dim(a, phi.src_dim(), w.dim() - 2, "S must have dimension dim M - 2");
                           },
                           [](const Args& a) {
                               const PdResult r = pd_compare(a.get<AffineMap>("phi"), a.get<std::int64_t>("m"),
                                                             a.get<TrigForm>("omega"), a.get<QTwoPi>("k"));
                               Json lt = Json::array(), ln = Json::array();
                               for (const auto& v : r.lambda_tau) lt.push_back(to_json(v));
                               for (const auto& v : r.lambda_nu) ln.push_back(to_json(v));
                               return Json{{"lambda_tau", lt}, {"lambda_nu", ln}, {"equal", r.equal()}};
                           }};
        t["xi_table"] = {{{"omega", "form"}, {"lambda", "functional"}, {"fields", "fields"}},
                         [](const Args& a) {
                             const auto& w = a.get<TrigForm>("omega");
                             a.require(a.get<Functional>("lambda").degree == w.degree() - 2,
                                       "degree mismatch: lambda must act on (deg omega - 2)-forms");
                             fields_on(a, a.get<std::vector<TrigField>>("fields"), w.dim(), "fields must live on M");
                         },
                         [](const Args& a) {
                             return to_json(xi_extension(a.get<TrigForm>("omega"), a.get<Functional>("lambda"),
                                                         a.get<std::vector<TrigField>>("fields")));
                         }};
        auto dce_json = [](const DceResult& r) {
            return Json{{"cocycle", to_json(r.cocycle)}, {"coboundary", to_json(r.coboundary)}, {"equal", r.equal()}};
        };
        t["dce_tau"] = {tau_params,
                        [](const Args& a) {
                            validate_tau_like(a);
                            fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y")}, a.get<TrigForm>("alpha").dim(),
                                      "fields must live on M");
                        },
                        [dce_json](const Args& a) {
                            return dce_json(dce_check_tau(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"),
                                                          a.get<AffineMap>("phi"), a.get<TrigField>("X"),
                                                          a.get<TrigField>("Y")));
                        }};
        t["dce_nu"] = {tau_params,
                       [](const Args& a) {
                           validate_tau_like(a);
                           fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y")}, a.get<TrigForm>("beta").dim(),
                                     "fields must live on S");
                       },
                       [dce_json](const Args& a) {
                           return dce_json(dce_check_nu(a.get<TrigForm>("alpha"), a.get<TrigForm>("beta"),
                                                        a.get<AffineMap>("phi"), a.get<TrigField>("X"),
                                                        a.get<TrigField>("Y")));
                       }};
        t["jacobi"] = {{{"omega", "form"}, {"X", "field"}, {"Y", "field"}, {"Z", "field"}},
                       [](const Args& a) {
                           const auto& w = a.get<TrigForm>("omega");
                           a.require(w.degree() >= 2, "degree mismatch: omega must have degree >= 2");
                           fields_on(a, {a.get<TrigField>("X"), a.get<TrigField>("Y"), a.get<TrigField>("Z")}, w.dim(),
                                     "fields must live on M");
                       },
                       [](const Args& a) {
                           const auto& w = a.get<TrigForm>("omega");
                           return Json(jacobi_check(w, make_hat(w, a.get<TrigField>("X")), make_hat(w, a.get<TrigField>("Y")),
                                                    make_hat(w, a.get<TrigField>("Z"))));
                       }};
        t["is_positive_volume"] = {{{"mu", "form"}},
                                   [](const Args& a) {
                                       const auto& mu = a.get<TrigForm>("mu");
                                       a.require(mu.degree() == mu.dim(), "degree mismatch: mu must be a top form");
                                   },
                                   [](const Args& a) { return Json(is_positive_volume(a.get<TrigForm>("mu"))); }};

        // holonomy
        auto deg1 = [](const Args& a, int dim_other, const std::string& what) {
            const auto& h = a.get<DifferentialCharacter>("h");
            same_dim(a, h.degree(), 1, "degree mismatch: transport needs a degree-1 character");
            same_dim(a, h.dim(), dim_other, what);
        };
        t["holonomy"] = {{{"h", "character"}, {"loop", "loop"}},
                         [deg1](const Args& a) { deg1(a, a.get<PLLoop>("loop").ambient, "loop on the wrong torus"); },
                         [](const Args& a) { return to_json(holonomy(a.get<DifferentialCharacter>("h"), a.get<PLLoop>("loop"))); }};
        t["transport"] = {{{"h", "character"}, {"path", "loop"}, {"start", "transport_state"}},
                          [deg1](const Args& a) { deg1(a, a.get<PLLoop>("path").ambient, "path on the wrong torus"); },
                          [](const Args& a) {
                              const TransportState s = transport(a.get<DifferentialCharacter>("h"), a.get<PLLoop>("path"),
                                                                 a.get<TransportState>("start"));
                              return Json{{"fiber_angle", to_json(s.fiber_angle)}, {"current_point", to_json(s.current_point)}};
                          }};
        t["diamond_transition"] = {{{"h", "character"}, {"diamond", "diamond"}},
                                   [deg1](const Args& a) {
                                       deg1(a, static_cast<int>(a.get<DiamondConfig>("diamond").x.size()),
                                            "diamond points on the wrong torus");
                                   },
                                   [](const Args& a) {
                                       const DiamondResult r =
                                           diamond_transition(a.get<DifferentialCharacter>("h"), a.get<DiamondConfig>("diamond"));
                                       return Json{{"holonomy", to_json(r.holonomy)},
                                                   {"integral", to_json(r.integral)},
                                                   {"equal", r.equal()}};
                                   }};
        return t;
    }();
    return table;
}

// ---- loading ----------------------------------------------------------------

const Json& need(const Json& j, const char* key, const std::string& loc) {
    if (!j.is_object()) throw ParseError(loc + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(loc + ": missing key '" + key + "'");
    return *it;
}

std::string need_string(const Json& j, const char* key, const std::string& loc) {
    const Json& v = need(j, key, loc);
    if (!v.is_string()) throw ParseError(loc + "." + key + ": expected a string");
    return v.get<std::string>();
}

void check_on(const Scenario& s, const Object& o, const Json& spec, const std::string& loc) {
    const auto it = spec.find("on");
    if (it == spec.end()) return;
    if (!it->is_string()) throw ParseError(loc + ".on: expected a string");
    const std::string torus = it->get<std::string>();
    const auto g = s.geometry.find(torus);
    if (g == s.geometry.end()) throw ValidationError(loc + ".on: geometry declares no torus '" + torus + "'");
    const auto d = object_dim(o);
    if (d && *d != g->second)
        throw ValidationError(loc + ": dimension " + std::to_string(*d) + " does not match " + torus + " = T^" +
                              std::to_string(g->second));
}

void check_map_ends(const Scenario& s, const Object& o, const Json& spec, const std::string& loc) {
    const auto* m = std::get_if<AffineMap>(&o);
    if (!m) return;
    for (const char* end : {"from", "to"}) {
        const auto it = spec.find(end);
        if (it == spec.end()) continue;
        if (!it->is_string()) throw ParseError(loc + "." + end + ": expected a string");
        const auto g = s.geometry.find(it->get<std::string>());
        if (g == s.geometry.end()) throw ValidationError(loc + "." + end + ": unknown torus");
        const int d = std::string(end) == "from" ? m->src_dim() : m->dst_dim();
        if (d != g->second) throw ValidationError(loc + ": map " + end + " dimension " + std::to_string(d) + " differs from geometry");
    }
}

Object load_object(const Scenario& s, const Json& spec, const std::string& loc) {
    const std::string type = need_string(spec, "type", loc);
    if (std::find(kObjectTypes.begin(), kObjectTypes.end(), type) == kObjectTypes.end())
        throw ValidationError(loc + ".type: unknown object type '" + type + "'");
    Object o = [&]() -> Object {
        try {
            return parse_object(type, need(spec, "value", loc));
        } catch (const ParseError& e) {
            throw ParseError(loc + ".value: " + e.what());
        } catch (const Error& e) {
            throw ValidationError(loc + ".value: " + e.what());
        }
    }();
    check_on(s, o, spec, loc);
    check_map_ends(s, o, spec, loc);
    return o;
}

std::string type_of_param(const Object& o) { return object_type(o); }

}  // namespace

std::string object_type(const Object& o) {
    static const char* names[] = {"form",       "field",  "fields", "map",     "diffeo",  "character",
                                  "chain",      "loop",   "map_loop", "functional", "circle_map", "vector",
                                  "qtwopi",     "integer", "diamond", "transport_state"};
    return names[o.index()];
}

std::vector<std::string> known_ops() {
    std::vector<std::string> out;
    for (const auto& [name, def] : ops()) out.push_back(name);
    return out;
}

Scenario parse_scenario(const Json& j) {
    Scenario s;
    if (!j.is_object()) throw ParseError("scenario: expected an object");
    if (const auto v = j.find("schema_version"); v != j.end()) {
        if (!v->is_number_integer() || v->get<int>() != kSchemaVersion)
            throw ValidationError("schema_version: unsupported version");
    }
    s.name = need_string(j, "name", "scenario");
    if (const auto g = j.find("geometry"); g != j.end()) {
        if (!g->is_object()) throw ParseError("geometry: expected an object");
        for (const auto& [k, v] : g->items()) {
            if (!v.is_number_integer() || v.get<int>() < 0) throw ParseError("geometry." + k + ": expected a dimension");
            s.geometry[k] = v.get<int>();
        }
    }
    if (const auto objs = j.find("objects"); objs != j.end()) {
        if (!objs->is_object()) throw ParseError("objects: expected an object");
        for (const auto& [name, spec] : objs->items()) s.objects.emplace(name, load_object(s, spec, "objects." + name));
    }
    const Json& checks = need(j, "checks", "scenario");
    if (!checks.is_array()) throw ParseError("checks: expected an array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string loc = "checks[" + std::to_string(i) + "]";
        const Json& c = checks[i];
        Check chk;
        chk.name = need_string(c, "name", loc);
        chk.op = need_string(c, "op", loc);
        const auto op = ops().find(chk.op);
        if (op == ops().end()) throw ValidationError(loc + ".op: unknown operation '" + chk.op + "'");
        const Json& args = need(c, "args", loc);
        if (!args.is_object()) throw ParseError(loc + ".args: expected an object");
        for (const auto& [param, ref] : args.items()) {
            const std::string ploc = loc + ".args." + param;
            const bool known = std::any_of(op->second.params.begin(), op->second.params.end(),
                                           [&](const Param& p) { return p.name == param; });
            if (!known) throw ValidationError(ploc + ": operation '" + chk.op + "' has no parameter '" + param + "'");
            if (ref.is_string()) {
                chk.args[param] = ref.get<std::string>();
            } else {
                // Inline object, registered under its location.
                s.objects.emplace(ploc, load_object(s, ref, ploc));
                chk.args[param] = ploc;
            }
        }
        for (const auto& p : op->second.params) {
            const std::string ploc = loc + ".args." + p.name;
            const auto a = chk.args.find(p.name);
            if (a == chk.args.end()) throw ValidationError(ploc + ": missing argument");
            const auto obj = s.objects.find(a->second);
            if (obj == s.objects.end()) throw ValidationError(ploc + ": unknown object '" + a->second + "'");
            if (type_of_param(obj->second) != p.type)
                throw ValidationError(ploc + ": object '" + a->second + "' is a " + type_of_param(obj->second) +
                                      ", expected a " + p.type);
        }
        if (const auto e = c.find("expected"); e != c.end()) chk.expected = *e;
        if (const auto t = c.find("tolerance"); t != c.end()) {
            if (!t->is_number() || t->get<double>() < 0) throw ParseError(loc + ".tolerance: expected a non-negative number");
            chk.tolerance = t->get<double>();
        }
        s.checks.push_back(std::move(chk));
        try {
            op->second.validate(Args(s, s.checks.back(), loc));
        } catch (const ValidationError&) {
            throw;
        } catch (const Error& e) {
            throw ValidationError(loc + ": " + e.what());
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return parse_scenario(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// ---- comparison -------------------------------------------------------------

namespace {

bool is_angle(const Json& j) { return j.is_object() && j.size() == 1 && (j.contains("exact") || j.contains("float")); }

bool is_qtwopi(const Json& j) {
    if (!j.is_array()) return false;
    for (const auto& e : j)
        if (!e.is_object() || !e.contains("two_pi_pow")) return false;
    return true;
}

std::optional<Q> as_rational(const Json& j) {
    try {
        if (j.is_string() || j.is_number_integer()) return q_from_json(j);
    } catch (const Error&) {
    }
    return std::nullopt;
}

std::optional<double> as_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (auto q = as_rational(j)) return to_double(*q);
    if (is_qtwopi(j)) {
        try {
            return qtwopi_from_json(j).to_double();
        } catch (const Error&) {
        }
    }
    return std::nullopt;
}

}  // namespace

bool json_matches(const Json& computed, const Json& expected, double tol) {
    if (is_angle(computed) && is_angle(expected)) {
        try {
            const Angle a = angle_from_json(computed), b = angle_from_json(expected);
            return a.near(b, tol);
        } catch (const Error&) {
            return false;
        }
    }
    if (is_qtwopi(computed) && is_qtwopi(expected)) {
        try {
            return qtwopi_from_json(computed) == qtwopi_from_json(expected);
        } catch (const Error&) {
            return false;
        }
    }
    if (computed.is_boolean() || expected.is_boolean()) return computed == expected;
    const bool c_float = computed.is_number_float(), e_float = expected.is_number_float();
    if (c_float || e_float) {
        const auto a = as_number(computed), b = as_number(expected);
        return a && b && std::fabs(*a - *b) <= tol;
    }
    if (is_qtwopi(computed) || is_qtwopi(expected)) {
        // Exact scalar against an exact QTwoPi.
        try {
            return qtwopi_from_json(computed) == qtwopi_from_json(expected);
        } catch (const Error&) {
            return false;
        }
    }
    if (computed.is_string() || computed.is_number_integer()) {
        const auto a = as_rational(computed), b = as_rational(expected);
        if (a && b) return *a == *b;
        return computed == expected;
    }
    if (computed.is_array() && expected.is_array()) {
        if (computed.size() != expected.size()) return false;
        for (std::size_t i = 0; i < computed.size(); ++i)
            if (!json_matches(computed[i], expected[i], tol)) return false;
        return true;
    }
    if (computed.is_object() && expected.is_object()) {
        if (computed.size() != expected.size()) return false;
        for (const auto& [k, v] : expected.items()) {
            const auto it = computed.find(k);
            if (it == computed.end() || !json_matches(*it, v, tol)) return false;
        }
        return true;
    }
    return computed == expected;
}

// ---- running ----------------------------------------------------------------

namespace {

CheckResult run_check(const Scenario& s, const Check& c, std::size_t index) {
    CheckResult r;
    r.name = c.name;
    r.op = c.op;
    r.expected = c.expected;
    r.tolerance = c.tolerance;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Json value = ops().at(c.op).run(Args(s, c, "checks[" + std::to_string(index) + "]"));
        r.value = value;
        bool ok;
        if (c.expected) {
            ok = json_matches(value, *c.expected, c.tolerance);
            if (!ok) r.message = "computed value differs from expected";
        } else {
            // Without an expectation a boolean result must be true.
            ok = !value.is_boolean() || value.get<bool>();
            if (!ok) r.message = "check returned false";
        }
        r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    } catch (const InternalVerificationFailed& e) {
        r.status = CheckStatus::Error;
        r.message = std::string(e.kind()) + ": " + e.what();
        r.internal = true;
    } catch (const Error& e) {
        r.status = CheckStatus::Error;
        r.message = std::string(e.kind()) + ": " + e.what();
    } catch (const std::exception& e) {
        r.status = CheckStatus::Error;
        r.message = std::string("internal: ") + e.what();
        r.internal = true;
    }
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Error: return "error";
    }
    return "error";
}

}  // namespace

Report run_scenario(const Scenario& s, int parallelism) {
    if (parallelism < 1) throw InvalidArgument("parallelism must be positive");
    Report rep;
    rep.name = s.name;
    rep.checks.resize(s.checks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < s.checks.size(); i = next++) rep.checks[i] = run_check(s, s.checks[i], i);
    };
    const int n = std::min<int>(parallelism, static_cast<int>(std::max<std::size_t>(s.checks.size(), 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rep;
}

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Pass; });
}

int Report::exit_code() const {
    if (std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.internal; })) return 3;
    return all_pass() ? 0 : 1;
}

Json Report::to_json(bool include_times) const {
    Json entries = Json::array();
    int passed = 0, failed = 0, errors = 0;
    for (const auto& c : checks) {
        Json e{{"name", c.name}, {"op", c.op}, {"status", status_name(c.status)}, {"tolerance", c.tolerance}};
        e["value"] = c.value ? *c.value : Json(nullptr);
        e["expected"] = c.expected ? *c.expected : Json(nullptr);
        e["message"] = c.message;
        if (include_times) e["wall_time_ms"] = c.wall_time_ms;
        entries.push_back(e);
        passed += c.status == CheckStatus::Pass;
        failed += c.status == CheckStatus::Fail;
        errors += c.status == CheckStatus::Error;
    }
    Json j{{"schema_version", kSchemaVersion},
           {"name", name},
           {"status", all_pass() ? "pass" : "fail"},
           {"summary", {{"total", checks.size()}, {"passed", passed}, {"failed", failed}, {"errors", errors}}},
           {"checks", entries}};
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return j;
}

// ---- schemas ----------------------------------------------------------------

Json scenario_schema() {
    Json types = Json::array();
    for (const auto& t : kObjectTypes) types.push_back(t);
    Json op_names = Json::array();
    for (const auto& o : known_ops()) op_names.push_back(o);
    Json params = Json::object();
    for (const auto& [name, def] : ops()) {
        Json p = Json::object();
        for (const auto& prm : def.params) p[prm.name] = prm.type;
        params[name] = p;
    }
    return Json{
        {"$schema", "https://json-schema.org/draft/2020-12/schema"},
        {"title", "charcalc scenario"},
        {"type", "object"},
        {"required", {"name", "checks"}},
        {"properties",
         {{"schema_version", {{"const", kSchemaVersion}}},
          {"name", {{"type", "string"}}},
          {"geometry", {{"type", "object"}, {"additionalProperties", {{"type", "integer"}, {"minimum", 0}}}}},
          {"objects",
           {{"type", "object"},
            {"additionalProperties",
             {{"type", "object"},
              {"required", {"type", "value"}},
              {"properties",
               {{"type", {{"enum", types}}},
                {"value", Json::object()},
                {"on", {{"type", "string"}}},
                {"from", {{"type", "string"}}},
                {"to", {{"type", "string"}}}}}}}}},
          {"checks",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"name", "op", "args"}},
              {"properties",
               {{"name", {{"type", "string"}}},
                {"op", {{"enum", op_names}}},
                {"args", {{"type", "object"}}},
                {"expected", Json::object()},
                {"tolerance", {{"type", "number"}, {"minimum", 0}, {"default", kDefaultTolerance}}}}}}}}}}},
        {"x-operation-parameters", params}};
}

Json report_schema() {
    return Json{
        {"$schema", "https://json-schema.org/draft/2020-12/schema"},
        {"title", "charcalc report"},
        {"type", "object"},
        {"required", {"schema_version", "name", "status", "summary", "checks", "seed"}},
        {"properties",
         {{"schema_version", {{"const", kSchemaVersion}}},
          {"name", {{"type", "string"}}},
          {"status", {{"enum", {"pass", "fail"}}}},
          {"seed", {{"type", {"integer", "null"}}}},
          {"summary",
           {{"type", "object"},
            {"required", {"total", "passed", "failed", "errors"}},
            {"properties",
             {{"total", {{"type", "integer"}}},
              {"passed", {{"type", "integer"}}},
              {"failed", {{"type", "integer"}}},
              {"errors", {{"type", "integer"}}}}}}},
          {"checks",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"name", "op", "status", "value", "expected", "tolerance", "message"}},
              {"properties",
               {{"name", {{"type", "string"}}},
                {"op", {{"type", "string"}}},
                {"status", {{"enum", {"pass", "fail", "error"}}}},
                {"value", Json::object()},
                {"expected", Json::object()},
                {"tolerance", {{"type", "number"}}},
                {"message", {{"type", "string"}}},
                {"wall_time_ms", {{"type", "number"}}}}}}}}}}}};
}

}  // namespace charcalc
