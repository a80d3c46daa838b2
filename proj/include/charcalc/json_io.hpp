#ifndef CHARCALC_JSON_IO_HPP
#define CHARCALC_JSON_IO_HPP

#include "charcalc/characters.hpp"
#include "charcalc/cycles.hpp"
#include "charcalc/extensions.hpp"
#include "charcalc/flux.hpp"
#include "charcalc/holonomy.hpp"
#include "charcalc/transgression.hpp"

#include <json.hpp>

namespace charcalc {

using Json = nlohmann::json;

// Rationals are strings "a/b" (or "a"); exact reals are such strings and
// float reals are JSON numbers. A QTwoPi is a list of
// {"two_pi_pow": p, "num": "a", "den": "b"}. Every reader throws ParseError.

Json to_json(const Q& q);
Json to_json(const Real& x);
Json to_json(const RealVec& v);
Json to_json(const QTwoPi& c);
Json to_json(const Angle& a);  // {"exact": ["a", "b"]} | {"float": x}
Json to_json(const TrigScalar& f);
Json to_json(const TrigForm& f);
Json to_json(const TrigField& X);
Json to_json(const AffineMap& m);
Json to_json(const AffineDiffeo& phi);
Json to_json(const BoxCell& c);
Json to_json(const Chain& c);
Json to_json(const PLLoop& p);
Json to_json(const HomologyClass& c);
Json to_json(const DifferentialCharacter& h);
Json to_json(const CharClass& c);
Json to_json(const FluxValue& f);
Json to_json(const RealFlux& f);
Json to_json(const MapLoop& g);
Json to_json(const HatField& a);
Json to_json(const Functional& l);
Json to_json(const CocycleValueTable& t);
Json to_json(const CircleMap& F);
Json to_json(const TransportState& s);
Json to_json(const ChartBox& b);
Json to_json(const DiamondConfig& c);

Q q_from_json(const Json& j);
Real real_from_json(const Json& j);
RealVec realvec_from_json(const Json& j);
QTwoPi qtwopi_from_json(const Json& j);
Angle angle_from_json(const Json& j);
IntMatrix intmatrix_from_json(const Json& j);
TrigScalar scalar_from_json(const Json& j);
TrigForm form_from_json(const Json& j);
TrigField field_from_json(const Json& j);
AffineMap affine_from_json(const Json& j);
AffineDiffeo diffeo_from_json(const Json& j);
BoxCell cell_from_json(const Json& j);
Chain chain_from_json(const Json& j);
PLLoop loop_from_json(const Json& j);
HomologyClass homology_from_json(const Json& j);
DifferentialCharacter character_from_json(const Json& j);
CharClass charclass_from_json(const Json& j);
FluxValue flux_from_json(const Json& j);
RealFlux realflux_from_json(const Json& j);
MapLoop maploop_from_json(const Json& j);
HatField hat_from_json(const Json& j);
Functional functional_from_json(const Json& j);
CocycleValueTable table_from_json(const Json& j);
CircleMap circlemap_from_json(const Json& j);
TransportState transport_from_json(const Json& j);
ChartBox chart_from_json(const Json& j);
DiamondConfig diamond_from_json(const Json& j);

}  // namespace charcalc

#endif
