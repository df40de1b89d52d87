#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "holo/portrait.hpp"

namespace holo {

using json = nlohmann::ordered_json;

// Complex numbers serialize as [re, im].
json to_json(cplx c);
json to_json(const CPoly& p);
json to_json(const Field& f);
json to_json(const Equilibrium& e);
json to_json(const InfinityPoint& p);
json to_json(const FirstIntegral& fi);
json to_json(const Trajectory& t);
json to_json(const Limit& l);
json to_json(const Separatrix& s);
json to_json(const Signature& s);
json to_json(const CatalogEntry& e);
json to_json(const Classification& c);

json catalog_json(Family f);

// Classification block; "label" is null and "confidence" NoMatch or
// Unsupported when no catalog figure applies.
json classification_json(const FlowContext& ctx, const std::vector<Separatrix>& seps);

// Equilibria with normal forms, infinity points and local model, first
// integral terms, separatrix summary and catalog label.
json analyze_report(const Field& f, TraceOptions o = {});

}  // namespace holo
