#pragma once

#include <string>
#include <vector>

#include "holo/flow.hpp"

namespace holo {

enum class Family { Quad, Cubic, Quartic, InvQuad, InvCubic, InvQuartic, Moebius };
const char* family_name(Family f);
Family parse_family(const std::string& name);  // UnsupportedKind for unknown names
Family family_of(const Field& f);              // UnsupportedKind outside the seven families
std::vector<Family> all_families();

enum class Geometry { None, Collinear, Triangle, Border, Quadrilateral };
const char* geometry_name(Geometry g);
// Placement of four points (None for any other count).
Geometry geometry_hint(const std::vector<cplx>& pts);

enum class Confidence { Exact, MultisetOnly, Flagged };
const char* confidence_name(Confidence c);

// Separatrix link between two nodes of the disk: "I<k>" infinity point k,
// "E<k>" finite equilibrium or pole k (classify_equilibria order).
struct Connection {
  std::string from, to;
};

struct Signature {
  FieldKind kind = FieldKind::Polynomial;
  int degree = 0;
  std::vector<std::string> finite;     // equilibrium codes, sorted
  std::vector<std::string> infinity;   // equator point codes in angle order: S, Nr, Na
  int infinity_pairs = 0;
  std::vector<Connection> connections;
  int joins = 0;  // separatrices between two distinct finite points
  Geometry geometry = Geometry::None;
  bool complete = true;  // false when some separatrix was inconclusive
  // connection graph up to rotation/reflection of the disk and time reversal
  std::string canonical;
};

Signature signature(const Field& f);
Signature signature(const FlowContext& ctx, const std::vector<Separatrix>& seps);

struct CatalogEntry {
  Family family = Family::Quad;
  std::string label;
  std::string coarse;                  // label after merging nodes with foci of the same stability
  std::string description;
  // accepted finite multisets; codes compare up to global time reversal,
  // "N"/"F" match either stability, "*" anything
  std::vector<std::vector<std::string>> multisets;
  Geometry geometry = Geometry::None;  // None: any placement
  int joins = -1;                      // required finite joins (-1 any)
  std::string connections;             // canonical connection string, empty when not needed
  std::string example;                 // a realizing system, empty when none is known
};

std::vector<CatalogEntry> catalog(Family f);

struct Classification {
  CatalogEntry entry;
  Confidence confidence = Confidence::Exact;
  std::vector<std::string> candidates;  // ranked labels when the signature does not single one out
  Signature signature;
  std::string note;
};

// NoMatch when the signature fits no template of the family.
Classification classify_portrait(const Field& f);
Classification classify_portrait(const FlowContext& ctx, const std::vector<Separatrix>& seps);

}  // namespace holo
