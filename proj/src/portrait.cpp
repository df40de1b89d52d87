#include "holo/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <tuple>

#include "holo/error.hpp"

namespace holo {

const char* family_name(Family f) {
  switch (f) {
    case Family::Quad: return "Quad";
    case Family::Cubic: return "Cubic";
    case Family::Quartic: return "Quartic";
    case Family::InvQuad: return "InvQuad";
    case Family::InvCubic: return "InvCubic";
    case Family::InvQuartic: return "InvQuartic";
    case Family::Moebius: return "Moebius";
  }
  return "?";
}

std::vector<Family> all_families() {
  return {Family::Quad,   Family::Cubic,      Family::Quartic, Family::InvQuad,
          Family::InvCubic, Family::InvQuartic, Family::Moebius};
}

Family parse_family(const std::string& name) {
  std::string low;
  for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Family f : all_families()) {
    std::string n;
    for (const char* p = family_name(f); *p; ++p) n += static_cast<char>(std::tolower(static_cast<unsigned char>(*p)));
    if (n == low) return f;
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown family '" + name + "'");
}

Family family_of(const Field& f) {
  if (f.kind() == FieldKind::Moebius) return Family::Moebius;
  if (f.kind() == FieldKind::Polynomial || f.kind() == FieldKind::InversePolynomial) {
    const bool inv = f.kind() == FieldKind::InversePolynomial;
    switch (f.poly().degree()) {
      case 2: return inv ? Family::InvQuad : Family::Quad;
      case 3: return inv ? Family::InvCubic : Family::Cubic;
      case 4: return inv ? Family::InvQuartic : Family::Quartic;
      default: break;
    }
  }
  throw Error(ErrorCode::UnsupportedKind, "no catalog for this field (degree 2-4 polynomial, inverse, or Moebius)");
}

const char* geometry_name(Geometry g) {
  switch (g) {
    case Geometry::None: return "None";
    case Geometry::Collinear: return "Collinear";
    case Geometry::Triangle: return "Triangle";
    case Geometry::Border: return "Border";
    case Geometry::Quadrilateral: return "Quadrilateral";
  }
  return "?";
}

const char* confidence_name(Confidence c) {
  switch (c) {
    case Confidence::Exact: return "Exact";
    case Confidence::MultisetOnly: return "MultisetOnly";
    case Confidence::Flagged: return "Flagged";
  }
  return "?";
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// sign of the orientation of (a, b, c) on coordinates rounded to the tolerance grid
int orientation(cplx a, cplx b, cplx c, double grid) {
  auto r = [grid](cplx z) { return cplx(std::round(z.real() / grid), std::round(z.imag() / grid)); };
  const double o = cross(r(b) - r(a), r(c) - r(a));
  return (o > 0) - (o < 0);
}

}  // namespace

Geometry geometry_hint(const std::vector<cplx>& pts) {
  if (pts.size() != 4) return Geometry::None;
  double diam = 0;
  for (auto& a : pts)
    for (auto& b : pts) diam = std::max(diam, std::abs(a - b));
  if (diam == 0) return Geometry::None;
  const double tau = tol::line * diam;

  // total least squares line through all four
  cplx c = 0;
  for (auto& p : pts) c += p;
  c /= 4.0;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& p : pts) {
    const cplx d = p - c;
    sxx += d.real() * d.real();
    sxy += d.real() * d.imag();
    syy += d.imag() * d.imag();
  }
  const double ang = 0.5 * std::atan2(2 * sxy, sxx - syy);
  const cplx dir = std::polar(1.0, ang);
  double off = 0;
  for (auto& p : pts) off = std::max(off, std::abs(cross(dir, p - c)));
  if (off <= tau) return Geometry::Collinear;

  auto collinear3 = [&](cplx a, cplx b, cplx d) {
    const double l = std::max({std::abs(b - a), std::abs(d - a), std::abs(d - b)});
    return std::abs(cross(b - a, d - a)) / l <= tau;
  };
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<cplx> t;
    for (int k = 0; k < 4; ++k)
      if (k != skip) t.push_back(pts[k]);
    if (collinear3(t[0], t[1], t[2])) return Geometry::Border;
  }
  const double grid = tau;
  for (int in = 0; in < 4; ++in) {
    std::vector<cplx> t;
    for (int k = 0; k < 4; ++k)
      if (k != in) t.push_back(pts[k]);
    const int o1 = orientation(t[0], t[1], pts[in], grid), o2 = orientation(t[1], t[2], pts[in], grid),
              o3 = orientation(t[2], t[0], pts[in], grid);
    if (o1 != 0 && o1 == o2 && o2 == o3) return Geometry::Triangle;
  }
  return Geometry::Quadrilateral;
}

namespace {

std::string flip_code(const std::string& c) {
  if (c == "Fr") return "Fa";
  if (c == "Fa") return "Fr";
  if (c == "Nr") return "Na";
  if (c == "Na") return "Nr";
  return c;
}

std::string inf_code(const InfinityPoint& p) {
  switch (p.kind) {
    case InfKind::Saddle: return "S";
    case InfKind::NodeRepelling: return "Nr";
    case InfKind::NodeAttracting: return "Na";
  }
  return "?";
}

struct End {
  bool inf = false;
  int index = -1;  // -1 with inf: the single point at infinity of a Moebius field
};

End end_of(const Limit& l) {
  if (l.kind == LimitKind::Infinity) return {true, l.index};
  return {false, l.index};
}

std::string canonical_string(const std::vector<std::string>& inf_codes, const std::vector<std::string>& eq_codes,
                             const std::vector<std::pair<End, End>>& edges) {
  const int K = static_cast<int>(inf_codes.size());
  const int N = static_cast<int>(eq_codes.size());
  std::vector<int> perm(N);
  std::string best;
  bool have = false;
  for (int tau = 0; tau < 2; ++tau) {
    auto code = [&](const std::string& c) { return tau ? flip_code(c) : c; };
    // all relabelings of the finite points for small counts, code order beyond that
    std::iota(perm.begin(), perm.end(), 0);
    const bool exhaustive = N <= 6;
    if (!exhaustive)
      std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) { return code(eq_codes[x]) < code(eq_codes[y]); });
    do {
      for (int sigma = 0; sigma < 2; ++sigma)
        for (int r = 0; r < std::max(K, 1); ++r) {
          auto pos = [&](int i) { return sigma ? ((r - i) % K + K) % K : ((i - r) % K + K) % K; };
          auto name = [&](const End& e) {
            if (e.inf) return e.index < 0 ? std::string("I") : "I" + std::to_string(pos(e.index));
            return "E" + std::to_string(perm[e.index]) + ":" + code(eq_codes[e.index]);
          };
          std::string s;
          std::vector<std::string> inf_seq(K);
          for (int i = 0; i < K; ++i) inf_seq[pos(i)] = code(inf_codes[i]);
          for (auto& c : inf_seq) s += c + " ";
          s += "|";
          std::vector<std::string> eq_seq(N);
          for (int k = 0; k < N; ++k) eq_seq[perm[k]] = code(eq_codes[k]);
          for (auto& c : eq_seq) s += c + " ";
          s += "|";
          std::vector<std::string> es;
          for (auto& [a, b] : edges) es.push_back(tau ? name(b) + ">" + name(a) : name(a) + ">" + name(b));
          std::sort(es.begin(), es.end());
          for (auto& e : es) s += e + ",";
          if (!have || s < best) {
            best = s;
            have = true;
          }
        }
    } while (exhaustive && std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

}  // namespace

Signature signature(const FlowContext& ctx, const std::vector<Separatrix>& seps) {
  Signature sig;
  const Field& f = ctx.field;
  sig.kind = f.kind();
  sig.degree = f.has_poly() ? f.poly().degree() : 1;
  std::vector<std::string> eq_codes;
  std::vector<cplx> foci;
  bool all_foci = !ctx.eqs.empty();
  for (auto& e : ctx.eqs) {
    eq_codes.push_back(eq_code(e.kind, e.order));
    const bool focus = e.kind == EqKind::FocusAttracting || e.kind == EqKind::FocusRepelling;
    all_foci = all_foci && focus;
    foci.push_back(e.z);
  }
  sig.finite = eq_codes;
  std::sort(sig.finite.begin(), sig.finite.end());
  for (auto& p : ctx.inf) sig.infinity.push_back(inf_code(p));
  sig.infinity_pairs = static_cast<int>(ctx.inf.size()) / 2;
  if (all_foci && foci.size() == 4) sig.geometry = geometry_hint(foci);

  std::vector<std::pair<End, End>> edges;
  auto node = [](const End& e) {
    if (e.inf) return e.index < 0 ? std::string("I") : "I" + std::to_string(e.index);
    return "E" + std::to_string(e.index);
  };
  for (auto& s : seps) {
    if (s.probe) continue;
    if (s.inconclusive) {
      sig.complete = false;
      continue;
    }
    const End a = end_of(s.alpha), b = end_of(s.omega);
    if (s.alpha.kind == LimitKind::ClosedOrbit || s.omega.kind == LimitKind::ClosedOrbit) continue;
    edges.emplace_back(a, b);
    sig.connections.push_back({node(a), node(b)});
    if (!a.inf && !b.inf && a.index != b.index) ++sig.joins;
  }
  std::vector<std::string> inf_codes = sig.infinity;
  sig.canonical = canonical_string(inf_codes, eq_codes, edges);
  return sig;
}

Signature signature(const Field& f) {
  auto ctx = make_context(f);
  return signature(ctx, trace_separatrices(ctx));
}

}  // namespace holo

namespace holo {

namespace {

using MS = std::vector<std::string>;

CatalogEntry entry(Family fam, std::string label, std::string desc, std::vector<MS> ms, std::string example = {}) {
  CatalogEntry e;
  e.family = fam;
  e.label = label;
  e.coarse = std::move(label);
  e.description = std::move(desc);
  e.multisets = std::move(ms);
  e.example = std::move(example);
  return e;
}

CatalogEntry& with(CatalogEntry& e, Geometry g, int joins, std::string conn) {
  e.geometry = g;
  e.joins = joins;
  e.connections = std::move(conn);
  return e;
}

const char* const kSix = "S S S S S S |";
const char* const kTenNodes = "Na Nr Na Nr Na Nr Na Nr Na Nr |";

std::vector<CatalogEntry> build(Family f) {
  using F = Family;
  std::vector<CatalogEntry> v;
  switch (f) {
    case F::Quad:
      v.push_back(entry(f, "DD", "one double point", {{"M2"}}, "z^2"));
      v.push_back(entry(f, "CC", "two centers", {{"C", "C"}}, "z^2+1"));
      v.push_back(entry(f, "FF", "two foci or nodes", {{"F", "F"}, {"N", "N"}}, "z*(z-(1+i))"));
      break;
    case F::Cubic:
      v.push_back(entry(f, "c1", "three centers", {{"C", "C", "C"}}, "z*(z-(1+i))*(z-(3+3i))"));
      v.push_back(entry(f, "c2", "three nodes", {{"N", "N", "N"}}, "z*(z-1)*(z-2)"));
      v.push_back(entry(f, "c3", "one triple point", {{"M3"}}, "z^3"));
      v.push_back(entry(f, "c4", "three foci", {{"F", "F", "F"}}, "z*(z-(1-3i))*(z-(2+4i))"));
      v.push_back(entry(f, "c5", "center and double point", {{"C", "M2"}}, "z*(z-(1-i))^2"));
      v.push_back(entry(f, "c6", "node and double point", {{"N", "M2"}}, "z*(z+i)^2"));
      v.push_back(entry(f, "c7", "focus and double point", {{"F", "M2"}}, "z*(z-(1+3i))^2"));
      v.push_back(entry(f, "c8", "center and two foci, or center, node and focus", {{"C", "F", "F"}, {"C", "N", "F"}},
                        "z*(z-(3/2-i))*(z-(2-3i))"));
      v.push_back(entry(f, "c9", "node and two foci", {{"N", "F", "F"}}, "z*(z-(-2/3-i))*(z-(2-3i))"));
      break;
    case F::Quartic: {
      auto q = [&](std::string l, std::string d, MS ms, std::string ex = {}) {
        v.push_back(entry(f, std::move(l), std::move(d), {std::move(ms)}, std::move(ex)));
        return &v.back();
      };
      q("Q1", "one quadruple point", {"M4"}, "z^4");
      with(*q("Q2", "four centers", {"C", "C", "C", "C"}, "z*(z-i)*(z-2i)*(z-3i)"), Geometry::None, -1,
           std::string(kSix) + "C C C C |I0>I1,I2>I5,I4>I3,");
      with(*q("Q3", "center and three foci", {"C", "Fa", "Fa", "Fr"}, "z*(z-(1-3i))*(z-(2-2i))*(z-(3-3i))"),
           Geometry::None, -1, std::string(kSix) + "C Fa Fa Fr |E3:Fr>I0,E3:Fr>I2,I1>E1:Fa,I3>E2:Fa,I5>I4,");
      q("Q4", "four nodes, two of each stability", {"Na", "Na", "Nr", "Nr"}, "z*(z-1)*(z-2)*(z-3)");
      q("Q5", "four nodes, three of one stability", {"Na", "Na", "Na", "Nr"}, "z*(z-(3+2i))*(z-5/3)*(z-(3-2i))");
      q("Q6", "node, center and two foci of the other stability", {"C", "Na", "Fr", "Fr"});
      q("Q7", "two foci of opposite stability and a double point", {"Fa", "Fr", "M2"}, "z^2*(z-(2-2i))*(z-(3-i))");
      q("Q8", "center and three foci, proof configuration", {"C", "Fa", "Fa", "Fr"});
      q("Q9", "two centers and a double point", {"C", "C", "M2"}, "z^2*(z-2i)*(z+i)");
      q("Q10", "focus and a triple point", {"Fr", "M3"}, "z^3*(z-(3+i))");
      q("Q11", "two nodes of opposite stability and a double point", {"Na", "Nr", "M2"}, "z^2*(z-1)*(z+1)");
      q("Q12", "center and a triple point", {"C", "M3"}, "z^3*(z-i)");
      q("Q13", "node and a triple point", {"Na", "M3"}, "z^3*(z+1)");
      with(*q("Q14", "two foci of equal stability and a double point", {"Fr", "Fr", "M2"},
              "z^2*(z-(1-3i))*(z-(2-2i))"),
           Geometry::None, -1,
           std::string(kSix) + "Fa Fa M2 |E2:M2>I0,E2:M2>I2,E2:M2>I4,I1>E0:Fa,I3>E1:Fa,I5>E2:M2,");
      q("Q15", "center, focus and a double point", {"C", "Fa", "M2"}, "z^2*(z-(1+3i))*(z-1)");
      q("Q16", "center, node and a double point", {"C", "Na", "M2"}, "z^2*(z-(1-i))*(z-1)");
      const std::string focus_node_double =
          std::string(kSix) + "Fa M2 Nr |E1:M2>I0,E1:M2>I2,E2:Nr>I4,I1>E1:M2,I3>E0:Fa,I5>E0:Fa,";
      with(*q("Q17", "focus and node of opposite stability and a double point", {"Fr", "Na", "M2"},
              "z^2*(z-(2+2i))*(z-(2+i))"),
           Geometry::None, -1, focus_node_double);
      q("Q18", "two centers and two foci of opposite stability", {"C", "C", "Fa", "Fr"},
        "z*(z-(1+i))*(z-(3/5+3i))*(z-(3-2i))");
      with(*q("Q19", "focus and node of opposite stability and a double point, second figure", {"Fr", "Na", "M2"},
              "z^2*(z-(1-3i))*(z-(-1/3-2i))"),
           Geometry::None, -1, focus_node_double);
      q("Q20", "center, node and two foci of opposite stability", {"C", "Na", "Fa", "Fr"},
        "z*(z-(2+2i))*(z-(4-2i))*(z-(3-i))");
      q("Q21", "center, two nodes of opposite stability and a focus", {"C", "Na", "Nr", "Fr"},
        "z*(z-(3-i))*(z-(39/25-52/25i))*(z-(507/125-169/125i))");
      const std::string two_two =
          std::string(kSix) + "Fa Fa Fr Fr |E2:Fr>I0,E2:Fr>I2,E3:Fr>I4,I1>E0:Fa,I3>E1:Fa,I5>E1:Fa,";
      const std::string three_one =
          std::string(kSix) + "Fa Fa Fa Fr |E3:Fr>I0,E3:Fr>I2,E3:Fr>I4,I1>E0:Fa,I3>E1:Fa,I5>E2:Fa,";
      with(*q("Q22", "four foci, collinear", {"Fa", "Fa", "Fr", "Fr"}, "(-1+3i)*z*(z-1)*(z-4)*(z-8)"),
           Geometry::Collinear, -1,
           two_two);
      with(*q("Q23", "four foci, triangle", {"Fa", "Fr", "Fr", "Fr"}, "(-1+3i)*z*(z-(1+3i))*(z-2)*(z-(3+12i))"),
           Geometry::Triangle, -1, three_one);
      with(*q("Q24", "four foci, border", {"Fa", "Fr", "Fr", "Fr"}, "(-1+i)*z*(z-1)*(z-2)*(z-(3+12i))"),
           Geometry::Border, -1, three_one);
      with(*q("Q25", "four foci, quadrilateral, three of one stability", {"Fa", "Fr", "Fr", "Fr"},
              "(-1+2i)*z*(z-3)*(z-2i)*(z-(2+2i))"),
           Geometry::Quadrilateral, -1, three_one);
      with(*q("Q26", "four foci, quadrilateral, three of one stability, second figure", {"Fa", "Fr", "Fr", "Fr"},
              "(-1+2i)*z*(z-3)*(z-2i)*(z-(22/10+2i))"),
           Geometry::Quadrilateral, -1, three_one);
      with(*q("Q27", "four foci, quadrilateral, two of each stability", {"Fa", "Fa", "Fr", "Fr"},
              "(-1+2i)*z*(z-3)*(z-2i)*(z-(3+2i))"),
           Geometry::Quadrilateral, -1, two_two);
      with(*q("Q28", "four centers, second figure", {"C", "C", "C", "C"}, "z*(z^3-i/3)"), Geometry::None, -1,
           std::string(kSix) + "C C C C |I0>I1,I2>I3,I4>I5,");
      q("Q29", "two foci of equal stability and a double point, proof configuration", {"Fr", "Fr", "M2"});
      const std::map<std::string, std::string> merge = {{"Q4", "Q22"},  {"Q5", "Q23"},  {"Q11", "Q7"}, {"Q13", "Q10"},
                                                        {"Q16", "Q15"}, {"Q17", "Q7"}, {"Q20", "Q8"}};
      for (auto& e : v)
        if (auto it = merge.find(e.label); it != merge.end()) e.coarse = it->second;
      break;
    }
    case F::InvQuad:
      v.push_back(entry(f, "S1", "one double pole", {{"P2"}}, "1/z^2"));
      v.push_back(entry(f, "S2", "two simple poles joined", {{"P1", "P1"}}, "1/(z*(z-1))"));
      v.back().joins = 1;
      v.push_back(entry(f, "S3", "two simple poles not joined", {{"P1", "P1"}}, "1/(z*(z-i))"));
      v.back().joins = 0;
      break;
    case F::InvCubic:
      v.push_back(entry(f, "Sc1", "one triple pole", {{"P3"}}, "1/(z^3)"));
      v.push_back(entry(f, "Sc2", "simple and double pole", {{"P1", "P2"}}, "1/(z*(z-1)^2)"));
      v.push_back(entry(f, "Sc3", "three simple poles in a chain", {{"P1", "P1", "P1"}}, "1/(z*(z-1)*(z-2))"));
      v.back().joins = 2;
      v.push_back(entry(f, "Sc4", "three simple poles not joined", {{"P1", "P1", "P1"}}, "1/(z*(z-i)*(z-2))"));
      v.back().joins = 0;
      break;
    case F::InvQuartic: {
      auto s = [&](std::string l, std::string d, MS ms, std::string ex, int joins, std::string conn = {}) {
        v.push_back(entry(f, std::move(l), std::move(d), {std::move(ms)}, std::move(ex)));
        v.back().joins = joins;
        if (!conn.empty()) v.back().connections = kTenNodes + conn;
      };
      s("Sq1", "one quadruple pole", {"P4"}, "1/(z^4)", -1);
      s("Sq2", "simple and triple pole joined", {"P1", "P3"}, "1/(z*(z-3)^3)", 1);
      s("Sq3", "four simple poles in a chain", {"P1", "P1", "P1", "P1"}, "1/(z*(z-1)*(z-2)*(z-3))", 3);
      s("Sq4", "chain of two simple poles and a double pole at its end", {"P1", "P1", "P2"},
        "1/(z*(z-1)*(z-2)^2)", 2,
        "P1 P1 P2 |E0:P1>E1:P1,E0:P1>E2:P2,E1:P1>I0,E1:P1>I2,E2:P2>I4,E2:P2>I6,E2:P2>I8,I1>E1:P1,I3>E0:P1,"
        "I5>E2:P2,I7>E2:P2,I9>E0:P1,");
      s("Sq5", "simple and triple pole not joined", {"P1", "P3"}, "1/(z*(z-i)^3)", 0);
      s("Sq6", "two simple poles and a double pole not joined", {"P1", "P1", "P2"}, "1/(z*(z-i)*(z-2)^2)", 0,
        "P1 P1 P2 |E0:P1>I0,E0:P1>I2,E1:P1>I0,E1:P1>I4,E2:P2>I0,E2:P2>I6,E2:P2>I8,I1>E0:P1,I3>E0:P1,I3>E1:P1,"
        "I5>E1:P1,I5>E2:P2,I7>E2:P2,I9>E2:P2,");
      s("Sq7", "four simple poles not joined", {"P1", "P1", "P1", "P1"}, "1/(z*(z-1)*(z-2)*(z-i))", 0);
      s("Sq8", "two simple poles and a double pole not joined, second figure", {"P1", "P1", "P2"},
        "1/(z*(z-i)*(z-2i)^2)", 0,
        "P1 P1 P2 |E0:P1>I0,E0:P1>I2,E1:P1>I0,E1:P1>I4,E2:P2>I4,E2:P2>I6,E2:P2>I8,I1>E0:P1,I3>E0:P1,I3>E1:P1,"
        "I5>E2:P2,I7>E2:P2,I9>E1:P1,I9>E2:P2,");
      s("Sq9", "two double poles joined", {"P2", "P2"}, "1/(z^2*(z-2)^2)", 1);
      s("Sq10", "two double poles not joined", {"P2", "P2"}, "1/(z^2*(z-i)^2)", 0);
      s("Sq11", "chain of two simple poles through a double pole", {"P1", "P1", "P2"}, "1/(z*(z-3)*(z-2)^2)", 2,
        "P1 P1 P2 |E0:P1>E2:P2,E0:P1>I0,E1:P1>I4,E1:P1>I6,E2:P2>E1:P1,E2:P2>I2,E2:P2>I8,I1>E0:P1,I3>E2:P2,"
        "I5>E1:P1,I7>E2:P2,I9>E0:P1,");
      break;
    }
    case F::Moebius:
      v.push_back(entry(f, "M1", "simple pole only", {{"P1"}}, "moebius(0;1;1;0)"));
      v.push_back(entry(f, "M2", "linear center", {{"C"}}, "moebius(i;0;0;1)"));
      v.push_back(entry(f, "M3", "linear repelling focus", {{"Fr"}}, "moebius(1+i;0;0;1)"));
      v.push_back(entry(f, "M4", "linear attracting focus", {{"Fa"}}, "moebius(-1+i;0;0;1)"));
      v.push_back(entry(f, "M5", "linear repelling node", {{"Nr"}}, "moebius(1;0;0;1)"));
      v.push_back(entry(f, "M6", "linear attracting node", {{"Na"}}, "moebius(-1;0;0;1)"));
      v.push_back(entry(f, "M7", "center and pole, positive rotation", {{"C", "P1"}},
                        "moebius((3/13-2i/13)*(1+i);(3/13-2i/13)*(-3/2+i);1;0)"));
      v.push_back(entry(f, "M8", "focus or node and pole", {{"*", "P1"}}, "moebius((3/13-2i/13)*(1+i);(3/13-2i/13)*(-13/3+i);1;0)"));
      v.push_back(entry(f, "M9", "center and pole, negative rotation", {{"C", "P1"}},
                        "moebius((12/37+2i/37)*(1-2i);(12/37+2i/37)*(-27/14+i);1;0)"));
      v[4].coarse = "M3";
      v[5].coarse = "M4";
      break;
  }
  return v;
}

}  // namespace

std::vector<CatalogEntry> catalog(Family f) { return build(f); }

namespace {

bool code_matches(const std::string& pat, const std::string& c) {
  if (pat == "*") return true;
  if (pat == "N") return c == "Nr" || c == "Na";
  if (pat == "F") return c == "Fr" || c == "Fa";
  return pat == c;
}

bool assignable(const MS& pat, MS codes) {
  if (pat.size() != codes.size()) return false;
  std::sort(codes.begin(), codes.end());
  do {
    bool ok = true;
    for (std::size_t k = 0; k < pat.size() && ok; ++k) ok = code_matches(pat[k], codes[k]);
    if (ok) return true;
  } while (std::next_permutation(codes.begin(), codes.end()));
  return false;
}

MS flipped(MS codes) {
  for (auto& c : codes) c = flip_code(c);
  return codes;
}

// nodes and foci identified, stability dropped
MS coarse_codes(MS codes) {
  for (auto& c : codes)
    if (c == "Nr" || c == "Na" || c == "Fr" || c == "Fa" || c == "N" || c == "F") c = "X";
  return codes;
}

bool fine_match(const CatalogEntry& e, const MS& codes) {
  for (auto& pat : e.multisets)
    if (assignable(pat, codes) || assignable(pat, flipped(codes))) return true;
  return false;
}

bool coarse_match(const CatalogEntry& e, const MS& codes) {
  for (auto& pat : e.multisets)
    if (assignable(coarse_codes(pat), coarse_codes(codes))) return true;
  return false;
}

std::string join(const MS& v) {
  std::string s;
  for (auto& c : v) s += (s.empty() ? "" : ",") + c;
  return s;
}

Classification classify_moebius(const Field& f, Classification c) {
  const MoebiusParams& m = f.moebius_params();
  const double scale = std::abs(m.A) + std::abs(m.B) + std::abs(m.C) + std::abs(m.D);
  auto zero = [&](cplx v) { return std::abs(v) <= tol::zero * scale; };
  const auto cat = catalog(Family::Moebius);
  auto pick = [&](const std::string& label) {
    for (auto& e : cat)
      if (e.label == label) return e;
    throw Error(ErrorCode::NoMatch, "missing Moebius entry " + label);
  };
  const Equilibrium* eq = nullptr;
  auto ctx_eqs = classify_equilibria(f);
  for (auto& e : ctx_eqs)
    if (!e.is_pole) eq = &e;
  std::string label;
  if (zero(m.A)) {
    label = "M1";
  } else if (!eq) {
    throw Error(ErrorCode::NoMatch, "Moebius field without a finite equilibrium");
  } else if (zero(m.C)) {
    switch (eq->kind) {
      case EqKind::Center: label = "M2"; break;
      case EqKind::FocusRepelling: label = "M3"; break;
      case EqKind::FocusAttracting: label = "M4"; break;
      case EqKind::NodeRepelling: label = "M5"; break;
      case EqKind::NodeAttracting: label = "M6"; break;
      default: throw Error(ErrorCode::NoMatch, "linear Moebius field with a non-simple equilibrium");
    }
  } else if (eq->kind == EqKind::Center) {
    label = eq->eig.imag() > 0 ? "M7" : "M9";
  } else {
    label = "M8";
  }
  c.entry = pick(label);
  c.candidates = {label};
  c.confidence = Confidence::Exact;
  if (eq && eq->band) {
    c.confidence = Confidence::Flagged;
    c.note = "equilibrium falls in the center/focus tolerance band";
  }
  return c;
}

}  // namespace

Classification classify_portrait(const Field& f) {
  family_of(f);
  auto ctx = make_context(f);
  return classify_portrait(ctx, trace_separatrices(ctx));
}

Classification classify_portrait(const FlowContext& ctx, const std::vector<Separatrix>& seps) {
  const Field& f = ctx.field;
  const Family fam = family_of(f);
  Classification out;
  out.signature = signature(ctx, seps);
  if (fam == Family::Moebius) return classify_moebius(f, std::move(out));

  const Signature& sig = out.signature;
  const MS& codes = sig.finite;
  const auto cat = catalog(fam);
  bool band = false;
  for (auto& e : ctx.eqs) band = band || e.band;

  // tier_geo: same connection graph, different placement of the foci
  std::vector<const CatalogEntry*> tier_conn, tier_plain, tier_geo, tier_ms, tier_coarse;
  for (auto& e : cat) {
    const bool m = fine_match(e, codes);
    const bool g = e.geometry == Geometry::None || e.geometry == sig.geometry;
    const bool j = e.joins < 0 || e.joins == sig.joins;
    const bool c = e.connections.empty() || e.connections == sig.canonical;
    if (m && g && j && c)
      (e.connections.empty() ? tier_plain : tier_conn).push_back(&e);
    else if (m && j && c)
      tier_geo.push_back(&e);
    else if (m && g && j)
      tier_ms.push_back(&e);
    else if (coarse_match(e, codes))
      tier_coarse.push_back(&e);
  }
  // coarse candidates closest in joins and geometry first
  std::stable_sort(tier_coarse.begin(), tier_coarse.end(), [&](const CatalogEntry* a, const CatalogEntry* b) {
    auto key = [&](const CatalogEntry* e) {
      return std::make_tuple(!fine_match(*e, codes), e->joins < 0 ? 0 : std::abs(e->joins - sig.joins),
                             e->geometry != Geometry::None && e->geometry != sig.geometry);
    };
    return key(a) < key(b);
  });

  std::vector<const CatalogEntry*> ranked;
  for (auto* t : {&tier_conn, &tier_plain, &tier_geo, &tier_ms, &tier_coarse}) ranked.insert(ranked.end(), t->begin(), t->end());
  if (ranked.empty()) {
    // nearest by size of the multiset difference
    const CatalogEntry* best = nullptr;
    std::size_t best_diff = ~std::size_t{0};
    for (auto& e : cat) {
      MS a = coarse_codes(e.multisets.front()), b = coarse_codes(codes), d;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
      if (d.size() < best_diff) {
        best_diff = d.size();
        best = &e;
      }
    }
    throw Error(ErrorCode::NoMatch, std::string("signature {") + join(codes) + "} joins=" +
                                        std::to_string(sig.joins) + " fits no " + family_name(fam) +
                                        " template; nearest " + best->label + " {" + join(best->multisets.front()) +
                                        "}");
  }
  out.entry = *ranked.front();
  auto list = [&](std::initializer_list<const std::vector<const CatalogEntry*>*> tiers) {
    for (auto* t : tiers)
      for (auto* e : *t) out.candidates.push_back(e->label);
  };

  const auto& top = !tier_conn.empty() ? tier_conn : tier_plain;
  if (!top.empty()) {
    list({&tier_conn, &tier_plain});
    out.confidence = top.size() == 1 ? Confidence::Exact : Confidence::MultisetOnly;
    if (top.size() > 1) out.note = "signature shared by " + std::to_string(top.size()) + " catalog figures";
  } else if (!tier_geo.empty()) {
    list({&tier_geo});
    out.confidence = Confidence::MultisetOnly;
    out.note = std::string("connection graph of ") + tier_geo.front()->label + " with " +
               geometry_name(sig.geometry) + " placement";
  } else if (!tier_ms.empty()) {
    list({&tier_ms});
    out.confidence = Confidence::MultisetOnly;
    out.note = "connection graph matches no figure of this multiset";
  } else {
    list({&tier_coarse});
    out.confidence = Confidence::Flagged;
    out.note = "finite multiset or joins outside the catalog; nearest template by node/focus class";
  }
  if (out.confidence == Confidence::Exact && !sig.complete) {
    out.confidence = Confidence::MultisetOnly;
    out.note = "some separatrices were inconclusive";
  }
  if (band && out.confidence != Confidence::Flagged) {
    out.confidence = Confidence::Flagged;
    out.note = "an equilibrium falls in the center/focus tolerance band";
  }
  return out;
}

}  // namespace holo
