#pragma once

// JSON and CSV encodings. Big integers are written as decimal strings so that
// values beyond 64 bits survive every JSON reader; key order is fixed.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wieferich/ideals.hpp"
#include "wieferich/qfield.hpp"
#include "wieferich/verify.hpp"
#include "wieferich/wieferich.hpp"

namespace wieferich {

using Json = nlohmann::ordered_json;

inline Json t_json(const PrimeIdeal& P) {
  if (P.kind == SplitKind::split || P.kind == SplitKind::ramified) return to_string(P.t);
  return nullptr;
}

inline Json to_json(const FieldSpec& f) {
  Json j;
  j["mode"] = f.is_rational() ? "rational" : "imaginary-quadratic";
  j["d"] = f.d();
  j["discriminant"] = f.discriminant();
  j["degree"] = f.degree();
  j["basis"] = f.is_rational() ? "integer" : (f.basis() == BasisKind::half ? "half" : "sqrt");
  j["name"] = f.name();
  return j;
}

inline Json to_json(const QuadInt& a) {
  return Json{{"x", to_string(a.x())}, {"y", to_string(a.y())}, {"display", display_element(a)}};
}

inline Json to_json(const PrimeIdeal& P) {
  return Json{{"p", to_string(P.p)}, {"kind", to_string(P.kind)}, {"t", t_json(P)}, {"norm", to_string(P.norm())}};
}

inline Json to_json(const FactoredIdeal& F) {
  Json arr = Json::array();
  for (const auto& [P, e] : F.factors())
    arr.push_back(Json{{"p", to_string(P.p)}, {"kind", to_string(P.kind)}, {"t", t_json(P)}, {"exp", e}});
  return arr;
}

// Inverse of to_json(FactoredIdeal).
inline FactoredIdeal factored_ideal_from_json(const Json& arr) {
  std::vector<FactoredIdeal::Entry> entries;
  for (const auto& item : arr) {
    PrimeIdeal P;
    P.p = Int(item.at("p").get<std::string>());
    std::string kind = item.at("kind").get<std::string>();
    if (kind == "split") P.kind = SplitKind::split;
    else if (kind == "inert") P.kind = SplitKind::inert;
    else if (kind == "ramified") P.kind = SplitKind::ramified;
    else if (kind == "rational") P.kind = SplitKind::rational;
    else throw std::invalid_argument("unknown prime kind '" + kind + "'");
    P.t = item.at("t").is_null() ? Int(0) : Int(item.at("t").get<std::string>());
    entries.emplace_back(P, item.at("exp").get<unsigned>());
  }
  return FactoredIdeal(std::move(entries));
}

inline Json to_json(const CDDecomposition& cd) {
  Json j;
  j["n"] = cd.n;
  j["base"] = to_json(cd.base);
  j["complete"] = cd.complete;
  if (!cd.complete) {
    j["unfactored"] = to_string(cd.unfactored);
    return j;
  }
  j["C"] = to_json(cd.C);
  j["D"] = to_json(cd.D);
  j["Cp"] = to_json(cd.Cp);
  j["Dp"] = to_json(cd.Dp);
  j["norm_C"] = to_string(cd.C.norm());
  j["norm_D"] = to_string(cd.D.norm());
  j["norm_Cp"] = to_string(cd.Cp.norm());
  j["norm_Dp"] = to_string(cd.Dp.norm());
  return j;
}

inline Json to_json(const PlaceReport& r) {
  Json j = to_json(r.prime);
  j["order"] = r.order ? Json(to_string(*r.order)) : Json(nullptr);
  j["wieferich"] = r.wieferich;
  return j;
}

inline Json to_json(const CensusRecord& r) {
  return Json{{"p", to_string(r.prime.p)}, {"kind", to_string(r.prime.kind)}, {"t", t_json(r.prime)},
              {"norm", to_string(r.norm)},  {"level", r.level},                  {"residue_class", to_string(r.residue_class)}};
}

inline Json summary_json(const CensusResult& c) {
  Json s;
  s["base"] = to_json(c.base);
  s["field"] = to_json(c.base.field());
  s["k"] = c.k;
  s["strategy"] = to_string(c.strategy);
  s["records"] = c.records.size();
  Json grid = Json::array();
  for (const auto& x : c.summary.x_grid) grid.push_back(to_string(x));
  s["x_grid"] = grid;
  s["counts"] = c.summary.counts;
  s["count_over_log_x"] = c.summary.count_over_log_x;
  s["complete_levels"] = c.complete_levels;
  s["skipped_levels"] = c.skipped_levels;
  Json excluded = Json::array();
  for (const auto& e : c.excluded) {
    Json x = to_json(e.prime);
    x["level"] = e.level;
    x["reason"] = e.reason;
    excluded.push_back(x);
  }
  s["excluded"] = excluded;
  s["warnings"] = c.warnings;
  return Json{{"summary", s}};
}

/// JSON lines: one record per line, then the summary object.
inline void write_census_jsonl(std::ostream& os, const CensusResult& c) {
  for (const auto& r : c.records) os << to_json(r).dump() << '\n';
  os << summary_json(c).dump() << '\n';
}

inline const char* kCensusCsvHeader = "p,kind,t,norm,level,residue_class";

inline void write_census_csv(std::ostream& os, const CensusResult& c) {
  os << kCensusCsvHeader << '\n';
  for (const auto& r : c.records) {
    const PrimeIdeal& P = r.prime;
    bool has_t = P.kind == SplitKind::split || P.kind == SplitKind::ramified;
    os << to_string(P.p) << ',' << to_string(P.kind) << ',' << (has_t ? to_string(P.t) : "") << ','
       << to_string(r.norm) << ',' << r.level << ',' << to_string(r.residue_class) << '\n';
  }
}

inline Json to_json(const BoundCheckReport& r) {
  Json j;
  j["check"] = r.check;
  j["parameters"] = r.parameters;
  j["pass"] = r.pass();
  j["cases"] = r.cases;
  j["violations"] = r.violations;
  j["skipped"] = r.skipped;
  j["min_margin"] = r.min_margin ? Json(*r.min_margin) : Json(nullptr);
  return j;
}

inline Json to_json(const TrendReport& t) {
  Json j;
  j["base"] = to_json(t.base);
  Json levels = Json::array();
  for (const auto& p : t.levels)
    levels.push_back(Json{{"n", p.n},
                          {"d_ratio", p.d_ratio},
                          {"c_ratio", p.c_ratio},
                          {"cprime_ratio", p.cprime_ratio},
                          {"total_ratio", p.total_ratio}});
  j["levels"] = levels;
  j["skipped"] = t.skipped;
  j["last_quartile_max_d_ratio"] = t.last_quartile_max_d_ratio;
  j["last_quartile_min_c_ratio"] = t.last_quartile_min_c_ratio;
  return j;
}

inline Json to_json(const QualityReport& q) {
  Json j;
  j["alpha"] = to_json(q.alpha);
  j["beta"] = to_json(q.beta);
  j["max_norm"] = to_string(q.max_norm);
  j["rad_norm_alpha"] = to_string(q.rad_norm_alpha);
  j["rad_norm_beta"] = to_string(q.rad_norm_beta);
  j["quality"] = q.quality;
  j["log_height"] = q.log_height;
  j["log_conductor"] = q.log_conductor;
  j["exponent_gap"] = q.exponent_gap;
  return j;
}

inline Json to_json(const std::vector<ExceptionGroup>& groups) {
  Json j;
  Json by_d = Json::array();
  for (const auto& g : groups) {
    Json els = Json::array();
    for (const auto& a : g.elements) {
      Json e = to_json(a);
      e["norm"] = to_string(norm(a));
      els.push_back(e);
    }
    by_d.push_back(Json{{"d", g.d}, {"count", g.elements.size()}, {"elements", els}});
  }
  j["fields"] = by_d;
  auto all = exception_union(groups);
  j["union_count"] = all.size();
  j["union"] = all;
  return j;
}

}  // namespace wieferich
