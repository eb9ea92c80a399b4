#pragma once

// JSON reports for check, reconstruct and lemmas.

#include "qmm/io/mm_format.hpp"
#include "qmm/lemmas.hpp"

namespace qmm::io {

inline json sites_json(const SiteSet& s) {
  json out = json::array();
  for (SiteId id : s) out.push_back(to_int(id));
  return out;
}

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const MarkovReport& r, const Geometry& g) {
  json j;
  j["format"] = kFormatVersion;
  j["kind"] = "check-report";
  j["epsilon"] = r.epsilon;
  j["log_base"] = r.log_base;
  j["max_consistency_gap"] = r.max_gap();
  j["max_cmi"] = r.max_cmi();
  j["consistency_gaps"] = json::array();
  for (const auto& gap : r.consistency_gaps)
    j["consistency_gaps"].push_back({{"clusters", {gap.first, gap.second}},
                                     {"overlap", sites_json(gap.overlap)},
                                     {"distance", gap.distance}});
  j["cmi_values"] = json::array();
  for (const auto& c : r.cmi_values)
    j["cmi_values"].push_back({{"cluster", c.condition.cluster},
                               {"cell", g.cells()[c.condition.cell].label},
                               {"A", sites_json(c.condition.a)},
                               {"B", sites_json(c.condition.b)},
                               {"C", sites_json(c.condition.c)},
                               {"value", c.value}});
  return j;
}

inline json to_json(const ConsistencyReport& r) {
  json j;
  j["format"] = kFormatVersion;
  j["kind"] = "consistency-report";
  j["delta"] = r.delta;
  j["epsilon"] = r.epsilon;
  j["size_param"] = r.size_param;
  j["ratio"] = optional_json(r.ratio);
  j["map"] = r.map;
  j["string"] = r.string_text;
  j["per_cluster_distance"] = json::array();
  for (const auto& [k, d] : r.per_cluster_distance) j["per_cluster_distance"].push_back({{"cluster", k}, {"distance", d}});
  return j;
}

inline json to_json(const LemmaReport& r) {
  json j;
  j["format"] = kFormatVersion;
  j["kind"] = "lemma-report";
  j["suite"] = std::string(to_string(r.suite));
  j["epsilon"] = r.epsilon;
  j["map"] = r.map;
  j["max_gap"] = r.max_gap();
  j["lemmas"] = json::array();
  for (const auto& l : r.lemmas)
    j["lemmas"].push_back({{"id", l.id},
                           {"relation", l.relation},
                           {"instances", l.instances},
                           {"max_gap", l.max_gap},
                           {"ratio", optional_json(l.ratio)}});
  return j;
}

}  // namespace qmm::io
