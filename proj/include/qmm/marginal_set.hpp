#pragma once

// Marginal sets over a geometry and the local consistency / local Markov
// validators that measure ε.

#include <cmath>
#include <limits>

#include "qmm/core/measures.hpp"
#include "qmm/geometry.hpp"

namespace qmm {

/// One marginal per stored cluster; nested clusters are reductions of their parent.
class MarginalSet {
 public:
  MarginalSet() = default;

  /// `entries[k]` is the marginal of the k-th stored cluster (in
  /// `geometry.stored_clusters()` order), supported exactly on Ā.
  MarginalSet(Geometry geometry, std::vector<LocalState> entries) : geometry_(std::move(geometry)) {
    const auto stored = geometry_.stored_clusters();
    if (entries.size() != stored.size())
      throw LayoutError(fmt::format("marginal set: {} entries for {} stored clusters", entries.size(), stored.size()));
    for (std::size_t k = 0; k < stored.size(); ++k) {
      const SiteSet expect = geometry_.cluster_sites(stored[k]);
      LocalState s = canonical(entries[k]);
      if (s.support() != expect)
        throw SupportError(fmt::format("marginal for cluster {} has support {}, expected {}", stored[k],
                                       to_string(s.support()), to_string(expect)));
      for (SiteId id : expect)
        if (s.dim_of(id) != geometry_.dim(id))
          throw DomainError(fmt::format("marginal for cluster {}: site {} has the wrong dimension", stored[k], to_int(id)));
      slot_.emplace(stored[k], entries_.size());
      entries_.push_back(std::move(s));
    }
  }

  [[nodiscard]] const Geometry& geometry() const { return geometry_; }
  [[nodiscard]] const std::vector<LocalState>& entries() const { return entries_; }

  /// Marginal of any cluster: stored, or the reduction of the stored parent.
  [[nodiscard]] LocalState marginal(std::size_t cluster) const {
    const std::size_t owner = geometry_.storage_of(cluster);
    const LocalState& stored = entries_.at(slot_.at(owner));
    if (owner == cluster) return stored;
    return reduce(stored, geometry_.cluster_sites(cluster));
  }

  [[nodiscard]] const LocalState& stored(std::size_t cluster) const { return entries_.at(slot_.at(cluster)); }

  /// Copy with the marginal of stored cluster `cluster` replaced.
  [[nodiscard]] MarginalSet with_marginal(std::size_t cluster, LocalState s) const {
    std::vector<LocalState> e = entries_;
    e.at(slot_.at(cluster)) = std::move(s);
    return MarginalSet(geometry_, std::move(e));
  }

 private:
  Geometry geometry_;
  std::vector<LocalState> entries_;
  std::map<std::size_t, std::size_t> slot_;
};

/// Reductions of a global state onto every stored cluster.
inline MarginalSet extract_marginals(const LocalState& global, const Geometry& g) {
  if (global.support() != g.vertex_set())
    throw SupportError(fmt::format("extract_marginals: global support {} differs from the vertex set {}",
                                   to_string(global.support()), to_string(g.vertex_set())));
  std::vector<LocalState> entries;
  for (std::size_t k : g.stored_clusters()) entries.push_back(reduce(global, g.cluster_sites(k)));
  return MarginalSet(g, std::move(entries));
}

/// Local Markov condition I(a : Ā∖(a∪B) | B) with B = 𝒩(a) ∩ Ā.
struct MarkovCondition {
  std::size_t cluster = 0;
  std::size_t cell = 0;
  SiteSet a;
  SiteSet b;
  SiteSet c;
};

/// One condition per (cluster, cell ∈ cluster), nested clusters included.
inline std::vector<MarkovCondition> markov_conditions(const Geometry& g) {
  std::vector<MarkovCondition> out;
  for (std::size_t k = 0; k < g.clusters().size(); ++k) {
    const SiteSet region = g.cluster_sites(k);
    for (std::size_t cell : g.clusters()[k].cells) {
      MarkovCondition mc;
      mc.cluster = k;
      mc.cell = cell;
      mc.a = g.cell_sites(cell);
      mc.b = g.neighborhood(mc.a) & region;
      mc.c = region - (mc.a | mc.b);
      out.push_back(std::move(mc));
    }
  }
  return out;
}

struct ConsistencyGap {
  std::size_t first = 0;
  std::size_t second = 0;
  SiteSet overlap;
  double distance = 0.0;
};

struct CmiValue {
  MarkovCondition condition;
  double value = 0.0;  // in the report's log base
};

struct MarkovReport {
  std::vector<ConsistencyGap> consistency_gaps;
  std::vector<CmiValue> cmi_values;
  double epsilon = 0.0;
  double log_base = std::exp(1.0);

  [[nodiscard]] double max_gap() const {
    double m = 0.0;
    for (const auto& g : consistency_gaps) m = std::max(m, g.distance);
    return m;
  }
  [[nodiscard]] double max_cmi() const {
    double m = 0.0;
    for (const auto& c : cmi_values) m = std::max(m, c.value);
    return m;
  }
};

/// CMI values in [−1e-10, 0) are numerical noise and count as zero.
inline double epsilon_from(double max_gap, double max_cmi) {
  return std::max(max_gap, std::sqrt(std::max(max_cmi, 0.0)));
}

/// Measures the local consistency gaps of every overlapping stored pair and
/// the CMI of every local Markov condition. ε = max(gap, √CMI).
inline MarkovReport check(const MarginalSet& ms, double log_base = std::exp(1.0)) {
  const Geometry& g = ms.geometry();
  MarkovReport rep;
  rep.log_base = log_base;
  const auto stored = g.stored_clusters();
  for (std::size_t x = 0; x < stored.size(); ++x)
    for (std::size_t y = x + 1; y < stored.size(); ++y) {
      const SiteSet overlap = g.cluster_sites(stored[x]) & g.cluster_sites(stored[y]);
      if (overlap.empty()) continue;
      ConsistencyGap gap;
      gap.first = stored[x];
      gap.second = stored[y];
      gap.overlap = overlap;
      gap.distance = trace_distance(reduce(ms.stored(stored[x]), overlap), reduce(ms.stored(stored[y]), overlap));
      rep.consistency_gaps.push_back(std::move(gap));
    }
  for (auto& mc : markov_conditions(g)) {
    CmiValue cv;
    if (!mc.c.empty()) cv.value = to_log_base(cmi(ms.marginal(mc.cluster), mc.a, mc.b, mc.c), log_base);
    cv.condition = std::move(mc);
    rep.cmi_values.push_back(std::move(cv));
  }
  rep.epsilon = epsilon_from(rep.max_gap(), rep.max_cmi());
  return rep;
}

}  // namespace qmm
