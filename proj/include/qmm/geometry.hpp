#pragma once

// Interaction graph, its partition into cells, and the clusters on which
// marginals are given.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "qmm/core/types.hpp"

namespace qmm {

enum class LayoutKind { chain, hexgrid, custom };

inline std::string_view to_string(LayoutKind k) {
  switch (k) {
    case LayoutKind::chain: return "chain";
    case LayoutKind::hexgrid: return "hexgrid";
    case LayoutKind::custom: return "custom";
  }
  return "custom";
}

struct Layout {
  LayoutKind kind = LayoutKind::custom;
  int n = 0;            // chain: vertex count; hexgrid: cells per side
  int granularity = 1;  // hexgrid: vertices per cell
  friend bool operator==(const Layout&, const Layout&) = default;
};

struct Vertex {
  SiteId id;
  int dim = 2;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Cell {
  std::string label;
  SiteSet sites;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// A set of cells. Clusters with a parent are nested in that (stored)
/// cluster; their marginal is the parent's reduction and is never stored.
struct Cluster {
  std::vector<std::size_t> cells;  // ascending cell indices
  std::optional<std::size_t> parent;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

class Geometry {
 public:
  Geometry() = default;

  Geometry(std::vector<Vertex> vertices, std::vector<std::pair<SiteId, SiteId>> edges, std::vector<Cell> cells,
           std::vector<Cluster> clusters, Layout layout = {})
      : vertices_(std::move(vertices)),
        edges_(std::move(edges)),
        cells_(std::move(cells)),
        clusters_(std::move(clusters)),
        layout_(layout) {
    std::vector<SiteId> ids;
    for (const Vertex& v : vertices_) {
      if (v.dim < 1) throw LayoutError(fmt::format("vertex {} has dimension {}", to_int(v.id), v.dim));
      if (!dims_.emplace(v.id, v.dim).second) throw LayoutError(fmt::format("duplicate vertex {}", to_int(v.id)));
      ids.push_back(v.id);
    }
    all_ = SiteSet(ids);
    for (auto& [a, b] : edges_) {
      if (!all_.contains(a) || !all_.contains(b)) throw LayoutError("edge references unknown vertex");
      if (a == b) throw LayoutError("self-loop edge");
      if (b < a) std::swap(a, b);
      adj_[a].insert(b);
      adj_[b].insert(a);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    SiteSet covered;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      const Cell& c = cells_[k];
      if (c.sites.empty()) throw LayoutError(fmt::format("cell '{}' is empty", c.label));
      if (!covered.disjoint(c.sites)) throw LayoutError(fmt::format("cell '{}' overlaps another cell", c.label));
      if (!all_.includes(c.sites)) throw LayoutError(fmt::format("cell '{}' references unknown vertex", c.label));
      covered = covered | c.sites;
      if (!labels_.emplace(c.label, k).second) throw LayoutError(fmt::format("duplicate cell label '{}'", c.label));
      for (SiteId s : c.sites) cell_of_[s] = k;
    }
    if (covered != all_) throw LayoutError("cells do not cover every vertex");

    for (std::size_t k = 0; k < clusters_.size(); ++k) {
      Cluster& cl = clusters_[k];
      std::sort(cl.cells.begin(), cl.cells.end());
      if (cl.cells.empty() || std::adjacent_find(cl.cells.begin(), cl.cells.end()) != cl.cells.end())
        throw LayoutError(fmt::format("cluster {} is empty or repeats a cell", k));
      for (std::size_t c : cl.cells)
        if (c >= cells_.size()) throw LayoutError(fmt::format("cluster {} references unknown cell {}", k, c));
      if (cl.parent) {
        if (*cl.parent >= clusters_.size() || clusters_[*cl.parent].parent)
          throw LayoutError(fmt::format("cluster {} has an invalid parent", k));
        const auto& pc = clusters_[*cl.parent].cells;
        std::vector<std::size_t> sorted_parent(pc);
        std::sort(sorted_parent.begin(), sorted_parent.end());
        if (!std::includes(sorted_parent.begin(), sorted_parent.end(), cl.cells.begin(), cl.cells.end()))
          throw LayoutError(fmt::format("cluster {} is not nested in its parent", k));
      }
    }
  }

  [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::pair<SiteId, SiteId>>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
  [[nodiscard]] const std::vector<Cluster>& clusters() const { return clusters_; }
  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] const SiteSet& vertex_set() const { return all_; }

  [[nodiscard]] int dim(SiteId s) const {
    auto it = dims_.find(s);
    if (it == dims_.end()) throw DomainError(fmt::format("unknown vertex {}", to_int(s)));
    return it->second;
  }
  [[nodiscard]] std::vector<int> dims_of(const SiteSet& s) const {
    std::vector<int> out;
    for (SiteId id : s) out.push_back(dim(id));
    return out;
  }

  /// 𝒩(a): vertices adjacent to some vertex of `a`, excluding `a` itself.
  [[nodiscard]] SiteSet neighborhood(const SiteSet& a) const {
    std::vector<SiteId> out;
    for (SiteId s : a) {
      auto it = adj_.find(s);
      if (it == adj_.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return SiteSet(std::move(out)) - a;
  }

  [[nodiscard]] const SiteSet& cell_sites(std::size_t cell) const { return cells_.at(cell).sites; }

  /// Ā: union of the cluster's cells.
  [[nodiscard]] SiteSet cluster_sites(std::size_t cluster) const {
    SiteSet out;
    for (std::size_t c : clusters_.at(cluster).cells) out = out | cells_[c].sites;
    return out;
  }

  [[nodiscard]] bool is_stored(std::size_t cluster) const { return !clusters_.at(cluster).parent.has_value(); }

  /// The stored cluster whose marginal defines `cluster`.
  [[nodiscard]] std::size_t storage_of(std::size_t cluster) const {
    return clusters_.at(cluster).parent.value_or(cluster);
  }

  [[nodiscard]] std::vector<std::size_t> stored_clusters() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < clusters_.size(); ++k)
      if (is_stored(k)) out.push_back(k);
    return out;
  }

  [[nodiscard]] std::optional<std::size_t> find_cell(std::string_view label) const {
    auto it = labels_.find(std::string(label));
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  /// Cluster with exactly these cells; a stored cluster is preferred.
  [[nodiscard]] std::optional<std::size_t> find_cluster(std::vector<std::size_t> cells) const {
    std::sort(cells.begin(), cells.end());
    std::optional<std::size_t> nested;
    for (std::size_t k = 0; k < clusters_.size(); ++k)
      if (clusters_[k].cells == cells) {
        if (is_stored(k)) return k;
        if (!nested) nested = k;
      }
    return nested;
  }

  [[nodiscard]] std::size_t cell_of(SiteId s) const {
    auto it = cell_of_.find(s);
    if (it == cell_of_.end()) throw DomainError(fmt::format("unknown vertex {}", to_int(s)));
    return it->second;
  }

  /// Two distinct cells are adjacent iff an edge joins them.
  [[nodiscard]] bool cells_adjacent(std::size_t a, std::size_t b) const {
    if (a == b) return false;
    return !neighborhood(cells_.at(a).sites).disjoint(cells_.at(b).sites);
  }

  [[nodiscard]] std::string cluster_label(std::size_t cluster) const {
    std::vector<std::string> names;
    for (std::size_t c : clusters_.at(cluster).cells) names.push_back("[" + cells_[c].label + "]");
    return fmt::format("{{{}}}", fmt::join(names, ","));
  }

  friend bool operator==(const Geometry& a, const Geometry& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.cells_ == b.cells_ && a.clusters_ == b.clusters_ &&
           a.layout_ == b.layout_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::pair<SiteId, SiteId>> edges_;
  std::vector<Cell> cells_;
  std::vector<Cluster> clusters_;
  Layout layout_;

  SiteSet all_;
  std::map<SiteId, int> dims_;
  std::map<SiteId, std::set<SiteId>> adj_;
  std::map<std::string, std::size_t, std::less<>> labels_;
  std::map<SiteId, std::size_t> cell_of_;
};

/// Path graph on n vertices, cells [i] = {2i−1, 2i}, clusters {[i],[i+1]}.
inline Geometry chain_geometry(int n, int d) {
  if (n < 4 || n % 2 != 0) throw LayoutError(fmt::format("chain_geometry: n must be even and >= 4 (got {})", n));
  if (d < 1) throw LayoutError("chain_geometry: local dimension must be positive");
  std::vector<Vertex> vertices;
  std::vector<std::pair<SiteId, SiteId>> edges;
  for (int v = 1; v <= n; ++v) {
    vertices.push_back({SiteId{v}, d});
    if (v < n) edges.emplace_back(SiteId{v}, SiteId{v + 1});
  }
  std::vector<Cell> cells;
  for (int i = 1; i <= n / 2; ++i) cells.push_back({std::to_string(i), SiteSet{2 * i - 1, 2 * i}});
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) clusters.push_back({{i, i + 1}, std::nullopt});
  return Geometry(std::move(vertices), std::move(edges), std::move(cells), std::move(clusters),
                  Layout{LayoutKind::chain, n, 1});
}

namespace hex {

/// Center of hexagon [i,j]: (i − j/2, √3 j / 2).
inline std::pair<double, double> center(int i, int j) { return {i - 0.5 * j, std::sqrt(3.0) * 0.5 * j}; }

inline bool adjacent(int i1, int j1, int i2, int j2) {
  const auto [x1, y1] = center(i1, j1);
  const auto [x2, y2] = center(i2, j2);
  return std::abs(std::hypot(x1 - x2, y1 - y2) - 1.0) < 1e-9;
}

inline std::string label(int i, int j) { return fmt::format("{},{}", i, j); }

inline std::size_t cell_index(int n, int i, int j) { return static_cast<std::size_t>((j - 1) * n + (i - 1)); }

/// Index of the stored quadruple {[i,j],[i+1,j],[i,j+1],[i+1,j+1]}.
inline std::size_t quad_index(int n, int i, int j) { return static_cast<std::size_t>((j - 1) * (n - 1) + (i - 1)); }

}  // namespace hex

/// n×n hexagonal cells [i,j]. Each cell holds `granularity` vertices that are
/// pairwise adjacent; vertices of adjacent cells are all adjacent. Stored
/// clusters are the quadruples; the triples are nested in them.
inline Geometry hex_geometry(int n, int d, int granularity = 1) {
  if (n < 2) throw LayoutError(fmt::format("hex_geometry: n must be >= 2 (got {})", n));
  if (granularity < 1) throw LayoutError("hex_geometry: granularity must be >= 1");
  if (d < 1) throw LayoutError("hex_geometry: local dimension must be positive");
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  std::vector<std::pair<SiteId, SiteId>> edges;
  auto vertex = [&](int i, int j, int t) { return SiteId{static_cast<int>(hex::cell_index(n, i, j)) * granularity + t + 1}; };
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      std::vector<SiteId> sites;
      for (int t = 0; t < granularity; ++t) {
        vertices.push_back({vertex(i, j, t), d});
        sites.push_back(vertex(i, j, t));
        for (int u = 0; u < t; ++u) edges.emplace_back(vertex(i, j, u), vertex(i, j, t));
      }
      cells.push_back({hex::label(i, j), SiteSet(std::move(sites))});
    }
  for (int j1 = 1; j1 <= n; ++j1)
    for (int i1 = 1; i1 <= n; ++i1)
      for (int j2 = 1; j2 <= n; ++j2)
        for (int i2 = 1; i2 <= n; ++i2) {
          if (hex::cell_index(n, i2, j2) <= hex::cell_index(n, i1, j1) || !hex::adjacent(i1, j1, i2, j2)) continue;
          for (int t = 0; t < granularity; ++t)
            for (int u = 0; u < granularity; ++u) edges.emplace_back(vertex(i1, j1, t), vertex(i2, j2, u));
        }
  std::vector<Cluster> clusters;
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i)
      clusters.push_back({{hex::cell_index(n, i, j), hex::cell_index(n, i + 1, j), hex::cell_index(n, i, j + 1),
                           hex::cell_index(n, i + 1, j + 1)},
                          std::nullopt});
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) {
      const std::size_t parent = hex::quad_index(n, i, j);
      clusters.push_back(
          {{hex::cell_index(n, i, j), hex::cell_index(n, i + 1, j), hex::cell_index(n, i, j + 1)}, parent});
      clusters.push_back(
          {{hex::cell_index(n, i + 1, j), hex::cell_index(n, i + 1, j + 1), hex::cell_index(n, i, j + 1)}, parent});
    }
  return Geometry(std::move(vertices), std::move(edges), std::move(cells), std::move(clusters),
                  Layout{LayoutKind::hexgrid, n, granularity});
}

}  // namespace qmm
