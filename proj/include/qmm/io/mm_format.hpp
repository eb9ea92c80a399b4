#pragma once

// `.mm` marginal-set files: a JSON manifest holding the geometry and one
// binary64 payload per stored cluster. Serialization is canonical (sorted
// keys, fixed indentation), so parse → serialize reproduces a canonical file
// byte for byte.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmm/io/encoding.hpp"
#include "qmm/marginal_set.hpp"

namespace qmm::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Canonical text of a JSON document.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline LayoutKind parse_layout_kind(std::string_view s) {
  for (auto k : {LayoutKind::chain, LayoutKind::hexgrid, LayoutKind::custom})
    if (s == to_string(k)) return k;
  throw FormatError(fmt::format("unknown layout '{}'", s));
}

inline json geometry_to_json(const Geometry& g) {
  json j;
  j["layout"] = {{"kind", std::string(to_string(g.layout().kind))},
                 {"n", g.layout().n},
                 {"granularity", g.layout().granularity}};
  j["vertices"] = json::array();
  for (const Vertex& v : g.vertices()) j["vertices"].push_back({{"id", to_int(v.id)}, {"dim", v.dim}});
  j["edges"] = json::array();
  for (const auto& [a, b] : g.edges()) j["edges"].push_back({to_int(a), to_int(b)});
  j["cells"] = json::array();
  for (const Cell& c : g.cells()) {
    json sites = json::array();
    for (SiteId s : c.sites) sites.push_back(to_int(s));
    j["cells"].push_back({{"label", c.label}, {"sites", sites}});
  }
  j["clusters"] = json::array();
  for (const Cluster& cl : g.clusters()) {
    json cells = json::array();
    for (std::size_t c : cl.cells) cells.push_back(g.cells()[c].label);
    j["clusters"].push_back({{"cells", cells}, {"parent", cl.parent ? json(*cl.parent) : json(nullptr)}});
  }
  return j;
}

inline Geometry geometry_from_json(const json& j) {
  std::vector<Vertex> vertices;
  for (const json& v : j.at("vertices")) vertices.push_back({SiteId{v.at("id").get<int>()}, v.at("dim").get<int>()});
  std::vector<std::pair<SiteId, SiteId>> edges;
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair of vertex ids");
    edges.emplace_back(SiteId{e[0].get<int>()}, SiteId{e[1].get<int>()});
  }
  std::vector<Cell> cells;
  std::map<std::string, std::size_t> index;
  for (const json& c : j.at("cells")) {
    std::vector<SiteId> sites;
    for (const json& s : c.at("sites")) sites.push_back(SiteId{s.get<int>()});
    const auto label = c.at("label").get<std::string>();
    index.emplace(label, cells.size());
    cells.push_back({label, SiteSet(std::move(sites))});
  }
  std::vector<Cluster> clusters;
  for (const json& cl : j.at("clusters")) {
    Cluster c;
    for (const json& label : cl.at("cells")) {
      auto it = index.find(label.get<std::string>());
      if (it == index.end()) throw LayoutError(fmt::format("cluster names unknown cell '{}'", label.get<std::string>()));
      c.cells.push_back(it->second);
    }
    if (cl.contains("parent") && !cl.at("parent").is_null()) c.parent = cl.at("parent").get<std::size_t>();
    clusters.push_back(std::move(c));
  }
  const json& lay = j.at("layout");
  const Layout layout{parse_layout_kind(lay.at("kind").get<std::string>()), lay.at("n").get<int>(),
                      lay.at("granularity").get<int>()};
  return Geometry(std::move(vertices), std::move(edges), std::move(cells), std::move(clusters), layout);
}

struct MarginalSetFile {
  MarginalSet ms;
  json meta = json::object();  // free-form provenance (generator flags, measured ε)
};

inline json to_json(const MarginalSetFile& f) {
  const Geometry& g = f.ms.geometry();
  json j;
  j["format"] = kFormatVersion;
  j["kind"] = "marginal-set";
  j["geometry"] = geometry_to_json(g);
  j["marginals"] = json::array();
  const auto stored = g.stored_clusters();
  for (std::size_t k = 0; k < stored.size(); ++k) {
    const LocalState& s = f.ms.entries()[k];
    j["marginals"].push_back({{"cluster", stored[k]},
                              {"dim", s.dim()},
                              {"encoding", std::string(kMatrixEncoding)},
                              {"payload", encode_matrix(s.matrix())}});
  }
  j["meta"] = f.meta;
  return j;
}

inline std::string serialize(const MarginalSetFile& f) { return dump(to_json(f)); }

inline void require_header(const json& j, std::string_view kind) {
  if (!j.is_object()) throw FormatError("top level must be a JSON object");
  if (j.value("format", 0) != kFormatVersion)
    throw FormatError(fmt::format("unsupported format version (expected {})", kFormatVersion));
  if (j.value("kind", std::string{}) != kind) throw FormatError(fmt::format("expected a '{}' document", kind));
}

/// FormatError for anything unreadable; the state and geometry errors
/// (InvalidStateError, LayoutError, ...) for well-formed files whose content
/// breaks an invariant.
inline MarginalSetFile parse_marginal_set(const std::string& text) {
  try {
    const json j = json::parse(text);
    require_header(j, "marginal-set");
    Geometry g = geometry_from_json(j.at("geometry"));
    std::map<std::size_t, LocalState> by_cluster;
    for (const json& m : j.at("marginals")) {
      if (m.at("encoding").get<std::string>() != kMatrixEncoding)
        throw FormatError(fmt::format("unsupported encoding '{}'", m.at("encoding").get<std::string>()));
      const auto k = m.at("cluster").get<std::size_t>();
      if (k >= g.clusters().size() || !g.is_stored(k))
        throw LayoutError(fmt::format("marginal given for cluster {}, which is not a stored cluster", k));
      const SiteSet sites = g.cluster_sites(k);
      const auto dims = g.dims_of(sites);
      Index expect = 1;
      for (int d : dims) expect *= d;
      const auto dim = m.at("dim").get<Index>();
      if (dim != expect) throw LayoutError(fmt::format("cluster {}: dim {} but the sites give {}", k, dim, expect));
      Matrix mat = decode_matrix(m.at("payload").get<std::string>(), dim);
      if (!by_cluster.emplace(k, LocalState::checked(sites.ids(), dims, std::move(mat))).second)
        throw LayoutError(fmt::format("duplicate marginal for cluster {}", k));
    }
    std::vector<LocalState> entries;
    for (std::size_t k : g.stored_clusters()) {
      auto it = by_cluster.find(k);
      if (it == by_cluster.end()) throw LayoutError(fmt::format("missing marginal for cluster {}", k));
      entries.push_back(std::move(it->second));
    }
    MarginalSetFile f{MarginalSet(std::move(g), std::move(entries)), json::object()};
    if (j.contains("meta")) f.meta = j.at("meta");
    return f;
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("malformed marginal-set file: {}", e.what()));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw Error(fmt::format("write to '{}' failed", path));
}

inline MarginalSetFile load_marginal_set(const std::string& path) { return parse_marginal_set(read_file(path)); }

// Global-state sidecar: one LocalState in canonical site order.

inline std::string serialize_state(const LocalState& s) {
  const LocalState c = canonical(s);
  json j;
  j["format"] = kFormatVersion;
  j["kind"] = "state";
  json sites = json::array();
  for (SiteId id : c.sites()) sites.push_back(to_int(id));
  j["sites"] = sites;
  j["dims"] = c.dims();
  j["dim"] = c.dim();
  j["encoding"] = std::string(kMatrixEncoding);
  j["payload"] = encode_matrix(c.matrix());
  return dump(j);
}

inline LocalState parse_state(const std::string& text) {
  try {
    const json j = json::parse(text);
    require_header(j, "state");
    if (j.at("encoding").get<std::string>() != kMatrixEncoding) throw FormatError("unsupported encoding");
    std::vector<SiteId> sites;
    for (const json& s : j.at("sites")) sites.push_back(SiteId{s.get<int>()});
    const auto dims = j.at("dims").get<std::vector<int>>();
    Matrix m = decode_matrix(j.at("payload").get<std::string>(), j.at("dim").get<Index>());
    return LocalState::checked(std::move(sites), dims, std::move(m));
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("malformed state file: {}", e.what()));
  }
}

}  // namespace qmm::io
