#pragma once

// Strings of polymorphic extensions and contractions. A string is read left
// to right starting from the scalar 1; Extend(a, A) grows the support by the
// cell a using a recovery map built from A's marginal, Contract(a) traces a out.

#include <functional>
#include <sstream>

#include "qmm/marginal_set.hpp"
#include "qmm/recovery.hpp"

namespace qmm {

struct Symbol {
  enum class Kind { extend, contract };
  Kind kind = Kind::contract;
  std::size_t cell = 0;
  std::size_t cluster = 0;  // meaningful for extend only

  static Symbol extend(std::size_t cell, std::size_t cluster) { return {Kind::extend, cell, cluster}; }
  static Symbol contract(std::size_t cell) { return {Kind::contract, cell, 0}; }

  [[nodiscard]] bool is_extend() const { return kind == Kind::extend; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class MarginalString {
 public:
  MarginalString() = default;
  MarginalString(std::initializer_list<Symbol> s) : symbols_(s) {}
  explicit MarginalString(std::vector<Symbol> s) : symbols_(std::move(s)) {}

  [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }
  [[nodiscard]] std::size_t size() const { return symbols_.size(); }
  [[nodiscard]] bool empty() const { return symbols_.empty(); }
  [[nodiscard]] const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  [[nodiscard]] auto begin() const { return symbols_.begin(); }
  [[nodiscard]] auto end() const { return symbols_.end(); }

  MarginalString& operator+=(const MarginalString& o) {
    symbols_.insert(symbols_.end(), o.symbols_.begin(), o.symbols_.end());
    return *this;
  }
  MarginalString& operator+=(const Symbol& s) {
    symbols_.push_back(s);
    return *this;
  }
  friend MarginalString operator+(MarginalString a, const MarginalString& b) { return a += b; }
  friend MarginalString operator+(MarginalString a, const Symbol& b) { return a += b; }
  friend bool operator==(const MarginalString&, const MarginalString&) = default;

  /// Same string with symbols i and i+1 exchanged.
  [[nodiscard]] MarginalString swapped(std::size_t i) const {
    MarginalString out = *this;
    std::swap(out.symbols_.at(i), out.symbols_.at(i + 1));
    return out;
  }

 private:
  std::vector<Symbol> symbols_;
};

struct WellFormedness {
  bool ok = true;
  std::size_t index = 0;  // 1-based position of the first failing symbol
  std::string reason;
  SiteSet support;        // support after the last accepted symbol
};

/// Support after applying `s` to `support`, or an error message.
inline std::optional<std::string> step_support(const Symbol& s, const Geometry& g, SiteSet& support) {
  if (s.cell >= g.cells().size()) return fmt::format("unknown cell index {}", s.cell);
  const SiteSet& a = g.cell_sites(s.cell);
  const std::string name = "[" + g.cells()[s.cell].label + "]";
  if (!s.is_extend()) {
    if (!support.includes(a)) return fmt::format("contract {}: cell not in support", name);
    support = support - a;
    return std::nullopt;
  }
  if (s.cluster >= g.clusters().size()) return fmt::format("extend {}: unknown cluster index {}", name, s.cluster);
  const auto& cells = g.clusters()[s.cluster].cells;
  if (!std::binary_search(cells.begin(), cells.end(), s.cell))
    return fmt::format("extend {}: cell not in cluster {}", name, g.cluster_label(s.cluster));
  if (!support.disjoint(a)) return fmt::format("extend {}: cell already in support", name);
  const SiteSet b = g.neighborhood(a) & support;
  if (!g.cluster_sites(s.cluster).includes(b))
    return fmt::format("extend {}: conditioning set {} leaves cluster {}", name, to_string(b),
                       g.cluster_label(s.cluster));
  support = support | a;
  return std::nullopt;
}

inline WellFormedness well_formed(const MarginalString& str, const Geometry& g, SiteSet start = {}) {
  WellFormedness wf;
  wf.support = std::move(start);
  for (std::size_t i = 0; i < str.size(); ++i) {
    SiteSet next = wf.support;
    if (auto err = step_support(str[i], g, next)) {
      wf.ok = false;
      wf.index = i + 1;
      wf.reason = *err;
      return wf;
    }
    wf.support = std::move(next);
  }
  return wf;
}

/// Applies one symbol to `x`.
inline LocalState apply_symbol(const Symbol& s, const LocalState& x, const MarginalSet& ms,
                               const RecoveryConfig& cfg) {
  const Geometry& g = ms.geometry();
  SiteSet support = x.support();
  if (auto err = step_support(s, g, support)) throw StringError(*err);
  const SiteSet& a = g.cell_sites(s.cell);
  if (!s.is_extend()) return reduce(x, x.support() - a);
  const SiteSet b = g.neighborhood(a) & x.support();
  const LocalState rho = reduce(ms.marginal(s.cluster), b | a);
  return RecoveryMap(rho, b, a, cfg).apply(x);
}

/// Evaluates `str[from..]` starting at `x`. `observe` sees the state after
/// each symbol (index is 0-based).
inline LocalState evaluate_from(LocalState x, const MarginalString& str, std::size_t from, const MarginalSet& ms,
                                const RecoveryConfig& cfg = {},
                                const std::function<void(std::size_t, const LocalState&)>& observe = {}) {
  for (std::size_t i = from; i < str.size(); ++i) {
    x = apply_symbol(str[i], x, ms, cfg);
    if (observe) observe(i, x);
  }
  return x;
}

inline LocalState evaluate(const MarginalString& str, const MarginalSet& ms, const RecoveryConfig& cfg = {}) {
  const WellFormedness wf = well_formed(str, ms.geometry());
  if (!wf.ok) throw StringError(fmt::format("malformed string at symbol {}: {}", wf.index, wf.reason));
  return evaluate_from(LocalState{}, str, 0, ms, cfg);
}

/// Sites an operation can touch. An extension of a reads at most 𝒩(a) and
/// writes a, so we take a ∪ 𝒩(a) regardless of the current support.
inline SiteSet acting_support(const Symbol& s, const Geometry& g) {
  const SiteSet& a = g.cell_sites(s.cell);
  return s.is_extend() ? (a | g.neighborhood(a)) : a;
}

/// Manifest commutation of x followed by y at `support`: both orders must be
/// applicable and the two acting supports disjoint. Two contractions always commute.
inline bool syntactic_commute(const Symbol& x, const Symbol& y, const Geometry& g, const SiteSet& support) {
  SiteSet xy = support;
  if (step_support(x, g, xy) || step_support(y, g, xy))
    throw StringError("syntactic_commute: symbols not applicable at the given support");
  SiteSet yx = support;
  if (step_support(y, g, yx) || step_support(x, g, yx)) return false;
  if (!x.is_extend() && !y.is_extend()) return true;
  return acting_support(x, g).disjoint(acting_support(y, g));
}

inline double relation_gap(const MarginalString& lhs, const MarginalString& rhs, const MarginalSet& ms,
                           const RecoveryConfig& cfg = {}) {
  const LocalState l = evaluate(lhs, ms, cfg);
  const LocalState r = evaluate(rhs, ms, cfg);
  if (l.support() != r.support())
    throw SupportError(fmt::format("relation_gap: supports differ ({} vs {})", to_string(l.support()),
                                   to_string(r.support())));
  if (l.is_scalar()) return 0.0;
  return trace_distance(l, r);
}

// ---------------------------------------------------------------------------
// Named symbols for the two lattice layouts.

namespace chain {

/// Cell [i] (1-based).
inline std::size_t cell(const Geometry& g, int i) {
  const auto c = g.find_cell(std::to_string(i));
  if (!c) throw StringError(fmt::format("no cell [{}]", i));
  return *c;
}

inline Symbol sym(const Geometry& g, int i, char side) {
  if (side == '-') return Symbol::contract(cell(g, i));
  const int lo = side == 'L' ? i - 1 : i;
  const auto lo_cell = g.find_cell(std::to_string(lo));
  const auto hi_cell = g.find_cell(std::to_string(lo + 1));
  const auto k = lo_cell && hi_cell ? g.find_cluster({*lo_cell, *hi_cell}) : std::nullopt;
  if (!k) throw StringError(fmt::format("[{}]^{} has no cluster", i, side));
  return Symbol::extend(cell(g, i), *k);
}

inline Symbol L(const Geometry& g, int i) { return sym(g, i, 'L'); }
inline Symbol R(const Geometry& g, int i) { return sym(g, i, 'R'); }
inline Symbol C(const Geometry& g, int i) { return sym(g, i, '-'); }

}  // namespace chain

namespace hex {

enum class Letter { UR, UL, DR, DL };

inline std::string_view to_string(Letter l) {
  switch (l) {
    case Letter::UR: return "UR";
    case Letter::UL: return "UL";
    case Letter::DR: return "DR";
    case Letter::DL: return "DL";
  }
  return "?";
}

inline std::size_t cell(const Geometry& g, int i, int j) {
  const auto c = g.find_cell(label(i, j));
  if (!c) throw StringError(fmt::format("no cell [{},{}]", i, j));
  return *c;
}

/// Cluster {[p,q],[p+1,q],[p,q+1],[p+1,q+1]} that the letter selects for [i,j].
inline std::pair<int, int> quad_corner(int i, int j, Letter l) {
  switch (l) {
    case Letter::UR: return {i, j};
    case Letter::UL: return {i - 1, j};
    case Letter::DR: return {i, j - 1};
    case Letter::DL: return {i - 1, j - 1};
  }
  return {i, j};
}

inline Symbol sym(const Geometry& g, int i, int j, Letter l) {
  const auto [p, q] = quad_corner(i, j, l);
  const int n = g.layout().n;
  if (p < 1 || q < 1 || p >= n || q >= n)
    throw StringError(fmt::format("[{},{}]^{} has no cluster", i, j, to_string(l)));
  const auto k = g.find_cluster({cell(g, p, q), cell(g, p + 1, q), cell(g, p, q + 1), cell(g, p + 1, q + 1)});
  if (!k) throw StringError(fmt::format("[{},{}]^{} has no cluster", i, j, to_string(l)));
  return Symbol::extend(cell(g, i, j), *k);
}

inline Symbol UR(const Geometry& g, int i, int j) { return sym(g, i, j, Letter::UR); }
inline Symbol UL(const Geometry& g, int i, int j) { return sym(g, i, j, Letter::UL); }
inline Symbol DR(const Geometry& g, int i, int j) { return sym(g, i, j, Letter::DR); }
inline Symbol DL(const Geometry& g, int i, int j) { return sym(g, i, j, Letter::DL); }
inline Symbol C(const Geometry& g, int i, int j) { return Symbol::contract(cell(g, i, j)); }

}  // namespace hex

// ---------------------------------------------------------------------------
// Text form. Generic tokens: `c:<cell>` and `e:<cell>@<cluster index>`.
// Sugar: `[i]^L`, `[i]^R`, `[i]^-1` on chains and `[i,j]^UR|UL|DR|DL|-1` on
// hex grids.

inline Symbol parse_symbol(std::string_view tok, const Geometry& g) {
  auto fail = [&](std::string_view why) { return StringError(fmt::format("bad symbol '{}': {}", tok, why)); };
  auto find = [&](std::string_view label) {
    const auto c = g.find_cell(label);
    if (!c) throw fail("unknown cell");
    return *c;
  };
  if (tok.starts_with("c:")) return Symbol::contract(find(tok.substr(2)));
  if (tok.starts_with("e:")) {
    const auto at = tok.find('@');
    if (at == std::string_view::npos) throw fail("missing @cluster");
    const std::string idx(tok.substr(at + 1));
    std::size_t used = 0;
    std::size_t k = 0;
    try {
      k = std::stoul(idx, &used);
    } catch (const std::exception&) {
      throw fail("cluster index is not a number");
    }
    if (used != idx.size() || k >= g.clusters().size()) throw fail("bad cluster index");
    return Symbol::extend(find(tok.substr(2, at - 2)), k);
  }
  if (tok.starts_with("[")) {
    const auto close = tok.find("]^");
    if (close == std::string_view::npos) throw fail("expected [cell]^X");
    const std::string_view label = tok.substr(1, close - 1);
    const std::string_view suffix = tok.substr(close + 2);
    const std::size_t c = find(label);
    if (suffix == "-1") return Symbol::contract(c);
    int a = 0;
    int b = 0;
    const std::string lab(label);
    if (g.layout().kind == LayoutKind::chain && suffix.size() == 1 && std::sscanf(lab.c_str(), "%d", &a) == 1) {
      if (suffix == "L" || suffix == "R") return chain::sym(g, a, suffix[0]);
    }
    if (g.layout().kind == LayoutKind::hexgrid && std::sscanf(lab.c_str(), "%d,%d", &a, &b) == 2) {
      for (auto l : {hex::Letter::UR, hex::Letter::UL, hex::Letter::DR, hex::Letter::DL})
        if (suffix == hex::to_string(l)) return hex::sym(g, a, b, l);
    }
    throw fail("unknown cluster letter for this layout");
  }
  throw fail("unrecognized token");
}

inline MarginalString parse_string(std::string_view text, const Geometry& g) {
  std::istringstream in{std::string(text)};
  std::vector<Symbol> out;
  for (std::string tok; in >> tok;) out.push_back(parse_symbol(tok, g));
  return MarginalString(std::move(out));
}

/// Sugar where the layout supports it, generic tokens otherwise.
inline std::string format_symbol(const Symbol& s, const Geometry& g) {
  const std::string& label = g.cells().at(s.cell).label;
  if (!s.is_extend()) return g.layout().kind == LayoutKind::custom ? "c:" + label : "[" + label + "]^-1";
  try {
    int a = 0;
    int b = 0;
    if (g.layout().kind == LayoutKind::chain && std::sscanf(label.c_str(), "%d", &a) == 1) {
      for (char side : {'L', 'R'})
        if (a - (side == 'L') >= 1 && a - (side == 'L') < g.layout().n / 2 && chain::sym(g, a, side) == s)
          return fmt::format("[{}]^{}", label, side);
    }
    if (g.layout().kind == LayoutKind::hexgrid && std::sscanf(label.c_str(), "%d,%d", &a, &b) == 2) {
      for (auto l : {hex::Letter::UR, hex::Letter::UL, hex::Letter::DR, hex::Letter::DL}) {
        const auto [p, q] = hex::quad_corner(a, b, l);
        if (p >= 1 && q >= 1 && p < g.layout().n && q < g.layout().n && hex::sym(g, a, b, l) == s)
          return fmt::format("[{}]^{}", label, hex::to_string(l));
      }
    }
  } catch (const StringError&) {
  }
  return fmt::format("e:{}@{}", label, s.cluster);
}

inline std::string format_string(const MarginalString& str, const Geometry& g) {
  std::vector<std::string> toks;
  for (const Symbol& s : str) toks.push_back(format_symbol(s, g));
  return fmt::format("{}", fmt::join(toks, " "));
}

}  // namespace qmm
