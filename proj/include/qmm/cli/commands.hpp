#pragma once

// Implementations of the `qmm` subcommands. Each returns the process exit
// code and writes human or JSON output to the given streams.
//
//   0  success
//   1  check: ε above --eps
//   2  unreadable input or bad flags
//   3  input breaks an invariant (invalid state, malformed string, ...)
//   4  unsupported request (layout, suite mismatch, oversized dimensions)

#include <iostream>

#include "qmm/generators.hpp"
#include "qmm/io/reports.hpp"

namespace qmm::cli {

enum Exit : int { kOk = 0, kAboveThreshold = 1, kBadInput = 2, kInvariant = 3, kUnsupported = 4 };

class UsageError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const LayoutError& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kUnsupported;
  }
}

enum class ReportStyle { text, json };

inline ReportStyle parse_style(std::string_view s) {
  if (s == "text") return ReportStyle::text;
  if (s == "json") return ReportStyle::json;
  throw UsageError(fmt::format("--report must be text or json (got '{}')", s));
}

inline double parse_log_base(std::string_view s) {
  if (s == "e" || s == "nats") return std::exp(1.0);
  if (s == "2" || s == "bits") return 2.0;
  try {
    std::size_t used = 0;
    const double b = std::stod(std::string(s), &used);
    if (used == s.size() && b > 1.0) return b;
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("--log-base must be e, 2 or a number > 1 (got '{}')", s));
}

inline RecoveryConfig parse_map(std::string_view s, double cutoff) {
  RecoveryConfig cfg;
  try {
    cfg = RecoveryConfig::parse(s);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  cfg.cutoff = cutoff;
  return cfg;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string kind = "ghz";
  std::string layout = "chain";
  int n = 8;
  int d = 2;
  int granularity = 1;
  std::uint64_t seed = 0;
  double perturb = 0.0;
  std::string out;
  std::string state_out;
  std::string report = "text";
};

inline int run_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // `inconsistent` is the negative control: a fixed chain (n = 8, d = 2) with
    // one cluster replaced, so it takes only --seed.
    const bool negative = o.kind == "inconsistent";
    InstanceSpec spec;
    if (!negative) spec.kind = parse_instance_kind(o.kind);
    if (o.layout == "chain")
      spec.layout = LayoutKind::chain;
    else if (o.layout == "hexgrid")
      spec.layout = LayoutKind::hexgrid;
    else
      throw UsageError(fmt::format("--layout must be chain or hexgrid (got '{}')", o.layout));
    spec.n = o.n;
    spec.d = o.d;
    spec.granularity = o.granularity;
    spec.seed = o.seed;
    spec.p = o.perturb;
    if (!(spec.p >= 0.0 && spec.p < 1.0)) throw UsageError("--perturb must lie in [0,1)");
    if (spec.d < 1 || spec.n < 1 || spec.granularity < 1) throw UsageError("--n, --d and --granularity must be positive");
    const ReportStyle style = parse_style(o.report);

    if (negative && (spec.layout != LayoutKind::chain || spec.n != 8 || spec.d != 2 || spec.p != 0.0))
      throw UsageError("--kind inconsistent is fixed to a chain with --n 8 --d 2 and no --perturb");
    if (!negative) {
      spec.validate();
      const Geometry g = instance_geometry(spec);
      double total = 1.0;
      for (const Vertex& v : g.vertices()) total *= v.dim;
      if (total > static_cast<double>(kMaxGlobalDim))
        throw UnsupportedError(fmt::format("global dimension {} exceeds the dense limit {}", total, kMaxGlobalDim));
    }
    const std::string kind_name = negative ? "inconsistent" : std::string(to_string(spec.kind));

    Instance inst = negative ? Instance{std::nullopt, gen_inconsistent(spec.seed)} : gen(spec);
    const MarkovReport rep = check(inst.ms);
    io::MarginalSetFile file{inst.ms, io::json::object()};
    file.meta = {{"generator",
                  {{"kind", kind_name},
                   {"layout", o.layout},
                   {"n", spec.n},
                   {"d", spec.d},
                   {"granularity", spec.granularity},
                   {"seed", spec.seed},
                   {"perturb", spec.p}}}};
    if (!o.out.empty()) io::write_file(o.out, io::serialize(file));
    if (!o.state_out.empty() && inst.global) io::write_file(o.state_out, io::serialize_state(*inst.global));

    const auto stored = inst.ms.geometry().stored_clusters();
    if (style == ReportStyle::json) {
      io::json j = {{"format", io::kFormatVersion},
                    {"kind", "generate-report"},
                    {"clusters", stored.size()},
                    {"epsilon", rep.epsilon},
                    {"out", o.out}};
      out << io::dump(j);
    } else {
      out << fmt::format("generated {} ({} layout): {} stored clusters, epsilon = {:.6e}\n", kind_name,
                         o.layout, stored.size(), rep.epsilon);
      if (!o.out.empty()) out << "wrote " << o.out << "\n";
    }
    return int{kOk};
  });
}

// ---------------------------------------------------------------- check

struct CheckOptions {
  std::string file;
  std::optional<double> eps;
  std::string log_base = "e";
  std::string report = "text";
};

inline int run_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ReportStyle style = parse_style(o.report);
    const double base = parse_log_base(o.log_base);
    const io::MarginalSetFile f = io::load_marginal_set(o.file);
    const MarkovReport rep = check(f.ms, base);
    const bool pass = !o.eps || rep.epsilon <= *o.eps;
    if (style == ReportStyle::json) {
      io::json j = io::to_json(rep, f.ms.geometry());
      j["threshold"] = o.eps ? io::json(*o.eps) : io::json(nullptr);
      j["pass"] = pass;
      out << io::dump(j);
    } else {
      const Geometry& g = f.ms.geometry();
      for (const auto& gap : rep.consistency_gaps)
        out << fmt::format("gap    {} vs {} on {}: {:.6e}\n", g.cluster_label(gap.first), g.cluster_label(gap.second),
                           to_string(gap.overlap), gap.distance);
      for (const auto& c : rep.cmi_values)
        out << fmt::format("cmi    {} cell [{}]: I({}:{}|{}) = {:.6e}\n", g.cluster_label(c.condition.cluster),
                           g.cells()[c.condition.cell].label, to_string(c.condition.a), to_string(c.condition.c),
                           to_string(c.condition.b), c.value);
      out << fmt::format("epsilon {:.6e}", rep.epsilon);
      if (o.eps) out << fmt::format(" ({} {:.3e})", pass ? "<=" : ">", *o.eps);
      out << "\n";
    }
    return int{pass ? kOk : kAboveThreshold};
  });
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructOptions {
  std::string file;
  std::string map = "petz";
  double cutoff = kSpectralCutoff;
  std::string string;  // custom string; empty means the layout's own
  std::string out_report;
  std::string out_state;
  std::string log_base = "e";
  std::string report = "text";
};

inline int run_reconstruct(const ReconstructOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ReportStyle style = parse_style(o.report);
    const double base = parse_log_base(o.log_base);
    const RecoveryConfig cfg = parse_map(o.map, o.cutoff);
    const io::MarginalSetFile f = io::load_marginal_set(o.file);
    const Geometry& g = f.ms.geometry();
    std::optional<MarginalString> custom;
    if (!o.string.empty())
      custom = parse_string(o.string, g);
    else if (g.layout().kind == LayoutKind::custom)
      throw UnsupportedError("custom layouts need an explicit --string");
    const Reconstruction r = reconstruct(f.ms, cfg, custom, base);
    const io::json j = io::to_json(r.report);
    if (!o.out_report.empty()) io::write_file(o.out_report, io::dump(j));
    if (!o.out_state.empty()) io::write_file(o.out_state, io::serialize_state(r.global));
    if (style == ReportStyle::json) {
      out << io::dump(j);
    } else {
      for (const auto& [k, d] : r.report.per_cluster_distance)
        out << fmt::format("cluster {}: {:.6e}\n", g.cluster_label(k), d);
      out << fmt::format("delta {:.6e}  epsilon {:.6e}  ratio {}  (map {})\n", r.report.delta, r.report.epsilon,
                         r.report.ratio ? fmt::format("{:.4g}", *r.report.ratio) : std::string("n/a"), r.report.map);
    }
    return int{kOk};
  });
}

// ---------------------------------------------------------------- lemmas

struct LemmasOptions {
  std::string file;
  std::string suite = "1d";
  std::string map = "petz";
  double cutoff = kSpectralCutoff;
  std::string out_report;
  std::string report = "text";
};

inline int run_lemmas(const LemmasOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ReportStyle style = parse_style(o.report);
    Suite suite;
    if (o.suite == "1d")
      suite = Suite::oneD;
    else if (o.suite == "2d")
      suite = Suite::twoD;
    else
      throw UsageError(fmt::format("--suite must be 1d or 2d (got '{}')", o.suite));
    const RecoveryConfig cfg = parse_map(o.map, o.cutoff);
    const io::MarginalSetFile f = io::load_marginal_set(o.file);
    const LemmaReport rep = lemma_suite(f.ms, suite, cfg);
    const io::json j = io::to_json(rep);
    if (!o.out_report.empty()) io::write_file(o.out_report, io::dump(j));
    if (style == ReportStyle::json) {
      out << io::dump(j);
    } else {
      for (const auto& l : rep.lemmas)
        out << fmt::format("{:<32} {:>3} instances  max gap {:.6e}  gap/eps {}\n", l.id, l.instances, l.max_gap,
                           l.ratio ? fmt::format("{:.4g}", *l.ratio) : std::string("n/a"));
      out << fmt::format("epsilon {:.6e}\n", rep.epsilon);
    }
    return int{kOk};
  });
}

// ---------------------------------------------------------------- recovery-check

struct RecoveryCheckOptions {
  std::string dims = "2,2,2";
  int trials = 100;
  std::string map = "petz";
  double cutoff = kSpectralCutoff;
  std::uint64_t seed = 1;
  std::string report = "text";
};

struct RecoveryCheckResult {
  double choi_min_eigenvalue = std::numeric_limits<double>::infinity();
  double trace_deviation = 0.0;
  double defining_property = 0.0;  // max ‖Φ(ρ_B) − ρ_BC‖₁
  double ssa_min = std::numeric_limits<double>::infinity();
  double bound_margin = -std::numeric_limits<double>::infinity();  // max(−2 ln F − CMI)
  double classical_recovery = 0.0;  // max ‖ρ_ABC − Φ(ρ_AB)‖₁ on classical chains
  int trials = 0;
};

inline std::vector<int> parse_dims(std::string_view s) {
  std::vector<int> dims;
  std::string cur;
  auto flush = [&] {
    try {
      std::size_t used = 0;
      const int d = std::stoi(cur, &used);
      if (used != cur.size() || d < 1) throw UsageError("");
      dims.push_back(d);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("--dims must be three positive integers like 2,2,2 (got '{}')", s));
    }
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',')
      flush();
    else
      cur += ch;
  }
  flush();
  if (dims.size() != 3) throw UsageError(fmt::format("--dims needs exactly three entries (got '{}')", s));
  return dims;
}

/// Largest total dimension accepted by recovery-check (Choi tests are dense).
inline constexpr Index kRecoveryCheckMaxDim = 64;

/// Random classical chain on three sites with the given dimensions.
inline LocalState classical_triple(Rng& rng, const std::vector<int>& dims) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto stochastic = [&](int r, int c) {
    Eigen::MatrixXd t(r, c);
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < c; ++b) t(a, b) = unif(rng);
      t.row(a) /= t.row(a).sum();
    }
    return t;
  };
  RealVector pa(dims[0]);
  for (int a = 0; a < dims[0]; ++a) pa(a) = unif(rng);
  pa /= pa.sum();
  const Eigen::MatrixXd tab = stochastic(dims[0], dims[1]);
  const Eigen::MatrixXd tbc = stochastic(dims[1], dims[2]);
  RealVector p(dims[0] * dims[1] * dims[2]);
  for (int a = 0; a < dims[0]; ++a)
    for (int b = 0; b < dims[1]; ++b)
      for (int c = 0; c < dims[2]; ++c) p((a * dims[1] + b) * dims[2] + c) = pa(a) * tab(a, b) * tbc(b, c);
  return LocalState::unchecked({SiteId{1}, SiteId{2}, SiteId{3}}, dims, diagonal_state(p));
}

inline RecoveryCheckResult recovery_check(const std::vector<int>& dims, int trials, const RecoveryConfig& cfg,
                                          std::uint64_t seed) {
  RecoveryCheckResult res;
  res.trials = trials;
  Rng rng(seed);
  const SiteSet a{1}, b{2}, c{3};
  for (int t = 0; t < trials; ++t) {
    const LocalState rho = random_state(rng, a | b | c, dims);
    const LocalState rho_bc = reduce(rho, b | c);
    const RecoveryMap map(rho_bc, b, c, cfg);
    const CptpReport cp = map.certify();
    res.choi_min_eigenvalue = std::min(res.choi_min_eigenvalue, cp.choi_min_eigenvalue);
    res.trace_deviation = std::max(res.trace_deviation, cp.trace_deviation);
    res.defining_property = std::max(res.defining_property, trace_distance(map.apply(reduce(rho, b)), rho_bc));
    const FidelityGap fg = recovery_fidelity_gap(rho, a, b, c, cfg);
    res.ssa_min = std::min(res.ssa_min, fg.cmi);
    res.bound_margin = std::max(res.bound_margin, fg.bound_lhs - fg.cmi);

    const LocalState chain = classical_triple(rng, dims);
    const RecoveryMap cm(reduce(chain, b | c), b, c, cfg);
    res.classical_recovery = std::max(res.classical_recovery, trace_distance(cm.apply(reduce(chain, a | b)), chain));
  }
  return res;
}

inline int run_recovery_check(const RecoveryCheckOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ReportStyle style = parse_style(o.report);
    const std::vector<int> dims = parse_dims(o.dims);
    const Index total = Index{dims[0]} * dims[1] * dims[2];
    if (total > kRecoveryCheckMaxDim)
      throw UnsupportedError(fmt::format("total dimension {} exceeds {}", total, kRecoveryCheckMaxDim));
    if (o.trials < 1) throw UsageError("--trials must be positive");
    const RecoveryConfig cfg = parse_map(o.map, o.cutoff);
    const RecoveryCheckResult r = recovery_check(dims, o.trials, cfg, o.seed);
    if (style == ReportStyle::json) {
      io::json j = {{"format", io::kFormatVersion},
                    {"kind", "recovery-report"},
                    {"dims", dims},
                    {"map", cfg.to_string()},
                    {"trials", r.trials},
                    {"choi_min_eigenvalue", r.choi_min_eigenvalue},
                    {"trace_deviation", r.trace_deviation},
                    {"defining_property", r.defining_property},
                    {"ssa_min", r.ssa_min},
                    {"bound_margin", r.bound_margin},
                    {"classical_recovery", r.classical_recovery}};
      out << io::dump(j);
    } else {
      out << fmt::format("map {} dims {} trials {}\n", cfg.to_string(), o.dims, r.trials);
      out << fmt::format("choi min eigenvalue        {:+.3e}\n", r.choi_min_eigenvalue);
      out << fmt::format("trace-preservation defect  {:.3e}\n", r.trace_deviation);
      out << fmt::format("max |Phi(rho_B) - rho_BC|  {:.3e}\n", r.defining_property);
      out << fmt::format("min I(A:C|B)               {:+.3e}\n", r.ssa_min);
      out << fmt::format("max (-2 ln F - I(A:C|B))   {:+.3e}\n", r.bound_margin);
      out << fmt::format("classical-chain recovery   {:.3e}\n", r.classical_recovery);
    }
    return int{kOk};
  });
}

}  // namespace qmm::cli
