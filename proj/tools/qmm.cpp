// qmm: check, reconstruct and probe Markovian marginal sets.

#include <CLI11.hpp>

#include "qmm/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace qmm::cli;
  CLI::App app{"Certification and reconstruction of Markovian quantum marginals"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "write a seeded instance as a .mm file");
  g->add_option("--kind", gen.kind, "classical-chain | ghz | cluster-state-1d | sequential | product | inconsistent")->required();
  g->add_option("--layout", gen.layout, "chain | hexgrid")->capture_default_str();
  g->add_option("--n", gen.n, "vertices (chain) or cells per side (hexgrid)")->capture_default_str();
  g->add_option("--d", gen.d, "local dimension")->capture_default_str();
  g->add_option("--granularity", gen.granularity, "vertices per hexgrid cell")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--perturb", gen.perturb, "depolarizing strength on stored marginals")->capture_default_str();
  g->add_option("--out", gen.out, "marginal-set file");
  g->add_option("--state-out", gen.state_out, "global-state sidecar file");
  g->add_option("--report", gen.report, "text | json")->capture_default_str();

  CheckOptions chk;
  double chk_eps = 0.0;
  auto* c = app.add_subcommand("check", "measure consistency gaps, CMIs and epsilon");
  c->add_option("file", chk.file)->required();
  auto* eps_opt = c->add_option("--eps", chk_eps, "exit 1 when epsilon exceeds this");
  c->add_option("--log-base", chk.log_base, "e | 2 | number")->capture_default_str();
  c->add_option("--report", chk.report, "text | json")->capture_default_str();

  ReconstructOptions rec;
  auto* r = app.add_subcommand("reconstruct", "build the proposed global state and its delta report");
  r->add_option("file", rec.file)->required();
  r->add_option("--map", rec.map, "petz | rotated:<t> | averaged:<K>,<T>")->capture_default_str();
  r->add_option("--cutoff", rec.cutoff, "relative spectral cutoff")->capture_default_str();
  r->add_option("--string", rec.string, "custom string, e.g. \"[1]^R [2]^L\"");
  r->add_option("--out-report", rec.out_report);
  r->add_option("--out-state", rec.out_state);
  r->add_option("--log-base", rec.log_base)->capture_default_str();
  r->add_option("--report", rec.report, "text | json")->capture_default_str();

  LemmasOptions lem;
  auto* l = app.add_subcommand("lemmas", "measure the derived string relations");
  l->add_option("file", lem.file)->required();
  l->add_option("--suite", lem.suite, "1d | 2d")->capture_default_str();
  l->add_option("--map", lem.map)->capture_default_str();
  l->add_option("--cutoff", lem.cutoff)->capture_default_str();
  l->add_option("--out-report", lem.out_report);
  l->add_option("--report", lem.report, "text | json")->capture_default_str();

  RecoveryCheckOptions rc;
  auto* v = app.add_subcommand("recovery-check", "certify recovery maps on random tripartite states");
  v->add_option("--dims", rc.dims, "dA,dB,dC")->capture_default_str();
  v->add_option("--trials", rc.trials)->capture_default_str();
  v->add_option("--map", rc.map)->capture_default_str();
  v->add_option("--cutoff", rc.cutoff)->capture_default_str();
  v->add_option("--seed", rc.seed)->capture_default_str();
  v->add_option("--report", rc.report, "text | json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  if (*g) return run_generate(gen, std::cout, std::cerr);
  if (*c) {
    if (*eps_opt) chk.eps = chk_eps;
    return run_check(chk, std::cout, std::cerr);
  }
  if (*r) return run_reconstruct(rec, std::cout, std::cerr);
  if (*l) return run_lemmas(lem, std::cout, std::cerr);
  return run_recovery_check(rc, std::cout, std::cerr);
}
