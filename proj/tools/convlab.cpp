#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "convlab/polynomial.hpp"

int main(int argc, char** argv) {
  using convlab::cli::RunConfig;
  CLI::App app{"convlab: pluripotential estimates and convergence sets of formal power series"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out-dir", cfg.out_dir, "directory for reports and tables");
  };
  auto region = [&](CLI::App* sub, bool required = true) {
    auto* o = sub->add_option("--region", cfg.region, "region JSON file");
    if (required) o->required();
    sub->add_option("--window", cfg.window, "sampling window radius");
  };
  auto fekete_opts = [&](CLI::App* sub) {
    sub->add_option("--pool", cfg.pool, "candidate pool size");
    sub->add_option("--sweeps", cfg.sweeps, "exchange sweeps");
  };

  auto* fekete = app.add_subcommand("fekete", "approximate Fekete points of order k");
  common(fekete), region(fekete), fekete_opts(fekete);
  fekete->add_option("--k", cfg.k, "degree k")->required();

  auto* tdiam = app.add_subcommand("tdiam", "transfinite diameter d_k, k <= kmax, and extrapolated d(E)");
  common(tdiam), region(tdiam), fekete_opts(tdiam);
  tdiam->add_option("--kmax", cfg.k_max, "largest k");

  auto* cap = app.add_subcommand("capacity", "capacity bracket from L_R(E) estimates");
  common(cap), region(cap), fekete_opts(cap);
  cap->add_option("--kmax", cfg.k_max, "largest degree");
  cap->add_option("--R", cfg.R, "radii")->delimiter(',');

  auto* ext = app.add_subcommand("extremal", "certified lower bound for the extremal function");
  common(ext), region(ext), fekete_opts(ext);
  ext->add_option("--at", cfg.at, "point, e.g. 1.5 or 1:0.5,0")->required();
  ext->add_option("--kmax", cfg.k_max, "largest degree");
  ext->add_option("--samples", cfg.samples, "sup-norm samples");

  auto* hull = app.add_subcommand("ghull", "G-hull membership test");
  common(hull), region(hull), fekete_opts(hull);
  hull->add_option("--at", cfg.at, "point")->required();
  hull->add_option("--kmax", cfg.k_max, "largest degree");
  hull->add_option("--phi-max", cfg.phi_max, "divergence threshold");
  hull->add_option("--samples", cfg.samples, "sup-norm samples");

  auto* bern = app.add_subcommand("bernstein", "Bernstein-type constant B(E)");
  common(bern), region(bern);
  bern->add_option("--dmax", cfg.d_max, "largest degree");
  bern->add_option("--trials", cfg.trials, "random polynomials per degree");
  bern->add_option("--samples", cfg.samples, "sup-norm samples");

  auto* sad = app.add_subcommand("saddulaev", "evaluate the glued function v on sample points");
  common(sad), region(sad, false);
  sad->add_option("--u", cfg.u, "weight function JSON")->required();
  sad->add_option("--jmax", cfg.j_max, "number of terms");
  sad->add_option("--samples", cfg.samples, "sample points");

  auto* syn = app.add_subcommand("synthesize", "build a series with a prescribed convergence set");
  common(syn);
  syn->add_option("--target", cfg.target, "target JSON file")->required();
  syn->add_option("--mode", cfg.mode, "variety|enumeration|block|projective")
      ->check(CLI::IsMember({"variety", "enumeration", "block", "projective"}));
  syn->add_option("--window", cfg.window, "certified window radius");
  syn->add_option("--eps", cfg.eps, "excluded neighborhood of the target");
  syn->add_option("--horizon", cfg.horizon, "truncation degree (variety mode)");
  syn->add_option("--height", cfg.height, "coefficient height bound (enumeration mode)");
  syn->add_option("--mmax", cfg.m_max, "number of blocks (block and projective modes)");
  syn->add_option("--out", cfg.out, "output spec file");

  auto* ver = app.add_subcommand("verify", "check a spec against a target on probes");
  common(ver);
  ver->add_option("--spec", cfg.spec, "spec JSON file")->required();
  ver->add_option("--target", cfg.target, "target JSON file")->required();
  ver->add_option("--probes", cfg.probes, "probe JSON file (default: seeded probes)");
  ver->add_option("--horizon", cfg.horizon, "horizon when the spec file does not carry one");
  ver->add_option("--window", cfg.window, "probe window");
  ver->add_option("--eps", cfg.eps, "minimum probe distance from the target");

  auto* conv = app.add_subcommand("conv-test", "classify the restriction of a series at a point");
  common(conv);
  conv->add_option("--spec", cfg.spec, "spec JSON file")->required();
  conv->add_option("--at", cfg.at, "point")->required();
  conv->add_option("--horizon", cfg.horizon, "truncation degree");

  auto* har = app.add_subcommand("hartogs", "root test of the joint series");
  common(har);
  har->add_option("--spec", cfg.spec, "spec JSON file")->required();
  har->add_option("--horizon", cfg.horizon, "truncation degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return convlab::cli::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "convlab " << cfg.command << ": " << e.what() << '\n';
    return 1;
  }
}
