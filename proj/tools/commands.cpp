#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "convlab/json_io.hpp"
#include "convlab/pluripotential.hpp"
#include "convlab/rng.hpp"
#include "convlab/series.hpp"
#include "convlab/synthesis.hpp"
#include "convlab/weight.hpp"

namespace convlab::cli {

namespace {

namespace fs = std::filesystem;

std::string path_in(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"seed", cfg.seed},     {"region", cfg.region}, {"target", cfg.target},
          {"spec", cfg.spec},       {"probes", cfg.probes}, {"u", cfg.u},           {"at", cfg.at},
          {"k", cfg.k},             {"k_max", cfg.k_max},   {"horizon", cfg.horizon}, {"samples", cfg.samples}};
}

void finish(const RunConfig& cfg, Json report) {
  report["config"] = config_json(cfg);
  const std::string path = path_in(cfg, cfg.command + ".json");
  write_json_file(path, report);
  std::cout << "wrote " << path << '\n';
}

Region load_region(const RunConfig& cfg) {
  if (cfg.region.empty()) throw Error(cfg.command + ": --region is required");
  const Json j = read_json_file(cfg.region);
  try {
    return region_from_json(j);
  } catch (const Error& e) {
    throw Error(cfg.region + ": " + e.what());
  }
}

Point parse_point(const std::string& text) {
  if (text.empty()) throw Error("--at is required");
  Point x;
  std::stringstream ss(text);
  std::string coord;
  while (std::getline(ss, coord, ',')) {
    const auto colon = coord.find(':');
    try {
      if (colon == std::string::npos) x.emplace_back(std::stod(coord), 0.0);
      else x.emplace_back(std::stod(coord.substr(0, colon)), std::stod(coord.substr(colon + 1)));
    } catch (const std::exception&) {
      throw Error("--at: cannot parse coordinate '" + coord + "'");
    }
  }
  return x;
}

FeketeBudget fekete_budget(const RunConfig& cfg) {
  FeketeBudget b;
  b.pool = cfg.pool;
  b.sweeps = cfg.sweeps;
  b.seed = cfg.seed;
  b.window.radius = cfg.window;
  return b;
}

Json fekete_json(const FeketeConfig& f) {
  Json pts = Json::array();
  for (const auto& x : f.points) pts.push_back(to_json(x));
  Json hist = Json::array();
  for (double h : f.history) hist.push_back(number(h));
  return {{"k", f.k}, {"logV", number(f.logV)}, {"d_k", f.d_k}, {"points", pts}, {"history", hist}};
}

int cmd_fekete(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  const FeketeConfig f = fekete_search(E, cfg.k, fekete_budget(cfg));
  std::string csv = "sweep,logV\n";
  for (std::size_t i = 0; i < f.history.size(); ++i) csv += std::to_string(i) + "," + fmt(f.history[i]) + "\n";
  write_text(path_in(cfg, "fekete_history.csv"), csv);
  finish(cfg, fekete_json(f));
  std::cout << "k = " << f.k << "  logV = " << f.logV << "  d_k = " << f.d_k << '\n';
  return 0;
}

int cmd_tdiam(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  const TransfiniteDiameter t = transfinite_diameter(E, cfg.k_max, fekete_budget(cfg));
  std::string csv = "k,logV,d_k\n";
  Json configs = Json::array();
  for (const auto& c : t.configs) {
    csv += std::to_string(c.k) + "," + fmt(c.logV) + "," + fmt(c.d_k) + "\n";
    configs.push_back(fekete_json(c));
  }
  write_text(path_in(cfg, "tdiam.csv"), csv);
  finish(cfg, {{"d_k", t.d_k},
               {"d", t.d},
               {"uncertainty", t.uncertainty},
               {"pluripolar", t.pluripolar},
               {"note", t.note},
               {"configs", configs}});
  std::cout << "d ~ " << t.d << " +- " << t.uncertainty << (t.pluripolar ? "  (pluripolar)" : "") << '\n';
  return 0;
}

int cmd_capacity(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  const CapacityEstimate c = capacity(E, cfg.k_max, cfg.R, fekete_budget(cfg));
  std::string csv = "R,L_lower,L_upper\n";
  for (std::size_t i = 0; i < c.R_list.size(); ++i)
    csv += fmt(c.R_list[i]) + "," + fmt(c.L_R_lower[i]) + "," + fmt(c.L_R_upper[i]) + "\n";
  write_text(path_in(cfg, "capacity.csv"), csv);
  Json entries = Json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"k", e.k},
                       {"R", e.R},
                       {"L_lower", number(e.L_lower)},
                       {"L_upper", number(e.L_upper)},
                       {"witness", e.witness}});
  Json by_k = Json::array();
  for (double v : c.c_upper_by_k) by_k.push_back(number(v));
  Json j{{"c_lower", number(c.c_lower)}, {"c_upper", number(c.c_upper)}, {"c_upper_by_k", by_k},
         {"entries", entries},           {"note", c.note}};
  if (c.d_cross) j["d_cross"] = *c.d_cross;
  finish(cfg, j);
  std::cout << "c in [" << c.c_lower << ", " << c.c_upper << "]\n";
  return 0;
}

ExtremalBudget extremal_budget(const RunConfig& cfg) {
  ExtremalBudget b;
  b.sup.samples = cfg.samples;
  b.sup.seed = cfg.seed;
  b.sup.window.radius = cfg.window;
  b.fekete = fekete_budget(cfg);
  return b;
}

int cmd_extremal(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  const Point x = parse_point(cfg.at);
  const ExtremalEstimate e = extremal_lower(E, x, cfg.k_max, extremal_budget(cfg));
  Json by_k = Json::array();
  for (double v : e.by_k) by_k.push_back(number(v));
  Json j{{"value", number(e.value)}, {"method", e.method}, {"infinite", e.infinite}, {"by_k", by_k}};
  if (e.witness) j["witness"] = {{"poly", to_json(e.witness->poly())}, {"k", e.witness->weight()}};
  finish(cfg, j);
  std::cout << "Phi_E(x) >= " << e.value << (e.infinite ? " (unbounded)" : "") << '\n';
  return 0;
}

int cmd_ghull(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  const Point x = parse_point(cfg.at);
  const HullResult h = ghull_member(E, x, cfg.phi_max, cfg.k_max, extremal_budget(cfg));
  Json by_k = Json::array();
  for (double v : h.by_k) by_k.push_back(number(v));
  finish(cfg, {{"verdict", to_string(h.verdict)}, {"by_k", by_k}, {"reason", h.reason}});
  std::cout << to_string(h.verdict) << '\n';
  return 0;
}

int cmd_bernstein(const RunConfig& cfg) {
  const Region E = load_region(cfg);
  SupNormBudget sb;
  sb.samples = cfg.samples;
  sb.seed = cfg.seed;
  sb.window.radius = cfg.window;
  const BernsteinResult b = bernstein_constant(E, cfg.d_max, cfg.trials, sb);
  std::string csv = "d,ratio\n";
  Json per = Json::array();
  for (std::size_t i = 0; i < b.per_degree.size(); ++i) {
    csv += std::to_string(i + 1) + "," + fmt(b.per_degree[i]) + "\n";
    per.push_back(number(b.per_degree[i]));
  }
  write_text(path_in(cfg, "bernstein.csv"), csv);
  finish(cfg, {{"value", number(b.value)}, {"infinite", b.infinite}, {"per_degree", per}, {"note", b.note}});
  std::cout << "B(E) >= " << b.value << '\n';
  return 0;
}

int cmd_saddulaev(const RunConfig& cfg) {
  if (cfg.u.empty()) throw Error("saddulaev: --u is required");
  const WeightFunction u = weight_from_json(read_json_file(cfg.u));
  const SaddulaevTransform v(u, cfg.j_max);
  const int n = u.dimension();
  CounterRng rng(cfg.seed, 0x5add);
  std::vector<Point> off, on;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Point x = rng.ball(n, cfg.window);
    if (std::isinf(u(x))) on.push_back(x);
    else off.push_back(std::move(x));
  }
  if (!cfg.region.empty())
    for (Point& x : sample(load_region(cfg), std::max<std::size_t>(1, cfg.samples / 10), {cfg.window}, cfg.seed))
      on.push_back(std::move(x));
  const SaddulaevReport rep = saddulaev_report(v, on, off);
  std::string csv = "x_re,x_im,on_E,v,log_plus,tail_lower,monotone_from,bound_ok,monotone_ok,floor_ok\n";
  for (const auto& r : rep.rows)
    csv += fmt(r.x[0].real()) + "," + fmt(r.x[0].imag()) + "," + (r.on_E ? "1" : "0") + "," + fmt(r.v) + "," +
           fmt(r.log_plus) + "," + fmt(r.tail_lower) + "," + std::to_string(r.monotone_from) + "," +
           (r.bound_ok ? "1" : "0") + "," + (r.monotone_ok ? "1" : "0") + "," + (r.floor_ok ? "1" : "0") + "\n";
  write_text(path_in(cfg, "saddulaev.csv"), csv);
  finish(cfg, {{"u", to_json(u)}, {"M", v.M()}, {"rows", rep.rows.size()}, {"all_ok", rep.all_ok}});
  std::cout << (rep.all_ok ? "all checks hold" : "some checks failed") << " on " << rep.rows.size() << " points\n";
  return rep.all_ok ? 0 : 2;
}

void write_margins(const RunConfig& cfg, const SynthesisReport& r) {
  std::string csv = "probe,on_target,distance,verdict,slope,margin,level,escapes,consistent\n";
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    const auto& p = r.verdicts[i];
    csv += std::to_string(i) + "," + (p.on_target ? "1" : "0") + "," + fmt(p.distance) + "," +
           to_string(p.verdict.kind) + "," + fmt(p.verdict.slope) + "," + fmt(p.verdict.margin) + "," +
           std::to_string(p.level) + "," + (p.escapes ? "1" : "0") + "," + (p.consistent ? "1" : "0") + "\n";
  }
  write_text(path_in(cfg, cfg.command + "_margins.csv"), csv);
}

int report_status(const SynthesisReport& r) {
  std::cout << r.verdicts.size() << " probes, " << r.inconsistent() << " inconsistent, " << r.indeterminate()
            << " indeterminate\n";
  return r.ok() ? 0 : 2;
}

TargetSet load_target(const RunConfig& cfg) {
  if (cfg.target.empty()) throw Error(cfg.command + ": --target is required");
  const Json j = read_json_file(cfg.target);
  try {
    return target_from_json(j);
  } catch (const Error& e) {
    throw Error(cfg.target + ": " + e.what());
  }
}

int cmd_synthesize(const RunConfig& cfg) {
  const TargetSet t = load_target(cfg);
  SynthesisReport r;
  if (cfg.mode == "variety") {
    if (t.components.size() != 1) throw Error("synthesize: variety mode takes one component");
    r = synth_variety(t.components[0], cfg.horizon);
  } else if (cfg.mode == "enumeration") {
    EnumerationConfig ec;
    ec.height = cfg.height;
    ec.window = cfg.window;
    r = synth_enumeration(t, ec);
  } else if (cfg.mode == "block" || cfg.mode == "projective") {
    BlockConfig bc;
    bc.m_max = cfg.m_max;
    bc.window = cfg.window;
    bc.epsilon = cfg.eps;
    bc.seed = cfg.seed;
    r = cfg.mode == "block" ? synth_block(t, bc) : synth_projective(t, bc);
  } else {
    throw Error("synthesize: unknown mode '" + cfg.mode + "'");
  }
  Json spec = to_json(r.spec);
  spec["verify"] = {{"horizon", r.horizon}, {"classifier", to_json(r.classifier)}};
  write_json_file(cfg.out.empty() ? path_in(cfg, "spec.json") : cfg.out, spec);
  std::vector<Probe> probes;
  for (const auto& p : r.verdicts) probes.push_back({p.x, p.on_target});
  write_json_file(path_in(cfg, "probes.json"), to_json(probes));
  write_margins(cfg, r);
  finish(cfg, to_json(r));
  return report_status(r);
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.spec.empty()) throw Error("verify: --spec is required");
  const Json sj = read_json_file(cfg.spec);
  const SeriesSpec spec = series_from_json(sj);
  const TargetSet t = load_target(cfg);
  long horizon = cfg.horizon;
  ClassifierConfig cc = spec.space == Space::Affine && t.components.size() == 1 && t.components[0].degree() > 0
                            ? variety_classifier(t.components[0].degree())
                            : ClassifierConfig{};
  if (sj.contains("verify")) {
    horizon = sj["verify"].value("horizon", horizon);
    if (sj["verify"].contains("classifier")) cc = classifier_from_json(sj["verify"]["classifier"]);
  }
  std::vector<Probe> probes;
  if (!cfg.probes.empty()) {
    probes = probes_from_json(read_json_file(cfg.probes));
    for (Probe& p : probes) p.on_target = t.contains(p.x);
  } else {
    ProbePlan plan;
    plan.seed = cfg.seed;
    plan.window = cfg.window;
    plan.min_distance = cfg.eps;
    probes = make_probes(t, plan);
  }
  const SynthesisReport r = verify(spec, t, probes, horizon, cc);
  write_margins(cfg, r);
  finish(cfg, to_json(r));
  return report_status(r);
}

struct LoadedSpec {
  SeriesSpec spec;
  ClassifierConfig classifier;
};

LoadedSpec load_spec(const RunConfig& cfg) {
  if (cfg.spec.empty()) throw Error(cfg.command + ": --spec is required");
  const Json j = read_json_file(cfg.spec);
  try {
    LoadedSpec out{series_from_json(j), {}};
    if (j.contains("verify") && j["verify"].contains("classifier"))
      out.classifier = classifier_from_json(j["verify"]["classifier"]);
    return out;
  } catch (const Error& e) {
    throw Error(cfg.spec + ": " + e.what());
  }
}

int cmd_conv_test(const RunConfig& cfg) {
  const auto [spec, cc] = load_spec(cfg);
  const Point x = parse_point(cfg.at);
  const CoefficientStream s =
      spec.space == Space::Affine ? restrict_affine(spec, x, cfg.horizon) : restrict_projective(spec, x, cfg.horizon);
  std::ostringstream csv;
  write_stream_csv(csv, s);
  write_text(path_in(cfg, "stream.csv"), csv.str());
  const ConvergenceVerdict v = classify(s, cc);
  finish(cfg, {{"at", to_json(x)}, {"result", to_json(v)}});
  std::cout << to_string(v.kind) << "  slope " << v.slope << "  margin " << v.margin << '\n';
  return v.kind == Verdict::Indeterminate ? 2 : 0;
}

int cmd_hartogs(const RunConfig& cfg) {
  const SeriesSpec spec = load_spec(cfg).spec;
  const ConvergenceVerdict v = hartogs_joint_check(spec, cfg.horizon);
  finish(cfg, {{"result", to_json(v)}});
  std::cout << to_string(v.kind) << "  slope " << v.slope << '\n';
  return v.kind == Verdict::Indeterminate ? 2 : 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "fekete") return cmd_fekete(cfg);
  if (c == "tdiam") return cmd_tdiam(cfg);
  if (c == "capacity") return cmd_capacity(cfg);
  if (c == "extremal") return cmd_extremal(cfg);
  if (c == "ghull") return cmd_ghull(cfg);
  if (c == "bernstein") return cmd_bernstein(cfg);
  if (c == "saddulaev") return cmd_saddulaev(cfg);
  if (c == "synthesize") return cmd_synthesize(cfg);
  if (c == "verify") return cmd_verify(cfg);
  if (c == "conv-test") return cmd_conv_test(cfg);
  if (c == "hartogs") return cmd_hartogs(cfg);
  throw Error("unknown command '" + c + "'");
}

}  // namespace convlab::cli
