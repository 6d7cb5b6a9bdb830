#include "convlab/json_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace convlab {

namespace {

const Json& field(const Json& j, const std::string& name) {
  if (!j.is_object()) throw Error("expected an object while reading field '" + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw Error("missing field '" + name + "'");
  return *it;
}

int int_field(const Json& j, const std::string& name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) throw Error("field '" + name + "': integer expected");
  return v.get<int>();
}

template <class T>
T value_or(const Json& j, const std::string& name, T fallback) {
  auto it = j.find(name);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error("field '" + name + "': wrong type");
  }
}

std::string rational_string(const Json& v, const std::string& name) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error("field '" + name + "': exact coefficient must be a string");
}

Space space_from(const Json& j) {
  const std::string s = value_or<std::string>(j, "space", "affine");
  if (s == "affine") return Space::Affine;
  if (s == "projective") return Space::Projective;
  throw Error("field 'space': expected affine or projective, got '" + s + "'");
}

std::string space_name(Space s) { return s == Space::Affine ? "affine" : "projective"; }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw Error(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

void write_json_file(const std::string& path, const Json& j) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const Json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("field '" + name + "': number expected");
}

// ------------------------------------------------------------------ points

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Point& x) {
  Json a = Json::array();
  for (const Complex& c : x) a.push_back(to_json(c));
  return a;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw Error("point: array expected");
  Point x;
  for (const Json& c : j) {
    if (c.is_number()) x.emplace_back(c.get<double>(), 0.0);
    else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
      x.emplace_back(c[0].get<double>(), c[1].get<double>());
    else throw Error("point: coordinates are numbers or [re, im] pairs");
  }
  if (x.empty()) throw Error("point: empty");
  return x;
}

// ------------------------------------------------------------- polynomials

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [a, c] : p.terms()) terms.push_back({{"alpha", a}, {"re", c.real()}, {"im", c.imag()}});
  return {{"n", p.dimension()}, {"terms", terms}};
}

bool is_exact_polynomial(const Json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) return false;
  for (const Json& t : j["terms"])
    if (t.contains("re") && t["re"].is_string()) return true;
  return false;
}

namespace {

Exponent alpha_from(const Json& t, int n) {
  const Json& a = field(t, "alpha");
  if (!a.is_array() || static_cast<int>(a.size()) != n) throw Error("field 'alpha': expected " + std::to_string(n) + " integers");
  Exponent alpha;
  for (const Json& e : a) {
    if (!e.is_number_integer() || e.get<int>() < 0) throw Error("field 'alpha': nonnegative integers expected");
    alpha.push_back(e.get<int>());
  }
  return alpha;
}

}  // namespace

Polynomial polynomial_from_json(const Json& j) {
  if (is_exact_polynomial(j)) return rational_polynomial_from_json(j).to_polynomial();
  const int n = int_field(j, "n");
  if (n < 1) throw Error("field 'n': must be >= 1");
  Polynomial p(n);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw Error("field 'terms': array expected");
  for (const Json& t : terms) {
    const Exponent a = alpha_from(t, n);
    const double re = t.contains("re") ? number_from(t["re"], "re") : 0.0;
    const double im = t.contains("im") ? number_from(t["im"], "im") : 0.0;
    p.set_coefficient(a, p.coefficient(a) + Complex(re, im));
  }
  return p;
}

Json to_json(const RationalPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [a, c] : p.terms())
    terms.push_back({{"alpha", a}, {"re", format_rational(c.re)}, {"im", format_rational(c.im)}});
  return {{"n", p.dimension()}, {"terms", terms}};
}

RationalPolynomial rational_polynomial_from_json(const Json& j) {
  const int n = int_field(j, "n");
  if (n < 1) throw Error("field 'n': must be >= 1");
  RationalPolynomial p(n);
  const Json& terms = field(j, "terms");
  for (const Json& t : terms) {
    const Exponent a = alpha_from(t, n);
    ComplexRational c;
    if (t.contains("re")) c.re = parse_rational(rational_string(t["re"], "re"));
    if (t.contains("im")) c.im = parse_rational(rational_string(t["im"], "im"));
    p.set_coefficient(a, c);
  }
  return p;
}

// ----------------------------------------------------------------- regions

Json to_json(const Region& r) {
  Json j{{"kind", to_string(r.kind())}, {"space", space_name(r.space())}, {"n", r.dimension()}};
  switch (r.kind()) {
    case RegionKind::Variety: {
      Json eq = Json::array();
      for (const auto& p : r.equations()) eq.push_back(to_json(p));
      j["equations"] = eq;
      break;
    }
    case RegionKind::Finite: {
      Json pts = Json::array();
      for (const auto& x : r.points()) pts.push_back(to_json(x));
      j["points"] = pts;
      break;
    }
    case RegionKind::Ball:
    case RegionKind::Polydisk:
    case RegionKind::Sphere:
      j["center"] = to_json(r.center());
      j["radius"] = r.radius();
      break;
    case RegionKind::Segment:
      j["a"] = to_json(r.center());
      j["b"] = to_json(r.segment_end());
      break;
    case RegionKind::Union:
    case RegionKind::Intersection: {
      Json parts = Json::array();
      for (const auto& p : r.parts()) parts.push_back(to_json(p));
      j["parts"] = parts;
      break;
    }
    case RegionKind::Hyperplane: j["normal"] = to_json(r.normal()); break;
    case RegionKind::Cover: j["M"] = r.radius(); break;
  }
  return j;
}

Region region_from_json(const Json& j) {
  const RegionKind kind = region_kind_from_string(value_or<std::string>(j, "kind", ""));
  const Space space = space_from(j);
  auto points_of = [](const Json& a, const std::string& name) {
    if (!a.is_array()) throw Error("field '" + name + "': array expected");
    std::vector<Point> pts;
    for (const Json& x : a) pts.push_back(point_from_json(x));
    return pts;
  };
  switch (kind) {
    case RegionKind::Variety: {
      std::vector<Polynomial> eqs;
      for (const Json& p : field(j, "equations")) eqs.push_back(polynomial_from_json(p));
      return Region::variety(eqs, space);
    }
    case RegionKind::Finite: return Region::finite(points_of(field(j, "points"), "points"), space);
    case RegionKind::Ball:
      return Region::ball(point_from_json(field(j, "center")), number_from(field(j, "radius"), "radius"));
    case RegionKind::Polydisk:
      return Region::polydisk(point_from_json(field(j, "center")), number_from(field(j, "radius"), "radius"));
    case RegionKind::Sphere:
      return Region::sphere(point_from_json(field(j, "center")), number_from(field(j, "radius"), "radius"));
    case RegionKind::Segment: return Region::segment(point_from_json(field(j, "a")), point_from_json(field(j, "b")));
    case RegionKind::Union:
    case RegionKind::Intersection: {
      std::vector<Region> parts;
      for (const Json& p : field(j, "parts")) parts.push_back(region_from_json(p));
      return kind == RegionKind::Union ? Region::union_of(parts) : Region::intersection_of(parts);
    }
    case RegionKind::Hyperplane: return Region::hyperplane(point_from_json(field(j, "normal")));
    case RegionKind::Cover: return Region::cover(int_field(j, "n"), number_from(field(j, "M"), "M"));
  }
  throw Error("region: unknown kind");
}

// ------------------------------------------------------------------ series

namespace {

Json factor_json(const Factor& f) {
  Json j{{"base", f.exact ? to_json(*f.exact) : to_json(f.base)}, {"power", {{"a", f.a}, {"b", f.b}}}};
  return j;
}

Factor factor_from(const Json& j) {
  Factor f;
  const Json& base = field(j, "base");
  if (is_exact_polynomial(base)) {
    f.exact = rational_polynomial_from_json(base);
    f.base = f.exact->to_polynomial();
  } else {
    f.base = polynomial_from_json(base);
  }
  if (j.contains("power")) {
    f.a = value_or<int>(j["power"], "a", 1);
    f.b = value_or<int>(j["power"], "b", 0);
  }
  return f;
}

}  // namespace

Json to_json(const SeriesSpec& s) {
  Json rules = Json::array();
  for (const TermRule& r : s.rules) {
    Json j{{"kind", "power_schedule"},
           {"scale",
            {{"form", r.scale.form},
             {"c", r.scale.c},
             {"re", r.scale.value.real()},
             {"im", r.scale.value.imag()},
             {"m", r.scale.m},
             {"a", r.scale.a},
             {"b", r.scale.b}}},
           {"exponent", {{"form", "affine"}, {"a", r.exp_a}, {"b", r.exp_b}}},
           {"k", {{"start", r.k_start}, {"end", r.k_end}}}};
    if (!r.factors.empty()) {
      const Json f0 = factor_json(r.factors[0]);
      j["base"] = f0["base"];
      j["power"] = f0["power"];
      Json extra = Json::array();
      for (std::size_t i = 1; i < r.factors.size(); ++i) extra.push_back(factor_json(r.factors[i]));
      if (!extra.empty()) j["factors"] = extra;
    }
    rules.push_back(j);
  }
  Json out{{"n", s.n}, {"space", space_name(s.space)}, {"rules", rules}};
  if (s.tag) out["class"] = {{"A", s.tag->A}, {"B", s.tag->B}};
  return out;
}

SeriesSpec series_from_json(const Json& j) {
  SeriesSpec s;
  s.n = int_field(j, "n");
  if (s.n < 1) throw Error("field 'n': must be >= 1");
  s.space = space_from(j);
  if (j.contains("class")) s.tag = ClassTag{int_field(j["class"], "A"), int_field(j["class"], "B")};
  const Json& rules = field(j, "rules");
  if (!rules.is_array()) throw Error("field 'rules': array expected");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Json& rj = rules[i];
    try {
      const std::string kind = value_or<std::string>(rj, "kind", "power_schedule");
      if (kind != "power_schedule") throw Error("field 'kind': only power_schedule is supported");
      TermRule r;
      if (rj.contains("base")) r.factors.push_back(factor_from(rj));
      if (rj.contains("factors"))
        for (const Json& f : rj["factors"]) r.factors.push_back(factor_from(f));
      if (rj.contains("scale")) {
        const Json& sc = rj["scale"];
        r.scale.form = value_or<std::string>(sc, "form", "const");
        if (r.scale.form != "const" && r.scale.form != "k^k" && r.scale.form != "m_pow")
          throw Error("field 'scale.form': unknown form '" + r.scale.form + "'");
        r.scale.c = value_or<double>(sc, "c", 1.0);
        r.scale.value = Complex(value_or<double>(sc, "re", 1.0), value_or<double>(sc, "im", 0.0));
        r.scale.m = value_or<double>(sc, "m", 1.0);
        r.scale.a = value_or<int>(sc, "a", 0);
        r.scale.b = value_or<int>(sc, "b", 0);
      }
      const Json& ex = field(rj, "exponent");
      if (value_or<std::string>(ex, "form", "affine") != "affine") throw Error("field 'exponent.form': affine expected");
      r.exp_a = int_field(ex, "a");
      r.exp_b = int_field(ex, "b");
      if (rj.contains("k")) {
        r.k_start = value_or<long>(rj["k"], "start", 1);
        r.k_end = value_or<long>(rj["k"], "end", -1);
      }
      s.rules.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error("rules[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return s;
}

Json to_json(const ClassifierConfig& c) {
  Json j{{"lo_frac", c.lo_frac},     {"slope_min", c.slope_min}, {"slope_conv", c.slope_conv},
         {"tail_frac", c.tail_frac}, {"j_min", c.j_min}};
  if (c.expected_bound) j["expected_bound"] = *c.expected_bound;
  return j;
}

ClassifierConfig classifier_from_json(const Json& j) {
  ClassifierConfig c;
  c.lo_frac = value_or<double>(j, "lo_frac", c.lo_frac);
  c.slope_min = value_or<double>(j, "slope_min", c.slope_min);
  c.slope_conv = value_or<double>(j, "slope_conv", c.slope_conv);
  c.tail_frac = value_or<double>(j, "tail_frac", c.tail_frac);
  c.j_min = value_or<long>(j, "j_min", c.j_min);
  if (j.contains("expected_bound")) c.expected_bound = number_from(j["expected_bound"], "expected_bound");
  return c;
}

Json to_json(const ConvergenceVerdict& v) {
  return {{"verdict", to_string(v.kind)}, {"growth", number(v.growth_estimate)},
          {"slope", number(v.slope)},     {"margin", number(v.margin)},
          {"j_min", v.j_min},             {"j_max", v.j_max},
          {"nonzero", v.nonzero},         {"reason", v.reason}};
}

// ----------------------------------------------------------------- targets

Json to_json(const TargetSet& t) {
  Json comps = Json::array();
  for (const auto& p : t.components) comps.push_back(to_json(p));
  Json pts = Json::array();
  for (const auto& x : t.points) pts.push_back(to_json(x));
  Json j{{"space", space_name(t.space)}, {"n", t.n}, {"components", comps}, {"points", pts}};
  if (t.tail) j["tail"] = to_json(*t.tail);
  return j;
}

TargetSet target_from_json(const Json& j) {
  TargetSet t;
  t.space = space_from(j);
  t.n = int_field(j, "n");
  if (j.contains("components"))
    for (const Json& p : j["components"]) {
      t.components.push_back(polynomial_from_json(p));
      if (t.components.back().dimension() != t.n) throw Error("field 'components': dimension mismatch");
    }
  if (j.contains("points"))
    for (const Json& x : j["points"]) {
      t.points.push_back(point_from_json(x));
      if (static_cast<int>(t.points.back().size()) != t.n) throw Error("field 'points': dimension mismatch");
    }
  if (j.contains("tail")) t.tail = region_from_json(j["tail"]);
  if (t.components.empty() && t.points.empty()) throw Error("target: no components and no points");
  return t;
}

// ----------------------------------------------------------------- weights

Json to_json(const WeightFunction& w) {
  using K = WeightFunction::Kind;
  auto parts = [&] {
    Json a = Json::array();
    for (const auto& p : w.parts()) a.push_back(to_json(p));
    return a;
  };
  switch (w.kind()) {
    case K::LogAbs: return {{"kind", "log_abs"}, {"poly", to_json(w.poly())}, {"scale", w.scale()}};
    case K::Max: return {{"kind", "max"}, {"parts", parts()}};
    case K::Sum: return {{"kind", "sum"}, {"parts", parts()}, {"weights", w.weights()}};
    case K::Const: return {{"kind", "const"}, {"n", w.dimension()}, {"value", w.scale()}};
    case K::LogSumExp: return {{"kind", "log_sum_exp"}, {"parts", parts()}, {"offsets", w.weights()}};
  }
  return {};
}

WeightFunction weight_from_json(const Json& j) {
  const std::string kind = value_or<std::string>(j, "kind", "");
  auto parts = [&] {
    std::vector<WeightFunction> out;
    for (const Json& p : field(j, "parts")) out.push_back(weight_from_json(p));
    return out;
  };
  if (kind == "log_abs") return WeightFunction::log_abs(polynomial_from_json(field(j, "poly")), value_or<double>(j, "scale", 1.0));
  if (kind == "max") return WeightFunction::max_of(parts());
  if (kind == "sum") return WeightFunction::sum_of(parts(), value_or<std::vector<double>>(j, "weights", {}));
  if (kind == "const") return WeightFunction::constant(int_field(j, "n"), number_from(field(j, "value"), "value"));
  if (kind == "log_sum_exp")
    return WeightFunction::log_sum_exp(parts(), value_or<std::vector<double>>(j, "offsets", {}));
  throw Error("field 'kind': unknown weight kind '" + kind + "'");
}

// ----------------------------------------------------------------- reports

Json to_json(const BetaWitness& w) {
  Json j{{"m", w.m},
         {"a", w.a},
         {"b", w.b},
         {"beta", w.beta()},
         {"v", w.p.weight()},
         {"q", w.q()},
         {"r", w.r},
         {"p", to_json(w.p.poly())},
         {"p_norm", w.p_norm},
         {"sample_norm", w.sample_norm},
         {"y", to_json(w.y)},
         {"value_at_y", w.value(w.y)}};
  if (w.u) j["u"] = to_json(*w.u);
  return j;
}

Json to_json(const SynthesisReport& r) {
  Json verdicts = Json::array();
  for (const ProbeResult& p : r.verdicts) {
    Json v = to_json(p.verdict);
    v["x"] = to_json(p.x);
    v["on_target"] = p.on_target;
    v["distance"] = number(p.distance);
    v["level"] = p.level;
    v["level_half"] = p.level_half;
    v["escapes"] = p.escapes;
    v["consistent"] = p.consistent;
    verdicts.push_back(v);
  }
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  Json window{{"radius", r.certified_window.radius},
              {"epsilon", r.certified_window.epsilon},
              {"cells", r.certified_window.cells},
              {"uncovered", r.certified_window.uncovered}};
  if (r.certified_window.excluded) window["excluded"] = to_json(*r.certified_window.excluded);
  Json j{{"mode", r.mode},
         {"horizon", r.horizon},
         {"classifier", to_json(r.classifier)},
         {"exactness", to_string(r.exactness)},
         {"certified_window", window},
         {"class_ok", r.class_ok},
         {"probes", r.verdicts.size()},
         {"inconsistent", r.inconsistent()},
         {"indeterminate", r.indeterminate()},
         {"verdicts", verdicts},
         {"witnesses", witnesses},
         {"notes", r.notes}};
  if (r.joint) j["joint"] = to_json(*r.joint);
  return j;
}

std::vector<Probe> probes_from_json(const Json& j) {
  const Json& arr = j.is_object() ? field(j, "probes") : j;
  if (!arr.is_array()) throw Error("probes: array expected");
  std::vector<Probe> out;
  for (const Json& p : arr) {
    if (p.is_array()) out.push_back({point_from_json(p), false});
    else out.push_back({point_from_json(field(p, "x")), value_or<bool>(p, "on_target", false)});
  }
  return out;
}

Json to_json(const std::vector<Probe>& probes) {
  Json a = Json::array();
  for (const Probe& p : probes) a.push_back({{"x", to_json(p.x)}, {"on_target", p.on_target}});
  return {{"probes", a}};
}

}  // namespace convlab
