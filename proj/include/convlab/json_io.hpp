#pragma once

#include <json.hpp>
#include <string>

#include "convlab/exact.hpp"
#include "convlab/pluripotential.hpp"
#include "convlab/polynomial.hpp"
#include "convlab/region.hpp"
#include "convlab/series.hpp"
#include "convlab/synthesis.hpp"
#include "convlab/weight.hpp"

namespace convlab {

using Json = nlohmann::json;

/// Parses a file; malformed JSON is reported with its line and column.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Finite doubles as numbers, +-inf and nan as strings.
Json number(double v);
double number_from(const Json& j, const std::string& field);

Json to_json(const Complex& z);
Json to_json(const Point& x);
Point point_from_json(const Json& j);

/// {"n", "terms": [{"alpha", "re", "im"}]}
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);
/// Exact mode: "re"/"im" are decimal or fraction strings.
Json to_json(const RationalPolynomial& p);
RationalPolynomial rational_polynomial_from_json(const Json& j);
bool is_exact_polynomial(const Json& j);

Json to_json(const Region& r);
Region region_from_json(const Json& j);

Json to_json(const SeriesSpec& s);
SeriesSpec series_from_json(const Json& j);

Json to_json(const ClassifierConfig& c);
ClassifierConfig classifier_from_json(const Json& j);
Json to_json(const ConvergenceVerdict& v);

Json to_json(const TargetSet& t);
TargetSet target_from_json(const Json& j);

Json to_json(const WeightFunction& w);
WeightFunction weight_from_json(const Json& j);

Json to_json(const BetaWitness& w);
Json to_json(const SynthesisReport& r);

std::vector<Probe> probes_from_json(const Json& j);
Json to_json(const std::vector<Probe>& probes);

}  // namespace convlab
