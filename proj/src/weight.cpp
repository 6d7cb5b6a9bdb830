#include "convlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace convlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

int common_dimension(const std::vector<WeightFunction>& parts) {
  if (parts.empty()) throw Error("weight function: empty combination");
  for (const auto& p : parts)
    if (p.dimension() != parts.front().dimension()) throw Error("weight function: dimension mismatch");
  return parts.front().dimension();
}

}  // namespace

WeightFunction WeightFunction::log_abs(Polynomial p, double scale) {
  if (!(scale > 0.0)) throw Error("log_abs weight: scale must be positive");
  if (p.is_zero()) throw Error("log_abs weight: zero polynomial");
  WeightFunction w;
  w.kind_ = Kind::LogAbs;
  w.n_ = p.dimension();
  w.poly_ = std::move(p);
  w.scale_ = scale;
  return w;
}

WeightFunction WeightFunction::max_of(std::vector<WeightFunction> parts) {
  WeightFunction w;
  w.kind_ = Kind::Max;
  w.n_ = common_dimension(parts);
  w.parts_ = std::move(parts);
  return w;
}

WeightFunction WeightFunction::sum_of(std::vector<WeightFunction> parts, std::vector<double> weights) {
  WeightFunction w;
  w.kind_ = Kind::Sum;
  w.n_ = common_dimension(parts);
  if (weights.empty()) weights.assign(parts.size(), 1.0);
  if (weights.size() != parts.size()) throw Error("sum weight: weight count mismatch");
  for (double c : weights)
    if (!(c >= 0.0)) throw Error("sum weight: weights must be nonnegative");
  w.parts_ = std::move(parts);
  w.weights_ = std::move(weights);
  return w;
}

WeightFunction WeightFunction::constant(int n, double c) {
  if (n < 1) throw Error("constant weight: dimension must be >= 1");
  WeightFunction w;
  w.kind_ = Kind::Const;
  w.n_ = n;
  w.scale_ = c;
  return w;
}

WeightFunction WeightFunction::log_sum_exp(std::vector<WeightFunction> parts, std::vector<double> offsets) {
  WeightFunction w;
  w.kind_ = Kind::LogSumExp;
  w.n_ = common_dimension(parts);
  if (offsets.empty()) offsets.assign(parts.size(), 0.0);
  if (offsets.size() != parts.size()) throw Error("log_sum_exp weight: offset count mismatch");
  w.parts_ = std::move(parts);
  w.weights_ = std::move(offsets);
  return w;
}

double WeightFunction::operator()(const Point& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error("weight function: dimension mismatch");
  switch (kind_) {
    case Kind::LogAbs: return scale_ * poly_.log_abs(x);
    case Kind::Const: return scale_;
    case Kind::Max: {
      double m = kNegInf;
      for (const auto& p : parts_) m = std::max(m, p(x));
      return m;
    }
    case Kind::Sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i)
        if (weights_[i] > 0.0) s += weights_[i] * parts_[i](x);
      return s;
    }
    case Kind::LogSumExp: {
      std::vector<double> v;
      for (std::size_t i = 0; i < parts_.size(); ++i) v.push_back(parts_[i](x) + weights_[i]);
      return convlab::log_sum_exp(v);
    }
  }
  return kNegInf;
}

double WeightFunction::sup_bound(double log_r) const {
  switch (kind_) {
    case Kind::LogAbs: {
      // |p(z)| <= sum |a_alpha| r^{|alpha|} on |z| <= r
      std::vector<double> v;
      for (const auto& [a, c] : poly_.terms()) v.push_back(std::log(std::abs(c)) + total_degree(a) * log_r);
      return scale_ * convlab::log_sum_exp(v);
    }
    case Kind::Const: return scale_;
    case Kind::Max: {
      double m = kNegInf;
      for (const auto& p : parts_) m = std::max(m, p.sup_bound(log_r));
      return m;
    }
    case Kind::Sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i)
        if (weights_[i] > 0.0) s += weights_[i] * parts_[i].sup_bound(log_r);
      return s;
    }
    case Kind::LogSumExp: {
      std::vector<double> v;
      for (std::size_t i = 0; i < parts_.size(); ++i) v.push_back(parts_[i].sup_bound(log_r) + weights_[i]);
      return convlab::log_sum_exp(v);
    }
  }
  return kNegInf;
}

std::string WeightFunction::to_string() const {
  std::ostringstream os;
  auto list = [&](const char* name) {
    os << name << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) os << ", ";
      if (!weights_.empty() && weights_[i] != (kind_ == Kind::Sum ? 1.0 : 0.0)) os << weights_[i] << ':';
      os << parts_[i].to_string();
    }
    os << ')';
  };
  switch (kind_) {
    case Kind::LogAbs:
      if (scale_ != 1.0) os << scale_ << '*';
      os << "log|" << poly_.to_string() << '|';
      break;
    case Kind::Const: os << scale_; break;
    case Kind::Max: list("max"); break;
    case Kind::Sum: list("sum"); break;
    case Kind::LogSumExp: list("logsumexp"); break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

HFunction HFunction::abs_pow(Polynomial P, int q) {
  if (q < 1) throw Error("abs_pow: q must be >= 1");
  if (P.is_zero() || !P.is_homogeneous() || P.degree() != q)
    throw Error("abs_pow: P must be homogeneous of degree q");
  if (P.dimension() < 2) throw Error("abs_pow: need coordinates (x_0, x)");
  HFunction h;
  h.kind_ = Kind::AbsPow;
  h.n_ = P.dimension();
  h.poly_ = std::move(P);
  h.q_ = q;
  return h;
}

HFunction HFunction::max_of(std::vector<HFunction> parts) {
  if (parts.empty()) throw Error("H max: empty");
  HFunction h;
  h.kind_ = Kind::Max;
  h.n_ = parts.front().n_;
  for (const auto& p : parts)
    if (p.n_ != h.n_) throw Error("H max: dimension mismatch");
  h.parts_ = std::move(parts);
  return h;
}

HFunction HFunction::sum_of(std::vector<HFunction> parts, std::vector<double> weights) {
  HFunction h = max_of(std::move(parts));
  h.kind_ = Kind::Sum;
  if (weights.empty()) weights.assign(h.parts_.size(), 1.0);
  if (weights.size() != h.parts_.size()) throw Error("H sum: weight count mismatch");
  for (double c : weights)
    if (!(c >= 0.0)) throw Error("H sum: weights must be nonnegative");
  h.weights_ = std::move(weights);
  return h;
}

double HFunction::operator()(const Point& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error("H function: dimension mismatch");
  switch (kind_) {
    case Kind::AbsPow: return std::pow(std::abs(poly_.evaluate(x)), 1.0 / q_);
    case Kind::Max: {
      double m = 0.0;
      for (const auto& p : parts_) m = std::max(m, p(x));
      return m;
    }
    case Kind::Sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * parts_[i](x);
      return s;
    }
  }
  return 0.0;
}

WeightFunction h_to_l(const HFunction& h) {
  switch (h.kind_) {
    case HFunction::Kind::AbsPow: {
      const Polynomial p = h.poly_.dehomogenize_first();
      if (p.is_zero()) throw Error("h_to_l: h(1, .) vanishes identically");
      return WeightFunction::log_abs(p, 1.0 / h.q_);
    }
    case HFunction::Kind::Max: {
      std::vector<WeightFunction> parts;
      for (const auto& p : h.parts_) parts.push_back(h_to_l(p));
      return WeightFunction::max_of(std::move(parts));
    }
    case HFunction::Kind::Sum: {
      std::vector<WeightFunction> parts;
      std::vector<double> offsets;
      for (std::size_t i = 0; i < h.parts_.size(); ++i) {
        if (h.weights_[i] == 0.0) continue;
        parts.push_back(h_to_l(h.parts_[i]));
        offsets.push_back(std::log(h.weights_[i]));
      }
      return WeightFunction::log_sum_exp(std::move(parts), std::move(offsets));
    }
  }
  throw Error("h_to_l: unknown node");
}

// ---------------------------------------------------------------------------

SaddulaevTransform::SaddulaevTransform(WeightFunction u, int j_max) : u_(std::move(u)), j_max_(j_max) {
  if (j_max < 1) throw Error("saddulaev: j_max must be >= 1");
  double prev = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const double bound = u_.sup_bound(std::ldexp(1.0, j));
    if (!std::isfinite(bound)) throw Error("saddulaev: cannot certify M_j for j = " + std::to_string(j));
    const double m = std::max({bound, prev + 1.0, 1.0});
    M_.push_back(m);
    prev = m;
  }
}

double SaddulaevTransform::term(int j, const Point& x) const {
  const double lx = std::log(norm2(x));
  const double w = std::ldexp(1.0, -j);
  const double second = w * lx - 1.0;
  if (lx >= std::ldexp(1.0, j)) return second;
  const double ux = u_(x);
  return std::max(w * (ux / M_[j - 1] - 1.0), second);
}

double SaddulaevTransform::partial_sum(const Point& x, int J) const {
  if (J < 0 || J > j_max_) throw Error("saddulaev: partial sum index out of range");
  double s = 0.0;
  for (int j = 1; j <= J; ++j) s += term(j, x);
  return std::isfinite(s) ? s : kLogFloor;
}

double SaddulaevTransform::operator()(const Point& x) const {
  const double ux = u_(x);
  if (std::isinf(ux) && ux < 0) return kLogFloor;
  return partial_sum(x, j_max_);
}

int SaddulaevTransform::monotone_from(const Point& x) const {
  // v_j <= 0 as soon as log|x| < 2^j (then u <= M_j there)
  const double lx = std::log(norm2(x));
  int j = 1;
  while (!(lx < std::ldexp(1.0, j)) && j < 1100) ++j;
  return j;
}

double SaddulaevTransform::tail_lower(const Point& x) const {
  const double ux = u_(x);
  if (std::isinf(ux) && ux < 0) return kLogFloor;
  // sum_{j > J} 2^{-j}(u/M_j - 1) >= -2^{-J}(|u|/M_{J} + 1)
  return -std::ldexp(1.0, -j_max_) * (std::abs(ux) / M_.back() + 1.0);
}

SaddulaevReport saddulaev_report(const SaddulaevTransform& v, const std::vector<Point>& e_samples,
                                 const std::vector<Point>& off_samples) {
  SaddulaevReport rep;
  auto row = [&](const Point& x, bool on_E) {
    SaddulaevRow r;
    r.x = x;
    r.on_E = on_E;
    r.v = v(x);
    r.log_plus = std::max(0.0, std::log(norm2(x)));
    r.tail_lower = v.tail_lower(x);
    r.monotone_from = v.monotone_from(x);
    r.bound_ok = r.v <= r.log_plus + 1e-9;
    double prev = v.partial_sum(x, std::min(r.monotone_from, v.j_max()));
    for (int J = r.monotone_from + 1; J <= v.j_max(); ++J) {
      const double s = v.partial_sum(x, J);
      if (s > prev + 1e-12 * (1.0 + std::abs(prev))) r.monotone_ok = false;
      prev = s;
    }
    r.floor_ok = on_E ? r.v <= kLogFloor : r.v > kLogFloor;
    rep.all_ok = rep.all_ok && r.bound_ok && r.monotone_ok && r.floor_ok;
    rep.rows.push_back(std::move(r));
  };
  for (const auto& x : e_samples) row(x, true);
  for (const auto& x : off_samples) row(x, false);
  return rep;
}

}  // namespace convlab
