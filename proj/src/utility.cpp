// SPDX-License-Identifier: Apache-2.0
#include "appsched/utility.hpp"

#include <cmath>
#include <stdexcept>

namespace appsched {

namespace {

// 1 / (1 + e^-x), branch on sign so neither exp overflows.
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// d/dx logistic(x) = e^-|x| / (1 + e^-|x|)^2. This form stays positive as
// long as e^-|x| is representable, whereas s*(1-s) collapses to zero once
// the logistic itself rounds to 1.
double logistic_slope(double x) {
  const double t = std::exp(-std::abs(x));
  const double denom = 1.0 + t;
  return t / (denom * denom);
}

void check_rate(double rate) {
  if (!(rate >= 0.0)) throw std::domain_error("utility: rate must be >= 0");
}

}  // namespace

UtilityFunction UtilityFunction::sigmoidal(double steepness,
                                           double inflection_rate) {
  if (!(steepness > 0.0) || !(inflection_rate > 0.0))
    throw std::invalid_argument("sigmoidal utility: steepness and inflection rate must be > 0");
  // Past exp(700) the normalization offset underflows and U(r)/U'(r) would
  // collapse to 0/0 near the origin.
  if (steepness * inflection_rate > 700.0)
    throw std::invalid_argument("sigmoidal utility: steepness * inflection_rate too large");
  UtilityFunction u;
  u.kind = Kind::Sigmoidal;
  u.steepness = steepness;
  u.inflection_rate = inflection_rate;
  u.norm_scale = 1.0 + std::exp(-steepness * inflection_rate);
  u.norm_offset = logistic(-steepness * inflection_rate);
  return u;
}

UtilityFunction UtilityFunction::logarithmic(double curvature, double rate_max) {
  if (!(curvature > 0.0) || !(rate_max > 0.0))
    throw std::invalid_argument("logarithmic utility: curvature and rate_max must be > 0");
  UtilityFunction u;
  u.kind = Kind::Logarithmic;
  u.curvature = curvature;
  u.rate_max = rate_max;
  u.log_norm = std::log1p(curvature * rate_max);
  return u;
}

double evaluate(const UtilityFunction& u, double rate) {
  check_rate(rate);
  if (u.kind == UtilityFunction::Kind::Sigmoidal) {
    // logistic(a*(0-b)) equals norm_offset bit-for-bit, so U(0) == 0 exactly.
    const double s = logistic(u.steepness * (rate - u.inflection_rate));
    return u.norm_scale * (s - u.norm_offset);
  }
  return std::log1p(u.curvature * rate) / u.log_norm;
}

double derivative(const UtilityFunction& u, double rate) {
  check_rate(rate);
  if (u.kind == UtilityFunction::Kind::Sigmoidal) {
    return u.norm_scale * u.steepness *
           logistic_slope(u.steepness * (rate - u.inflection_rate));
  }
  return u.curvature / ((1.0 + u.curvature * rate) * u.log_norm);
}

double marginal_ratio(const UtilityFunction& u, double rate, double rate_floor) {
  if (!(rate_floor > 0.0))
    throw std::invalid_argument("marginal_ratio: rate_floor must be > 0");
  const double r = std::max(rate, rate_floor);
  return derivative(u, r) / evaluate(u, r);
}

}  // namespace appsched
