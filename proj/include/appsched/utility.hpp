// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace appsched {

// Normalized QoE utility of allocated throughput, U: [0, inf) -> [0, 1].
//
// Two families:
//  - Sigmoidal (real-time traffic): U(r) = c * (logistic(a*(r - b)) - d)
//    with c, d chosen so that U(0) = 0 and U(inf) = 1. `a` sets the
//    steepness, `b` is the inflection rate, i.e. the throughput the
//    application actually needs.
//  - Logarithmic (delay-tolerant traffic): U(r) = log(1 + k*r) / log(1 + k*r_max),
//    so U(0) = 0 and U(r_max) = 1.
struct UtilityFunction {
  enum class Kind { Sigmoidal, Logarithmic };

  Kind kind = Kind::Logarithmic;

  // sigmoidal
  double steepness = 0.0;        // a, 1/rate-units
  double inflection_rate = 0.0;  // b, rate-units
  double norm_scale = 0.0;       // c = 1 + exp(-a*b)
  double norm_offset = 0.0;      // d = logistic(-a*b)

  // logarithmic
  double curvature = 0.0;  // k, 1/rate-units
  double rate_max = 0.0;   // rate at which utility reaches 1
  double log_norm = 0.0;   // log1p(k * r_max)

  static UtilityFunction sigmoidal(double steepness, double inflection_rate);
  static UtilityFunction logarithmic(double curvature, double rate_max);

  bool operator==(const UtilityFunction&) const = default;
};

// U(rate). Exactly 0 at rate 0; logarithmic is exactly 1 at rate_max.
// Throws std::domain_error for negative rates.
double evaluate(const UtilityFunction& u, double rate);

// Analytic dU/dr; strictly positive for finite rates.
double derivative(const UtilityFunction& u, double rate);

// U'(r)/U(r), the marginal-value-per-unit-utility factor used by the
// scheduler and the power gradient. Rates below `rate_floor` are clamped to
// the floor, which keeps the ratio finite while preserving the priority of
// starved users (the ratio grows like 1/r towards zero rate).
double marginal_ratio(const UtilityFunction& u, double rate,
                      double rate_floor = 1e-3);

}  // namespace appsched
