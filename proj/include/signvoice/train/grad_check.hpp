// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "signvoice/core/error.hpp"
#include "signvoice/core/params.hpp"

namespace signvoice {

inline constexpr double kGradCheckStep = 1e-5;

// |a - n| / max(|a|, |n|, 1e-12)
inline double gradient_relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::abs(analytic - numeric) / denom;
}

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;

  bool passed(double tolerance = 1e-6) const { return max_relative_error < tolerance; }
};

// Compares analytic against central differences of loss(params), perturbing
// each scalar by +-step in place and restoring it afterwards.
template <typename LossFn>
GradCheckReport grad_check(ParamSet<double>& params, const ParamSet<double>& analytic,
                           LossFn&& loss, double step = kGradCheckStep) {
  params.require_same_layout(analytic);
  if (!(step > 0.0)) throw Error(Errc::invalid_argument, "grad_check step must be > 0");
  GradCheckReport report;
  for (std::size_t p = 0; p < params.count(); ++p) {
    auto& values = params[p].value;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = loss(params);
      values[i] = saved - step;
      const double down = loss(params);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[p].value[i];
      const double err = gradient_relative_error(a, numeric);
      ++report.checked;
      if (!(err <= report.max_relative_error)) {
        report.max_relative_error = err;
        report.worst_parameter = params[p].name;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace signvoice
