#pragma once

#include <functional>

namespace ccm {

// Adaptive integration on [a, b]. Handles integrable endpoint singularities.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8, double rel_tol = 0.0);

// Adaptive integration on [a, inf).
double integrate_upper(const std::function<double(double)>& f, double a, double abs_tol = 1e-10,
                       double rel_tol = 1e-10);

}  // namespace ccm
