#include "ccm/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <string>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

double call_thunk(double x, void* params) {
  auto* f = static_cast<const std::function<double(double)>*>(params);
  return (*f)(x);
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

constexpr std::size_t kLimit = 4000;

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
  if (a == b) return 0.0;
  Workspace w(gsl_integration_workspace_alloc(kLimit));
  gsl_function gf;
  gf.function = &call_thunk;
  gf.params = const_cast<std::function<double(double)>*>(&f);
  double result = 0.0, err = 0.0;
  int status =
      gsl_integration_qags(&gf, a, b, abs_tol, rel_tol, kLimit, w.get(), &result, &err);
  if (status != 0 && status != GSL_EROUND) {
    fail(Err::QuadratureFailure, "integrate [" + std::to_string(a) + ", " + std::to_string(b) +
                                     "]: " + gsl_strerror(status));
  }
  return result;
}

double integrate_upper(const std::function<double(double)>& f, double a, double abs_tol,
                       double rel_tol) {
  Workspace w(gsl_integration_workspace_alloc(kLimit));
  gsl_function gf;
  gf.function = &call_thunk;
  gf.params = const_cast<std::function<double(double)>*>(&f);
  double result = 0.0, err = 0.0;
  int status = gsl_integration_qagiu(&gf, a, abs_tol, rel_tol, kLimit, w.get(), &result, &err);
  if (status != 0 && status != GSL_EROUND) {
    fail(Err::QuadratureFailure,
         "integrate_upper [" + std::to_string(a) + ", inf): " + gsl_strerror(status));
  }
  return result;
}

}  // namespace ccm
