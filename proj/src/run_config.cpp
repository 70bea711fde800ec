#include "nptorus/run_config.hpp"

#include <sstream>

namespace nptorus::cli {

std::string RunConfig::validate() const {
  std::ostringstream err;
  if (xi.empty()) err << "at least one xi value is required; ";
  for (double x : xi)
    if (!(x >= 0.05 && x <= 0.99))
      err << "xi=" << x << " outside [0.05, 0.99]; ";
  if (k_max < 0 || k_max > 512) err << "kmax must be in [0, 512]; ";
  if (l_max < 0 || l_max > 512) err << "lmax must be in [0, 512]; ";
  if (L < 1 || L > 256) err << "L must be in [1, 256]; ";
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) err << "rel-tol out of (0, 1e-2]; ";
  if (!(abs_tol > 0.0)) err << "abs-tol must be > 0; ";
  if (jobs < 1) err << "jobs must be >= 1; ";
  if (method != "spectral" && method != "direct" && method != "polar" &&
      method != "all")
    err << "method must be one of spectral|direct|polar|all; ";
  return err.str();
}

quad::QuadratureSpec RunConfig::quad_spec() const {
  quad::QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = abs_tol;
  return spec;
}

modes::RangeMethod RunConfig::range_method() const {
  if (method == "direct") return modes::RangeMethod::direct;
  if (method == "polar") return modes::RangeMethod::polar;
  if (method == "all") return modes::RangeMethod::all;
  return modes::RangeMethod::spectral;
}

}  // namespace nptorus::cli
