#pragma once

#include <string>
#include <vector>

#include "nptorus/mode_integrals.hpp"
#include "nptorus/quadrature.hpp"

namespace nptorus::cli {

struct RunConfig {
  std::vector<double> xi{0.5};
  int k_max = 8;
  int l_max = 8;
  int L = 64;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int jobs = 1;
  std::string out_dir = ".";
  std::string cache_dir;  // empty: caching disabled
  std::string method = "spectral";  // spectral | direct | polar | all

  /// Empty string when the configuration is usable.
  std::string validate() const;

  quad::QuadratureSpec quad_spec() const;
  modes::RangeMethod range_method() const;
};

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

}  // namespace nptorus::cli
