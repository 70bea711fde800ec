#pragma once

#include <array>
#include <complex>
#include <vector>

#include "nptorus/mode_integrals.hpp"
#include "nptorus/torus_geometry.hpp"

namespace nptorus::asympt {

/// One non-degenerate critical point of the phase, with the data the
/// stationary-phase formula consumes. The critical analysis itself is
/// supplied externally (no root-finding here).
struct CriticalPointData {
  double r = 0.0;
  double theta = 0.0;
  std::array<double, 3> hessian{};  // symmetric 2x2: {h11, h12, h22}
  double phase_value = 0.0;
  double amplitude = 0.0;
};

/// Leading stationary-phase term for a 2D oscillatory integral
/// int h e^{in Psi}: sum over critical points of
/// e^{in Psi(x0)} |det H|^{-1/2} e^{(i pi/4) sign(H)} (2 pi / n) h(x0).
/// Throws on a singular Hessian (|det| <= 1e-10).
std::complex<double> stationary_phase_estimate(
    const std::vector<CriticalPointData>& critical_points, double n);

/// Leading term of I_{k,0}: 2*sqrt(2)*pi / k (xi-independent).
double lead_I_k0(const TorusShape& shape, int k);

/// Leading term of I_{k,l} for large l (k-independent):
/// -2*sqrt(2)*pi*xi*(1 - sqrt(1-xi^2)) / ((1-xi^2) * l).
double lead_I_l(const TorusShape& shape, int l);

/// Critical-point data for the two cases analysed in the proof: the l = 0
/// axis and the fixed-k / large-l axis (after the theta shift).
std::vector<CriticalPointData> critical_points_k_axis(const TorusShape& shape);
std::vector<CriticalPointData> critical_points_l_axis(const TorusShape& shape);

enum class ScanAxis { k_axis_l0, l_axis_fixed_k };

struct SignCertificate {
  double xi = 0.0;
  ScanAxis axis = ScanAxis::k_axis_l0;
  int fixed_k = 0;          // meaningful for l_axis_fixed_k
  int threshold = -1;       // empirical k-hat or l-hat; -1 if indeterminate
  bool certified = false;
  std::vector<double> indices;       // scanned indices (as doubles for I/O)
  std::vector<double> values;        // I at each index
  std::vector<double> margins;       // |I| / err estimate
  std::vector<double> ratios;        // I * n / leading term
  double leading_constant_check = 0.0;  // |ratio - 1| at the largest index
};

struct CertificationResult {
  SignCertificate positive_axis;               // l = 0, scan over k
  std::vector<SignCertificate> negative_axes;  // scan over l, per fixed k
};

/// Scan I_{k,0} for k = 1..k_scan_max and I_{k,l} for l = 1..l_scan_max at
/// each k in `fixed_ks`; certify a sign only where the margin is >= 3.
CertificationResult certify_signs(const TorusShape& shape, int k_scan_max,
                                  int l_scan_max,
                                  const quad::QuadratureSpec& spec = {},
                                  const std::vector<int>& fixed_ks = {0, 3,
                                                                      12});

}  // namespace nptorus::asympt
