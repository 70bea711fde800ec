#include "nptorus/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nptorus::asympt {

namespace {
constexpr double kPi = std::numbers::pi;

int hessian_signature(const std::array<double, 3>& h) {
  const double det = h[0] * h[2] - h[1] * h[1];
  const double tr = h[0] + h[2];
  if (det < 0.0) return 0;
  return tr > 0.0 ? 2 : -2;
}
}  // namespace

std::complex<double> stationary_phase_estimate(
    const std::vector<CriticalPointData>& critical_points, double n) {
  if (!(n > 0.0))
    throw std::invalid_argument("stationary_phase_estimate: n must be > 0");
  std::complex<double> sum{0.0, 0.0};
  for (const auto& cp : critical_points) {
    const double det =
        cp.hessian[0] * cp.hessian[2] - cp.hessian[1] * cp.hessian[1];
    if (std::abs(det) <= 1e-10)
      throw std::invalid_argument(
          "stationary_phase_estimate: degenerate critical point");
    const int sgn = hessian_signature(cp.hessian);
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, n * cp.phase_value +
                                               0.25 * kPi * sgn));
    sum += phase * (2.0 * kPi / n) * cp.amplitude / std::sqrt(std::abs(det));
  }
  return sum;
}

double lead_I_k0(const TorusShape&, int k) {
  if (k < 1) throw std::invalid_argument("lead_I_k0: k must be >= 1");
  return 2.0 * std::sqrt(2.0) * kPi / k;
}

double lead_I_l(const TorusShape& shape, int l) {
  if (l < 1) throw std::invalid_argument("lead_I_l: l must be >= 1");
  const double xi = shape.xi();
  const double root = std::sqrt(1.0 - xi * xi);
  return -2.0 * std::sqrt(2.0) * kPi * xi * (1.0 - root) /
         ((1.0 - xi * xi) * l);
}

std::vector<CriticalPointData> critical_points_k_axis(
    const TorusShape& shape) {
  // Phase Psi = -r cos(theta): critical points (0, +-pi/2), |det H| = 1,
  // signature 0, amplitude h(0, +-pi/2) = sqrt(2).
  const double amp = modes::h_eval(shape, 0.0, 0.5 * kPi);
  return {{0.0, 0.5 * kPi, {0.0, 1.0, 0.0}, 0.0, amp},
          {0.0, -0.5 * kPi, {0.0, -1.0, 0.0}, 0.0, amp}};
}

std::vector<CriticalPointData> critical_points_l_axis(
    const TorusShape& shape) {
  // After the theta -> theta + pi/2 shift the phase is the same; the
  // amplitude becomes h(0, 0) = h(0, pi) (pi-periodic), k-independent since
  // the extra factor e^{-ikr cos theta} is 1 at r = 0.
  const double amp = modes::h_eval(shape, 0.0, 0.0);
  return {{0.0, 0.5 * kPi, {0.0, 1.0, 0.0}, 0.0, amp},
          {0.0, -0.5 * kPi, {0.0, -1.0, 0.0}, 0.0, amp}};
}

namespace {

SignCertificate scan_axis(const TorusShape& shape, ScanAxis axis, int fixed_k,
                          int scan_max, const quad::QuadratureSpec& spec) {
  if (scan_max < 8)
    throw std::invalid_argument("certify_signs: scan bound must be >= 8");
  SignCertificate cert;
  cert.xi = shape.xi();
  cert.axis = axis;
  cert.fixed_k = fixed_k;

  const bool want_positive = (axis == ScanAxis::k_axis_l0);
  for (int n = 1; n <= scan_max; ++n) {
    const int k = want_positive ? n : fixed_k;
    const int l = want_positive ? 0 : n;
    const auto I = modes::I_kl_spectral(shape, k, l, spec);
    const double err = std::max(I.err_estimate, spec.abs_tol);
    const double lead = want_positive ? lead_I_k0(shape, n)
                                      : lead_I_l(shape, n);
    cert.indices.push_back(n);
    cert.values.push_back(I.value);
    cert.margins.push_back(I.converged ? std::abs(I.value) / err : 0.0);
    cert.ratios.push_back(I.value / lead);
  }

  // Longest suffix over which the sign matches the prediction with margin.
  int threshold = -1;
  for (int i = static_cast<int>(cert.indices.size()) - 1; i >= 0; --i) {
    const bool sign_ok =
        want_positive ? cert.values[i] > 0.0 : cert.values[i] < 0.0;
    if (!sign_ok || cert.margins[i] < 3.0) break;
    threshold = static_cast<int>(cert.indices[i]);
  }
  cert.threshold = threshold;
  cert.certified = threshold > 0;
  cert.leading_constant_check = std::abs(cert.ratios.back() - 1.0);
  return cert;
}

}  // namespace

CertificationResult certify_signs(const TorusShape& shape, int k_scan_max,
                                  int l_scan_max,
                                  const quad::QuadratureSpec& spec,
                                  const std::vector<int>& fixed_ks) {
  CertificationResult result;
  result.positive_axis =
      scan_axis(shape, ScanAxis::k_axis_l0, 0, k_scan_max, spec);
  for (int k : fixed_ks)
    result.negative_axes.push_back(
        scan_axis(shape, ScanAxis::l_axis_fixed_k, k, l_scan_max, spec));
  return result;
}

}  // namespace nptorus::asympt
