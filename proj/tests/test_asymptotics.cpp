#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "nptorus/asymptotics.hpp"
#include "nptorus/quadrature.hpp"

using namespace nptorus;
using namespace nptorus::asympt;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("stationary_phase_estimate input validation") {
  CriticalPointData degenerate;
  degenerate.hessian = {1.0, 1.0, 1.0};  // det = 0
  CHECK_THROWS_AS(stationary_phase_estimate({degenerate}, 10.0),
                  std::invalid_argument);
  CriticalPointData fine;
  fine.hessian = {0.0, 1.0, 0.0};
  fine.amplitude = 1.0;
  CHECK_THROWS_AS(stationary_phase_estimate({fine}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(stationary_phase_estimate({fine}, -3.0),
                  std::invalid_argument);
  CHECK_NOTHROW(stationary_phase_estimate({fine}, 5.0));
}

TEST_CASE("stationary phase against a brute-force oscillatory integral") {
  // iint g e^{in Psi} with Psi = cos x + cos y over the torus; critical
  // points at x, y in {0, pi} with diagonal Hessians.
  auto g = [](double x, double y) {
    return std::exp(0.3 * std::cos(x) + 0.2 * std::sin(y));
  };
  auto psi_phase = [](double x, double y) {
    return std::cos(x) + std::cos(y);
  };
  std::vector<CriticalPointData> pts;
  for (double x0 : {0.0, kPi})
    for (double y0 : {0.0, kPi}) {
      CriticalPointData c;
      c.r = x0;
      c.theta = y0;
      c.hessian = {x0 == 0.0 ? -1.0 : 1.0, 0.0, y0 == 0.0 ? -1.0 : 1.0};
      c.phase_value = psi_phase(x0, y0);
      c.amplitude = g(x0, y0);
      pts.push_back(c);
    }
  const double n = 200.0;
  const auto est = stationary_phase_estimate(pts, n);
  // Brute force on a fine trapezoid grid (integrand is smooth periodic).
  const int m = 4096;
  std::complex<double> brute = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = 2.0 * kPi * i / m, y = 2.0 * kPi * j / m;
      brute += g(x, y) * std::exp(std::complex<double>(0.0, n * psi_phase(x, y)));
    }
  brute *= (2.0 * kPi / m) * (2.0 * kPi / m);
  // Leading-order accuracy is O(1/n) relative.
  CHECK(std::abs(est - brute) < 0.02 * std::abs(brute));
}

TEST_CASE("leading terms: closed forms and critical-point consistency") {
  const TorusShape shape(0.5, 1.0);
  CHECK(lead_I_k0(shape, 4) ==
        doctest::Approx(2.0 * std::sqrt(2.0) * kPi / 4.0).epsilon(1e-15));
  const double expected_l =
      -2.0 * std::sqrt(2.0) * kPi * 0.5 * (1.0 - std::sqrt(0.75)) /
      (0.75 * 6.0);
  CHECK(lead_I_l(shape, 6) == doctest::Approx(expected_l).epsilon(1e-14));
  CHECK_THROWS_AS(lead_I_k0(shape, 0), std::invalid_argument);
  CHECK_THROWS_AS(lead_I_l(shape, -1), std::invalid_argument);

  // The packaged critical-point data reproduces the closed forms through
  // the generic formula (with the polar form's 1/2 prefactor).
  for (int n : {3, 10, 25}) {
    const auto ek = stationary_phase_estimate(critical_points_k_axis(shape),
                                              static_cast<double>(n));
    CHECK(0.5 * ek.real() == doctest::Approx(lead_I_k0(shape, n)).epsilon(1e-12));
    CHECK(std::abs(ek.imag()) < 1e-12 * std::abs(ek.real()));
    const auto el = stationary_phase_estimate(critical_points_l_axis(shape),
                                              static_cast<double>(n));
    CHECK(0.5 * el.real() == doctest::Approx(lead_I_l(shape, n)).epsilon(1e-12));
  }
}

TEST_CASE("scanned ratios approach 1 along both axes") {
  const TorusShape shape(0.5, 1.0);
  auto ratio_k = [&](int k) {
    return modes::I_kl_spectral(shape, k, 0).value / lead_I_k0(shape, k);
  };
  CHECK(std::abs(ratio_k(32) - 1.0) < std::abs(ratio_k(8) - 1.0));
  CHECK(std::abs(ratio_k(32) - 1.0) < 0.01);
  auto ratio_l = [&](int l) {
    return modes::I_kl_spectral(shape, 0, l).value / lead_I_l(shape, l);
  };
  CHECK(std::abs(ratio_l(32) - 1.0) < std::abs(ratio_l(8) - 1.0));
  CHECK(std::abs(ratio_l(32) - 1.0) < 0.01);
}

TEST_CASE("certify_signs on short scans") {
  const TorusShape shape(0.5, 1.0);
  quad::QuadratureSpec spec;
  auto result = certify_signs(shape, 16, 16, spec, {0, 3});
  const auto& pos = result.positive_axis;
  CHECK(pos.axis == ScanAxis::k_axis_l0);
  CHECK(pos.certified);
  CHECK(pos.threshold >= 1);
  CHECK(pos.indices.size() == 16);
  for (std::size_t i = 0; i < pos.indices.size(); ++i)
    if (static_cast<int>(pos.indices[i]) >= pos.threshold) {
      CHECK(pos.values[i] > 0.0);
      CHECK(pos.margins[i] >= 3.0);
    }
  REQUIRE(result.negative_axes.size() == 2);
  for (const auto& neg : result.negative_axes) {
    CHECK(neg.axis == ScanAxis::l_axis_fixed_k);
    CHECK(neg.certified);
    for (std::size_t i = 0; i < neg.indices.size(); ++i)
      if (static_cast<int>(neg.indices[i]) >= neg.threshold)
        CHECK(neg.values[i] < 0.0);
  }
  // k = 0 flips sign immediately; k = 3 takes until l-hat = 5.
  CHECK(result.negative_axes[0].threshold == 1);
  CHECK(result.negative_axes[1].threshold == 5);
  CHECK_THROWS_AS(certify_signs(shape, 4, 16, spec, {0}),
                  std::invalid_argument);
}
