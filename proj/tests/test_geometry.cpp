#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nptorus/torus_geometry.hpp"
#include "oracles.hpp"

using namespace nptorus;
namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

TEST_CASE("reduce_angle maps into [0, 2pi)") {
  CHECK(reduce_angle(0.0) == doctest::Approx(0.0));
  CHECK(reduce_angle(kTwoPi) == doctest::Approx(0.0));
  CHECK(reduce_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(reduce_angle(7.0 * kPi) == doctest::Approx(kPi));
  CHECK(reduce_angle(-6.0 * kTwoPi + 1.25) == doctest::Approx(1.25));
  for (double a : {-1e8, -3.7, 0.1, 9.9, 1e8}) {
    const double r = reduce_angle(a);
    CHECK(r >= 0.0);
    CHECK(r < kTwoPi);
    CHECK(std::abs(std::sin(r) - std::sin(a)) < 1e-7);
  }
}

TEST_CASE("TorusShape validates its parameters") {
  CHECK_THROWS_AS(TorusShape(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusShape(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusShape(-0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusShape(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusShape(0.5, -2.0), std::invalid_argument);
  CHECK_NOTHROW(TorusShape(0.5, 1.0));
}

TEST_CASE("major/minor radii recover the defining relations") {
  const TorusShape shape(0.5, 1.0);
  const double r0 = shape.major_radius();
  const double a = shape.minor_radius();
  // R0 = sqrt(r0^2 - a^2) and xi = a / r0.
  CHECK(std::sqrt(r0 * r0 - a * a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a / r0 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("embedding lands on the circular torus of radii (r0, a)") {
  for (double xi : {0.2, 0.5, 0.9}) {
    const TorusShape shape(xi, 1.3);
    const double r0 = shape.major_radius();
    const double a = shape.minor_radius();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    for (int i = 0; i < 50; ++i) {
      const SurfacePoint p(ang(rng), ang(rng));
      const Vec3 x = to_cartesian(shape, p);
      const double rho = std::hypot(x[0], x[1]);
      const double d = std::hypot(rho - r0, x[2]);
      CHECK(d == doctest::Approx(a).epsilon(1e-13));
    }
  }
}

TEST_CASE("embedding matches the independent oracle") {
  const TorusShape shape(0.7, 2.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    const double eta = ang(rng), phi = ang(rng);
    const Vec3 x = to_cartesian(shape, SurfacePoint(eta, phi));
    const oracle::Xyz y = oracle::embed(0.7, 2.0, eta, phi);
    CHECK(x[0] == doctest::Approx(y.x).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(y.y).epsilon(1e-14));
    CHECK(x[2] == doctest::Approx(y.z).epsilon(1e-14));
  }
}

TEST_CASE("outward normal: unit length, matches finite-difference tangents") {
  const TorusShape shape(0.5, 1.0);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const double eta = ang(rng), phi = ang(rng);
    const Vec3 nu = outward_normal(shape, SurfacePoint(eta, phi));
    const double len = std::sqrt(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]);
    CHECK(len == doctest::Approx(1.0).epsilon(1e-13));
    oracle::Xyz ref = oracle::fd_normal(0.5, 1.0, eta, phi);
    // Fix the oracle's orientation using the ray from the torus core circle.
    const Vec3 x = to_cartesian(shape, SurfacePoint(eta, phi));
    const double rho = std::hypot(x[0], x[1]);
    const double r0 = shape.major_radius();
    const oracle::Xyz out{(rho - r0) * x[0] / rho, (rho - r0) * x[1] / rho,
                          x[2]};
    if (ref.x * out.x + ref.y * out.y + ref.z * out.z < 0.0)
      ref = {-ref.x, -ref.y, -ref.z};
    CHECK(nu[0] == doctest::Approx(ref.x).epsilon(1e-8));
    CHECK(nu[1] == doctest::Approx(ref.y).epsilon(1e-8));
    CHECK(nu[2] == doctest::Approx(ref.z).epsilon(1e-8));
  }
}

TEST_CASE("surface element integrates to the triangulated mesh area") {
  const TorusShape shape(0.5, 1.0);
  // Midpoint sum of h_eta * h_phi over the parameter square.
  const int n = 512;
  double area = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      area += surface_element(shape, kTwoPi * (i + 0.5) / n);
  area *= (kTwoPi / n) * (kTwoPi / n);
  // Mesh areas converge from below at second order; extrapolate once.
  const double a1 = oracle::mesh_area(0.5, 1.0, 256);
  const double a2 = oracle::mesh_area(0.5, 1.0, 512);
  const double mesh = (4.0 * a2 - a1) / 3.0;
  CHECK(area == doctest::Approx(mesh).epsilon(1e-8));
  // Pappus: area of a circular torus is 4 pi^2 r0 a.
  const double pappus =
      4.0 * kPi * kPi * shape.major_radius() * shape.minor_radius();
  CHECK(area == doctest::Approx(pappus).epsilon(1e-10));
}

TEST_CASE("mu_minus_cos equals the naive expression away from coincidence") {
  const TorusShape shape(0.3, 1.0);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ang(0.3, kTwoPi - 0.3);
  for (int i = 0; i < 50; ++i) {
    const double dphi = ang(rng), deta = ang(rng);
    const double naive = mu(shape, dphi) - std::cos(deta);
    CHECK(mu_minus_cos(shape, dphi, deta) ==
          doctest::Approx(naive).epsilon(1e-13));
  }
}

TEST_CASE("mu_minus_cos stays positive and accurate near coincidence") {
  const TorusShape shape(0.5, 1.0);
  for (double d : {1e-4, 1e-7, 1e-10, 1e-13}) {
    const double v = mu_minus_cos(shape, d, d);
    // Leading order: (1/xi^2 - 1) d^2 + d^2 / 2 + ... = (3 + 0.5) d^2.
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(3.5 * d * d).epsilon(1e-6));
  }
}

TEST_CASE("fundamental solution factorizes through mu_minus_cos") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (double xi : {0.2, 0.5, 0.8}) {
    const TorusShape shape(xi, 1.0);
    for (int i = 0; i < 60; ++i) {
      const double eta = ang(rng), eta_p = ang(rng);
      const double phi = ang(rng), phi_p = ang(rng);
      if (mu_minus_cos(shape, phi - phi_p, eta - eta_p) < 1e-4) continue;
      const double d = oracle::dist(oracle::embed(xi, 1.0, eta, phi),
                                    oracle::embed(xi, 1.0, eta_p, phi_p));
      const double lhs = 1.0 / (4.0 * kPi * d);
      const double rhs =
          std::sqrt(psi(shape, eta) * psi(shape, eta_p)) /
          (4.0 * kPi * std::sqrt(2.0) * xi *
           std::sqrt(mu_minus_cos(shape, phi - phi_p, eta - eta_p)));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-layer kernel: positivity, symmetry, and oracle value") {
  const TorusShape shape(0.5, 1.0);
  // Reference: Gamma(x - y) * h_eta(eta') * h_phi(eta') assembled from the
  // Cartesian oracle.
  auto reference = [&](double eta, double eta_p, double dphi) {
    const double d = oracle::dist(oracle::embed(0.5, 1.0, eta, 0.0),
                                  oracle::embed(0.5, 1.0, eta_p, -dphi));
    return surface_element(shape, eta_p) / (4.0 * kPi * d);
  };
  CHECK(kernel_single(shape, 0.0, kPi, kPi) ==
        doctest::Approx(0.0066314559621623057).epsilon(1e-12));
  CHECK(kernel_single(shape, 0.0, kPi, kPi) ==
        doctest::Approx(reference(0.0, kPi, kPi)).epsilon(1e-12));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const double eta = ang(rng), eta_p = ang(rng), dphi = ang(rng);
    if (mu_minus_cos(shape, dphi, eta - eta_p) < 1e-4) continue;
    const double v = kernel_single(shape, eta, eta_p, dphi);
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(reference(eta, eta_p, dphi)).epsilon(1e-12));
    CHECK(v ==
          doctest::Approx(kernel_single(shape, eta, eta_p, -dphi))
              .epsilon(1e-14));
  }
}

TEST_CASE("NP kernel matches the Cartesian double-layer oracle") {
  const TorusShape shape(0.5, 1.0);
  // Reference: [(x - y) . nu_x / (4 pi |x - y|^3)] * h_eta(eta') h_phi(eta').
  auto reference = [&](double eta, double eta_p, double dphi) {
    const oracle::Xyz x = oracle::embed(0.5, 1.0, eta, 0.0);
    const oracle::Xyz y = oracle::embed(0.5, 1.0, eta_p, -dphi);
    const Vec3 nu = outward_normal(shape, SurfacePoint(eta, 0.0));
    const double dx = x.x - y.x, dy = x.y - y.y, dz = x.z - y.z;
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double dot = dx * nu[0] + dy * nu[1] + dz * nu[2];
    return dot / (4.0 * kPi * r * r * r) * surface_element(shape, eta_p);
  };
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    const double eta = ang(rng), eta_p = ang(rng), dphi = ang(rng);
    if (mu_minus_cos(shape, dphi, eta - eta_p) < 1e-3) continue;
    CHECK(kernel_np(shape, eta, eta_p, dphi) ==
          doctest::Approx(reference(eta, eta_p, dphi)).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("kernels refuse coincident points") {
  const TorusShape shape(0.5, 1.0);
  CHECK_THROWS_AS(kernel_single(shape, 1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kernel_np(shape, 1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kernel_np(shape, 1.0, 1.0 + 1e-9, 1e-9), std::domain_error);
}
