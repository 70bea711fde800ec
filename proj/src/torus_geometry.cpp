#include "nptorus/torus_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nptorus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Below this value of mu - cos the kernels are treated as coincident and
// rejected; singular handling belongs to the quadrature layer.
constexpr double kCoincidentCutoff = 1e-13;
}  // namespace

double reduce_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

TorusShape::TorusShape(double xi, double R0) : xi_(xi), R0_(R0) {
  if (!(xi > 0.0) || !(xi < 1.0))
    throw std::invalid_argument("TorusShape: xi must lie in (0, 1)");
  if (!(R0 > 0.0)) throw std::invalid_argument("TorusShape: R0 must be > 0");
}

double TorusShape::major_radius() const {
  return R0_ / std::sqrt(1.0 - xi_ * xi_);
}

double TorusShape::minor_radius() const {
  return xi_ * R0_ / std::sqrt(1.0 - xi_ * xi_);
}

SurfacePoint::SurfacePoint(double eta_in, double phi_in)
    : eta(reduce_angle(eta_in)), phi(reduce_angle(phi_in)) {}

double psi(const TorusShape& shape, double eta) {
  return 1.0 - shape.xi() * std::cos(eta);
}

double mu(const TorusShape& shape, double dphi) {
  const double inv_xi2 = 1.0 / (shape.xi() * shape.xi());
  return inv_xi2 + (1.0 - inv_xi2) * std::cos(dphi);
}

double mu_minus_cos(const TorusShape& shape, double dphi, double deta) {
  const double inv_xi2 = 1.0 / (shape.xi() * shape.xi());
  const double sp = std::sin(0.5 * dphi);
  const double se = std::sin(0.5 * deta);
  return 2.0 * (inv_xi2 - 1.0) * sp * sp + 2.0 * se * se;
}

Vec3 to_cartesian(const TorusShape& shape, const SurfacePoint& p) {
  const double xi = shape.xi();
  const double rho = shape.R0() * std::sqrt(1.0 - xi * xi) / psi(shape, p.eta);
  return {rho * std::cos(p.phi), rho * std::sin(p.phi),
          -shape.R0() * xi * std::sin(p.eta) / psi(shape, p.eta)};
}

ScaleFactors scale_factors(const TorusShape& shape, const SurfacePoint& p) {
  const double xi = shape.xi();
  const double ps = psi(shape, p.eta);
  const double root = std::sqrt(1.0 - xi * xi);
  return {shape.R0() / (root * ps), shape.R0() * xi / ps,
          shape.R0() * root / ps};
}

Vec3 outward_normal(const TorusShape& shape, const SurfacePoint& p) {
  const double xi = shape.xi();
  const double ps = psi(shape, p.eta);
  const double radial = (std::cos(p.eta) - xi) / ps;
  return {radial * std::cos(p.phi), radial * std::sin(p.phi),
          -std::sqrt(1.0 - xi * xi) * std::sin(p.eta) / ps};
}

double surface_element(const TorusShape& shape, double eta) {
  const double xi = shape.xi();
  const double ps = psi(shape, eta);
  return shape.R0() * shape.R0() * xi * std::sqrt(1.0 - xi * xi) / (ps * ps);
}

double kernel_single(const TorusShape& shape, double eta, double eta_p,
                     double dphi) {
  const double xi = shape.xi();
  const double den = mu_minus_cos(shape, dphi, eta - eta_p);
  if (den < kCoincidentCutoff)
    throw std::domain_error("kernel_single: coincident points");
  const double pse = psi(shape, eta);
  const double psep = psi(shape, eta_p);
  return shape.R0() * std::sqrt(1.0 - xi * xi) * std::sqrt(pse) /
         (4.0 * std::numbers::pi * std::sqrt(2.0) * psep * std::sqrt(psep) *
          std::sqrt(den));
}

double kernel_np(const TorusShape& shape, double eta, double eta_p,
                 double dphi) {
  const double xi = shape.xi();
  const double den = mu_minus_cos(shape, dphi, eta - eta_p);
  if (den < kCoincidentCutoff)
    throw std::domain_error("kernel_np: coincident points");
  const double pse = psi(shape, eta);
  const double psep = psi(shape, eta_p);
  const double pre = (1.0 - xi * xi) /
                     (8.0 * std::numbers::pi * std::sqrt(2.0) * xi);
  const double ratio = std::sqrt(pse) / (psep * std::sqrt(psep));
  const double sp = std::sin(0.5 * dphi);
  const double one_minus_cos = 2.0 * sp * sp;
  return pre * ratio / std::sqrt(den) -
         (pre / (xi * xi)) * ratio * pse * one_minus_cos /
             (den * std::sqrt(den));
}

}  // namespace nptorus
