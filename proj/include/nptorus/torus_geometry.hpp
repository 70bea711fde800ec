#pragma once

#include <array>

namespace nptorus {

using Vec3 = std::array<double, 3>;

/// Reduce an angle to [0, 2*pi). A tie at 2*pi maps to 0.
double reduce_angle(double a);

/// Torus xi = const in toroidal coordinates, constructed from the
/// dimensionless parameter xi in (0,1) and the poloidal-axis radius R0 > 0.
/// The major/minor radii (r0, a) are derived quantities.
class TorusShape {
 public:
  TorusShape(double xi, double R0);

  double xi() const { return xi_; }
  double R0() const { return R0_; }

  double major_radius() const;  // r0 = R0 / sqrt(1 - xi^2)
  double minor_radius() const;  // a  = xi * R0 / sqrt(1 - xi^2)

 private:
  double xi_;
  double R0_;
};

/// Point on the torus surface, angles stored reduced to [0, 2*pi).
struct SurfacePoint {
  SurfacePoint(double eta_in, double phi_in);
  double eta;
  double phi;
};

struct ScaleFactors {
  double h_xi;
  double h_eta;
  double h_phi;
};

double psi(const TorusShape& shape, double eta);
double mu(const TorusShape& shape, double dphi);

/// mu(dphi) - cos(deta), evaluated as
///   2*(1/xi^2 - 1)*sin^2(dphi/2) + 2*sin^2(deta/2)
/// which stays accurate near the coincident-point singularity.
double mu_minus_cos(const TorusShape& shape, double dphi, double deta);

Vec3 to_cartesian(const TorusShape& shape, const SurfacePoint& p);
ScaleFactors scale_factors(const TorusShape& shape, const SurfacePoint& p);
Vec3 outward_normal(const TorusShape& shape, const SurfacePoint& p);

/// Surface measure factor: dsigma = h_eta * h_phi deta dphi.
double surface_element(const TorusShape& shape, double eta);

/// Single-layer kernel s(eta, eta'; dphi). Throws std::domain_error at
/// (near-)coincident points.
double kernel_single(const TorusShape& shape, double eta, double eta_p,
                     double dphi);

/// NP kernel k(eta, eta'; dphi), the two-term toroidal form. Throws
/// std::domain_error at (near-)coincident points.
double kernel_np(const TorusShape& shape, double eta, double eta_p,
                 double dphi);

}  // namespace nptorus
