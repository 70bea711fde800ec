#pragma once

#include <string>

#include "nptorus/quadrature.hpp"
#include "nptorus/torus_geometry.hpp"

namespace nptorus::modes {

struct ModeIndex {
  int k = 0;  // toroidal Fourier index
  int l = 0;  // poloidal Fourier index
};

enum class SignVerdict { positive, negative, indeterminate };

std::string to_string(SignVerdict v);

struct RealIntegral {
  double value = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// I_{k,l}(xi) computed by the available routes, with the leading asymptotic
/// prediction (when one applies) and the certified sign.
struct NumericalRangeRecord {
  double xi = 0.0;
  int k = 0;
  int l = 0;
  double s_kl = 0.0;
  double ds_kl = 0.0;
  double I_spectral = 0.0;
  double I_direct = 0.0;
  double I_polar = 0.0;
  bool has_direct = false;
  bool has_polar = false;
  double lead_pred = 0.0;
  bool has_lead = false;
  SignVerdict sign_verdict = SignVerdict::indeterminate;
  double err_estimate = 0.0;
  bool converged = false;
};

enum class RangeMethod { spectral, direct, polar, all };

/// Guards shared by every mode integral: desk-scale xi and bounded Fourier
/// indices (oscillatory factors are integrated directly, no Filon scheme).
void validate_mode_arguments(const TorusShape& shape, int k, int l);

/// s_k(eta): the toroidal Fourier transform of the reduced single-layer
/// kernel. Log-singular at eta = 0 (mod 2*pi), which is rejected.
double s_k_eta(const TorusShape& shape, int k, double eta,
               const quad::QuadratureSpec& spec = {});

/// s_{k,l}(xi): double Fourier coefficient of (mu(phi) - cos eta)^{-1/2}.
RealIntegral s_kl(const TorusShape& shape, int k, int l,
                  const quad::QuadratureSpec& spec = {});

/// s'_{k,l}(xi) by differentiation under the integral:
///   (1/xi^3) iint (1 - cos phi) e^{-ik phi} e^{-il eta}
///            (mu(phi) - cos eta)^{-3/2} deta dphi.
RealIntegral ds_kl(const TorusShape& shape, int k, int l,
                   const quad::QuadratureSpec& spec = {});

/// Fourier coefficient of 1/psi: c_m = beta^|m| / sqrt(1 - xi^2) with
/// beta = (1 - sqrt(1 - xi^2)) / xi.
double c_m(const TorusShape& shape, int m);

RealIntegral I_kl_spectral(const TorusShape& shape, int k, int l,
                           const quad::QuadratureSpec& spec = {});

/// The explicit double integral for I_{k,l} over [-pi, pi]^2.
RealIntegral I_kl_direct(const TorusShape& shape, int k, int l,
                         const quad::QuadratureSpec& spec = {});

/// Radial boundary R(theta) of the square (-pi,pi)^2 in polar coordinates.
double R_theta(double theta);

/// Polar-form amplitude h(r, theta); smooth across r = 0.
double h_eval(const TorusShape& shape, double r, double theta);

/// I_{k,l} in polar form: (1/2) iint h(r,theta) e^{-ikr cos theta}
/// e^{-ilr sin theta} dr dtheta with |r| < R(theta).
RealIntegral I_kl_polar(const TorusShape& shape, int k, int l,
                        const quad::QuadratureSpec& spec = {});

/// Full record for one (xi, k, l): spectral route always, the other routes
/// per `method`; sign certified only when |I| exceeds 3x its error estimate.
NumericalRangeRecord evaluate_range_record(const TorusShape& shape, int k,
                                           int l, RangeMethod method,
                                           const quad::QuadratureSpec& spec =
                                               {});

}  // namespace nptorus::modes
