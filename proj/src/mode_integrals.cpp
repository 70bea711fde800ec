#include "nptorus/mode_integrals.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace nptorus::modes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxModeIndex = 512;

using Complex = std::complex<double>;

Complex unit_phase(double arg) {  // e^{-i*arg}
  return {std::cos(arg), -std::sin(arg)};
}

RealIntegral finish(const quad::QuadResult& q,
                    const quad::QuadratureSpec& spec) {
  RealIntegral r;
  r.value = q.value.real();
  r.err_estimate = q.err_estimate;
  r.evaluations = q.evaluations;
  // Imaginary parts vanish by evenness; a visible residue flags a broken
  // quadrature rather than a property of the integrand.
  const double imag_bound =
      10.0 * std::max(q.err_estimate, spec.abs_tol) + 1e-13 * std::abs(r.value);
  r.converged = q.converged && std::abs(q.value.imag()) <= imag_bound;
  return r;
}

double lead_pred_for(const TorusShape& shape, int k, int l) {
  const double xi = shape.xi();
  const double root = std::sqrt(1.0 - xi * xi);
  if (l != 0)
    return -2.0 * std::sqrt(2.0) * kPi * xi * (1.0 - root) /
           ((1.0 - xi * xi) * std::abs(l));
  return 2.0 * std::sqrt(2.0) * kPi / std::abs(k);  // l == 0, k != 0
}

}  // namespace

std::string to_string(SignVerdict v) {
  switch (v) {
    case SignVerdict::positive: return "positive";
    case SignVerdict::negative: return "negative";
    default: return "indeterminate";
  }
}

void validate_mode_arguments(const TorusShape& shape, int k, int l) {
  if (shape.xi() < 0.05 || shape.xi() > 0.99)
    throw std::domain_error(
        "mode integrals: xi outside the supported range [0.05, 0.99]");
  if (std::abs(k) > kMaxModeIndex || std::abs(l) > kMaxModeIndex)
    throw std::domain_error("mode integrals: |k|, |l| must be <= 512");
}

double s_k_eta(const TorusShape& shape, int k, double eta,
               const quad::QuadratureSpec& spec) {
  validate_mode_arguments(shape, k, 0);
  const double se = std::sin(0.5 * reduce_angle(eta));
  const double eta_term = 2.0 * se * se;
  if (eta_term < 1e-13)
    throw std::domain_error("s_k_eta: eta = 0 (mod 2*pi) is log-singular");
  const double xi = shape.xi();
  const double cphi = 1.0 / (xi * xi) - 1.0;
  auto q = quad::integrate_singular_periodic(
      [&](double phi) -> Complex {
        const double sp = std::sin(0.5 * phi);
        return unit_phase(k * phi) /
               std::sqrt(2.0 * cphi * sp * sp + eta_term);
      },
      0.0, quad::SingularityClass::inv_sqrt, spec);
  return finish(q, spec).value;
}

RealIntegral s_kl(const TorusShape& shape, int k, int l,
                  const quad::QuadratureSpec& spec) {
  validate_mode_arguments(shape, k, l);
  const double xi = shape.xi();
  const double cphi = 1.0 / (xi * xi) - 1.0;
  auto q = quad::integrate_2d(
      [&](double eta, double phi) -> Complex {
        const double sp = std::sin(0.5 * phi);
        const double se = std::sin(0.5 * eta);
        const double d = 2.0 * cphi * sp * sp + 2.0 * se * se;
        return unit_phase(k * phi + l * eta) / std::sqrt(d);
      },
      spec, std::array<double, 2>{0.0, 0.0});
  return finish(q, spec);
}

RealIntegral ds_kl(const TorusShape& shape, int k, int l,
                   const quad::QuadratureSpec& spec) {
  validate_mode_arguments(shape, k, l);
  const double xi = shape.xi();
  const double cphi = 1.0 / (xi * xi) - 1.0;
  const double scale = 1.0 / (xi * xi * xi);
  auto q = quad::integrate_2d(
      [&](double eta, double phi) -> Complex {
        const double sp = std::sin(0.5 * phi);
        const double se = std::sin(0.5 * eta);
        const double d = 2.0 * cphi * sp * sp + 2.0 * se * se;
        return (2.0 * sp * sp) * unit_phase(k * phi + l * eta) /
               (d * std::sqrt(d));
      },
      spec, std::array<double, 2>{0.0, 0.0});
  RealIntegral r = finish(q, spec);
  r.value *= scale;
  r.err_estimate *= scale;
  return r;
}

double c_m(const TorusShape& shape, int m) {
  const double xi = shape.xi();
  const double root = std::sqrt(1.0 - xi * xi);
  const double beta = (1.0 - root) / xi;
  return std::pow(beta, std::abs(m)) / root;
}

RealIntegral I_kl_spectral(const TorusShape& shape, int k, int l,
                           const quad::QuadratureSpec& spec) {
  const RealIntegral s = s_kl(shape, k, l, spec);
  const RealIntegral ds = ds_kl(shape, k, l, spec);
  const double xi = shape.xi();
  const double factor = xi * std::sqrt(1.0 - xi * xi);
  RealIntegral r;
  r.value = s.value - factor * ds.value;
  r.err_estimate = s.err_estimate + factor * ds.err_estimate;
  r.evaluations = s.evaluations + ds.evaluations;
  r.converged = s.converged && ds.converged;
  return r;
}

RealIntegral I_kl_direct(const TorusShape& shape, int k, int l,
                         const quad::QuadratureSpec& spec) {
  validate_mode_arguments(shape, k, l);
  const double xi = shape.xi();
  const double xi2 = xi * xi;
  const double root = std::sqrt(1.0 - xi2);
  const double a_phi = 1.0 - xi2 - root;  // coefficient of (1 - cos phi)
  const double cphi = 1.0 / xi2 - 1.0;
  auto q = quad::integrate_2d(
      [&](double eta, double phi) -> Complex {
        const double sp = std::sin(0.5 * phi);
        const double se = std::sin(0.5 * eta);
        const double d = 2.0 * cphi * sp * sp + 2.0 * se * se;
        const double num =
            a_phi * 2.0 * sp * sp + xi2 * 2.0 * se * se;
        return num * unit_phase(k * phi + l * eta) /
               (xi2 * d * std::sqrt(d));
      },
      spec, std::array<double, 2>{0.0, 0.0});
  return finish(q, spec);
}

double R_theta(double theta) {
  const double c = std::abs(std::cos(theta));
  const double s = std::abs(std::sin(theta));
  return kPi / std::max(c, s);
}

double h_eval(const TorusShape& shape, double r, double theta) {
  const double xi = shape.xi();
  const double xi2 = xi * xi;
  const double root = std::sqrt(1.0 - xi2);
  const double a_phi = 1.0 - xi2 - root;
  if (std::abs(r) < 1e-7) {
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = 1.0 - c2;
    const double den = (1.0 - xi2) * c2 + xi2 * s2;
    return std::sqrt(2.0) * (xi * a_phi * c2 + xi2 * xi * s2) /
           (den * std::sqrt(den));
  }
  const double phi = r * std::cos(theta);
  const double eta = r * std::sin(theta);
  const double sp = std::sin(0.5 * phi);
  const double se = std::sin(0.5 * eta);
  const double d = 2.0 * (1.0 / xi2 - 1.0) * sp * sp + 2.0 * se * se;
  const double num = a_phi * 2.0 * sp * sp + xi2 * 2.0 * se * se;
  return std::abs(r) * num / (xi2 * d * std::sqrt(d));
}

RealIntegral I_kl_polar(const TorusShape& shape, int k, int l,
                        const quad::QuadratureSpec& spec) {
  validate_mode_arguments(shape, k, l);
  // The square boundary R(theta) has kinks at odd multiples of pi/4; the
  // theta integral is split there.
  static constexpr double kEdges[] = {-kPi, -0.75 * kPi, -0.25 * kPi,
                                      0.25 * kPi, 0.75 * kPi, kPi};
  double inner_err = 0.0;
  bool all_ok = true;
  long evals = 0;
  Complex total{0.0, 0.0};
  double outer_err = 0.0;
  for (int panel = 0; panel + 1 < 6; ++panel) {
    auto q = quad::integrate_interval(
        [&](double theta) -> Complex {
          const double R = R_theta(theta);
          const double freq = k * std::cos(theta) + l * std::sin(theta);
          auto inner = quad::integrate_interval(
              [&](double r) -> Complex {
                return h_eval(shape, r, theta) * unit_phase(freq * r);
              },
              -R, R, spec);
          inner_err = std::max(inner_err, inner.err_estimate);
          all_ok = all_ok && inner.converged;
          evals += inner.evaluations;
          return inner.value;
        },
        kEdges[panel], kEdges[panel + 1], spec);
    total += q.value;
    outer_err += q.err_estimate;
    all_ok = all_ok && q.converged;
  }
  quad::QuadResult q;
  q.value = 0.5 * total;
  q.err_estimate = 0.5 * (outer_err + 2.0 * kPi * inner_err);
  q.evaluations = evals;
  q.converged = all_ok;
  return finish(q, spec);
}

NumericalRangeRecord evaluate_range_record(const TorusShape& shape, int k,
                                           int l, RangeMethod method,
                                           const quad::QuadratureSpec& spec) {
  NumericalRangeRecord rec;
  rec.xi = shape.xi();
  rec.k = k;
  rec.l = l;

  const RealIntegral s = s_kl(shape, k, l, spec);
  const RealIntegral ds = ds_kl(shape, k, l, spec);
  const double factor = shape.xi() * std::sqrt(1.0 - shape.xi() * shape.xi());
  rec.s_kl = s.value;
  rec.ds_kl = ds.value;
  rec.I_spectral = s.value - factor * ds.value;
  rec.err_estimate = s.err_estimate + factor * ds.err_estimate;
  rec.converged = s.converged && ds.converged;

  if (method == RangeMethod::direct || method == RangeMethod::all) {
    const RealIntegral d = I_kl_direct(shape, k, l, spec);
    rec.I_direct = d.value;
    rec.has_direct = true;
    rec.converged = rec.converged && d.converged;
    rec.err_estimate = std::max(rec.err_estimate, d.err_estimate);
  }
  if (method == RangeMethod::polar || method == RangeMethod::all) {
    const RealIntegral p = I_kl_polar(shape, k, l, spec);
    rec.I_polar = p.value;
    rec.has_polar = true;
    rec.converged = rec.converged && p.converged;
    rec.err_estimate = std::max(rec.err_estimate, p.err_estimate);
  }

  if (k != 0 || l != 0) {
    rec.lead_pred = lead_pred_for(shape, k, l);
    rec.has_lead = true;
  }

  const double margin_err = std::max(rec.err_estimate, spec.abs_tol);
  if (rec.converged && std::abs(rec.I_spectral) > 3.0 * margin_err)
    rec.sign_verdict = rec.I_spectral > 0.0 ? SignVerdict::positive
                                            : SignVerdict::negative;
  return rec;
}

}  // namespace nptorus::modes
