#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

namespace nptorus::quad {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_levels = 22;
  double grading_exponent = 3.0;

  bool valid() const {
    return rel_tol > 0.0 && rel_tol <= 1e-2 && abs_tol > 0.0 &&
           max_levels >= 4 && grading_exponent >= 1.0;
  }
  void require_valid() const {
    if (!valid()) throw std::invalid_argument("QuadratureSpec out of range");
  }
  double tolerance_for(double magnitude) const {
    return std::max(rel_tol * magnitude, abs_tol);
  }
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double err_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;

  double real() const { return value.real(); }
};

enum class SingularityClass { none, inv_sqrt, log_type };

namespace detail {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// tanh-sinh abscissa for parameter t on [a, b]: position is encoded by the
// distance to the nearer endpoint so that graded evaluation keeps full
// precision arbitrarily close to a singular endpoint.
struct TsNode {
  double x;       // abscissa
  double weight;  // includes the interval half-length, excludes h
};

inline TsNode ts_node(double a, double b, double t) {
  const double half = 0.5 * (b - a);
  const double u = 0.5 * kPi * std::sinh(t);
  // 1 -/+ tanh(u) without cancellation
  const double e = std::exp(-2.0 * std::abs(u));
  const double dist = half * 2.0 * e / (1.0 + e);  // distance to endpoint
  const double x = (t >= 0.0) ? b - dist : a + dist;
  const double sech = 2.0 * std::exp(-std::abs(u)) / (1.0 + e);
  const double w = half * 0.5 * kPi * std::cosh(t) * sech * sech;
  return {x, w};
}

// Generic tanh-sinh integration on (a, b). Handles integrable endpoint
// singularities; f may return non-finite values within ~1e-290 of an
// endpoint, which are dropped.
template <class F>
QuadResult tanh_sinh(F&& f, double a, double b, const QuadratureSpec& spec) {
  QuadResult res;
  const int max_level = std::min(spec.max_levels, 12);
  const double t_cut = 6.5;  // weights underflow far before this

  auto term = [&](double t) -> std::complex<double> {
    TsNode n = ts_node(a, b, t);
    if (n.weight <= 0.0 || !(std::abs(n.x - a) > 0.0) ||
        !(std::abs(b - n.x) > 0.0))
      return {0.0, 0.0};
    std::complex<double> v = f(n.x);
    ++res.evaluations;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return {0.0, 0.0};
    return n.weight * v;
  };

  double h = 1.0;
  std::complex<double> sum = term(0.0);
  for (double t = h; t <= t_cut; t += h) sum += term(t) + term(-t);
  std::complex<double> integral = sum * h;

  double prev_diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    std::complex<double> add{0.0, 0.0};
    for (double t = h; t <= t_cut; t += 2.0 * h) add += term(t) + term(-t);
    const std::complex<double> next = 0.5 * integral + h * add;
    const double diff = std::abs(next - integral);
    integral = next;
    res.err_estimate = diff;
    const double tol = spec.tolerance_for(std::abs(integral));
    if (level >= 2 && diff <= tol &&
        prev_diff <= std::max(1e3 * tol, 1e-3 * std::abs(integral) + tol)) {
      res.converged = true;
      break;
    }
    prev_diff = diff;
  }
  res.value = integral;
  return res;
}

}  // namespace detail

/// Trapezoid rule with doubling on [0, 2*pi); spectrally accurate for smooth
/// periodic integrands.
template <class F>
QuadResult integrate_periodic(F&& f, const QuadratureSpec& spec) {
  spec.require_valid();
  QuadResult res;
  int n = 16;
  std::complex<double> sum{0.0, 0.0};
  for (int j = 0; j < n; ++j) sum += f(detail::kTwoPi * j / n);
  res.evaluations = n;
  std::complex<double> integral = sum * (detail::kTwoPi / n);

  double prev_diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= spec.max_levels; ++level) {
    std::complex<double> add{0.0, 0.0};
    const double h = detail::kTwoPi / (2 * n);
    for (int j = 0; j < n; ++j) add += f(h * (2 * j + 1));
    res.evaluations += n;
    n *= 2;
    const std::complex<double> next = 0.5 * integral + (detail::kTwoPi / n) * add;
    const double diff = std::abs(next - integral);
    integral = next;
    res.err_estimate = diff;
    const double tol = spec.tolerance_for(std::abs(integral));
    if (diff <= tol &&
        prev_diff <= std::max(1e3 * tol, 1e-3 * std::abs(integral) + tol)) {
      res.converged = true;
      break;
    }
    prev_diff = diff;
    if (n > (1 << 22)) break;
  }
  res.value = integral;
  return res;
}

/// Periodic integrand with one isolated integrable singularity (or sharp
/// integrable peak) at `singular_point`. The interval is folded about the
/// singular point and each half is graded with the spec's grading exponent,
/// then integrated by tanh-sinh.
template <class F>
QuadResult integrate_singular_periodic(F&& f, double singular_point,
                                       SingularityClass cls,
                                       const QuadratureSpec& spec) {
  spec.require_valid();
  if (cls == SingularityClass::none)
    return integrate_periodic(std::forward<F>(f), spec);

  const double c = singular_point;
  const double p = spec.grading_exponent;
  // v = pi * t^p maps [0,1] onto [0,pi], clustering at the singularity.
  // Distances below v_min are skipped: the excluded strip contributes below
  // 1e-16 for an integrable singularity, and letting the distance underflow
  // makes nested integrals ill-conditioned. A log-type singularity tolerates
  // a much earlier cutoff than an inverse-square-root one, which matters
  // when this routine supplies the outer variable of an iterated integral
  // whose inner peak width is set by v.
  const double v_min = (cls == SingularityClass::log_type) ? 1e-18 : 1e-30;
  auto graded = [&](double t) -> std::complex<double> {
    const double tp = std::pow(t, p);
    const double v = detail::kPi * tp;
    if (v < v_min) return {0.0, 0.0};
    const double jac = detail::kPi * p * tp / t;
    return (f(c + v) + f(c - v)) * jac;
  };
  return detail::tanh_sinh(graded, 0.0, 1.0, spec);
}

/// Plain finite-interval quadrature (tanh-sinh); endpoints may be weakly
/// singular.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b,
                              const QuadratureSpec& spec) {
  spec.require_valid();
  return detail::tanh_sinh(std::forward<F>(f), a, b, spec);
}

/// Iterated integration of f(eta, phi) over [0, 2*pi)^2. If a singular point
/// is given, the inner eta-integral is folded about its eta-coordinate (the
/// integrand is smooth there for phi away from the singularity, but sharply
/// peaked) and the outer phi-integral is treated as log-singular.
template <class F2>
QuadResult integrate_2d(F2&& f, const QuadratureSpec& spec,
                        std::optional<std::array<double, 2>> singular_point =
                            std::nullopt) {
  spec.require_valid();
  QuadResult total;
  if (!singular_point) {
    double inner_err = 0.0;
    bool inner_ok = true;
    long evals = 0;
    auto outer = integrate_periodic(
        [&](double phi) {
          auto r = integrate_periodic(
              [&](double eta) { return f(eta, phi); }, spec);
          inner_err = std::max(inner_err, r.err_estimate);
          inner_ok = inner_ok && r.converged;
          evals += r.evaluations;
          return r.value;
        },
        spec);
    total = outer;
    total.evaluations = evals;
    total.err_estimate = outer.err_estimate + detail::kTwoPi * inner_err;
    total.converged = outer.converged && inner_ok;
    return total;
  }

  const double eta0 = (*singular_point)[0];
  const double phi0 = (*singular_point)[1];
  double inner_err = 0.0;
  bool inner_ok = true;
  long evals = 0;
  auto outer = integrate_singular_periodic(
      [&](double phi) {
        auto r = integrate_singular_periodic(
            [&](double eta) { return f(eta, phi); }, eta0,
            SingularityClass::inv_sqrt, spec);
        inner_err = std::max(inner_err, r.err_estimate);
        inner_ok = inner_ok && r.converged;
        evals += r.evaluations;
        return r.value;
      },
      phi0, SingularityClass::log_type, spec);
  total = outer;
  total.evaluations = evals;
  total.err_estimate = outer.err_estimate + detail::kTwoPi * inner_err;
  total.converged = outer.converged && inner_ok;
  return total;
}

}  // namespace nptorus::quad
