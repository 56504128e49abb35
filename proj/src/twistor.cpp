#include "pinst/twistor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "pinst/errors.hpp"

namespace pinst {

namespace {
const Complex I{0.0, 1.0};
const double kSqrt3 = std::sqrt(3.0);

Vec3 tangent_numerator(double t, Complex lam) {
  // alpha^{-1}(T) * Delta in the X basis
  const double t2 = t * t;
  return {(2.0 / 3.0) * I * (t2 - 1.0) * (t2 - 9.0) * 0.5 * lam,
          -(2.0 / 3.0) * t * (t + 1.0) * (t - 3.0) * (lam * lam + 1.0),
          (2.0 / 3.0) * I * t * (t - 1.0) * (t + 3.0) * (1.0 - lam * lam)};
}

void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::DegenerateLine, "line parameter must lie in (0,1)");
}
}  // namespace

Mat3 alpha_matrix(Complex lam, Complex mu, Complex zeta) {
  Mat3 m;
  m.e = {{{-6.0 * lam, kSqrt3 * zeta, -kSqrt3 * lam * mu},
          {-2.0 * mu, Complex{kSqrt3, 0.0}, 2.0 * zeta - kSqrt3 * mu * mu},
          {-4.0 * zeta, 2.0 * mu, kSqrt3 * lam - kSqrt3 * mu * zeta}}};
  return m;
}

Vec3 to_x_basis(const Vec3& c) { return {-I * c[0], 0.5 * (c[1] - c[2]), 0.5 * I * (c[1] + c[2])}; }

Vec3 from_x_basis(const Vec3& c) { return {I * c[0], c[1] - I * c[2], -c[1] - I * c[2]}; }

Complex delta(double t, Complex lam) {
  const double t3 = t * t * t, b = t * t * t * t + 18.0 * t * t - 27.0;
  Complex l2 = lam * lam;
  return (8.0 * t3 * l2 * l2 - 2.0 * b * l2 + 8.0 * t3) / 3.0;
}

Complex delta_dlam(double t, Complex lam) {
  const double t3 = t * t * t, b = t * t * t * t + 18.0 * t * t - 27.0;
  return (32.0 * t3 * lam * lam * lam - 4.0 * b * lam) / 3.0;
}

Vec3 alpha_inv_tangent(double t, Complex lam) {
  Complex d = delta(t, lam);
  if (std::abs(d) <= 1e-13) throw Error(ErrorKind::OnDivisor, "point lies on the divisor");
  Vec3 c = tangent_numerator(t, lam);
  for (auto& v : c) v /= d;
  return c;
}

Vec3 alpha_inv_tangent_solve(double t, Complex lam) {
  Mat3 m = alpha_matrix(lam, lam * t / kSqrt3, Complex{t / kSqrt3, 0.0});
  Vec3 tangent{1.0, t / kSqrt3, 0.0};
  try {
    return to_x_basis(solve3(m, tangent));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::OnDivisor, "point lies on the divisor");
    throw;
  }
}

const char* to_string(PoleLabel p) {
  switch (p) {
    case PoleLabel::Zero: return "0";
    case PoleLabel::One: return "1";
    case PoleLabel::X: return "x";
    case PoleLabel::Infinity: return "inf";
  }
  return "?";
}

Complex Mobius::operator()(Complex z) const {
  Complex den = c * z + d;
  if (den == Complex{}) return {std::numeric_limits<double>::infinity(), 0.0};
  return (a * z + b) / den;
}

Complex Mobius::derivative(Complex z) const {
  Complex den = c * z + d;
  return (a * d - b * c) / (den * den);
}

Complex line_sqrt(double mu) {
  if (mu >= 0.0) return {std::sqrt(mu), 0.0};
  return {0.0, -std::sqrt(-mu)};
}

LineGeometry poles(double t) {
  check_t(t);
  const double t3 = t * t * t, b = t * t * t * t + 18.0 * t * t - 27.0;
  const double r = std::sqrt((t * t - 1.0) * std::pow(t * t - 9.0, 3));
  LineGeometry g;
  g.t = t;
  // b < 0 on (0,1): b - r has no cancellation; mu_+ = 8t^3/(b - r) = (b + r)/(8t^3)
  g.mu_minus = (b - r) / (8.0 * t3);
  g.mu_plus = 8.0 * t3 / (b - r);
  Complex sm = line_sqrt(g.mu_minus), sp = line_sqrt(g.mu_plus);
  g.poles_lambda = {-sm, -sp, sp, sm};
  g.mobius = mobius_normalize(g);
  g.x = g.mobius(g.poles_lambda[2]);
  return g;
}

Complex cross_ratio(double t) {
  if (t == 1.0 || t == -3.0) throw Error(ErrorKind::DegenerateLine, "cross ratio undefined");
  return (t + 1.0) * std::pow(t - 3.0, 3) / ((t - 1.0) * std::pow(t + 3.0, 3));
}

namespace {
double log_dx(double t) { return 1.0 / (t + 1.0) + 3.0 / (t - 3.0) - 1.0 / (t - 1.0) - 3.0 / (t + 3.0); }
double log_dx_dt(double t) {
  auto sq = [](double v) { return v * v; };
  return -1.0 / sq(t + 1.0) - 3.0 / sq(t - 3.0) + 1.0 / sq(t - 1.0) + 3.0 / sq(t + 3.0);
}
}  // namespace

double cross_ratio_dt(double t) { return cross_ratio(t).real() * log_dx(t); }

double cross_ratio_dt2(double t) {
  double l = log_dx(t);
  return cross_ratio(t).real() * (l * l + log_dx_dt(t));
}

Mobius mobius_normalize(const LineGeometry& g) {
  const auto& z = g.poles_lambda;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(z[i] - z[j]) < 1e-12) throw Error(ErrorKind::DegenerateLine, "poles coincide");
  Complex p = z[1] - z[3], q = z[1] - z[0];
  return {p, -z[0] * p, q, -z[3] * q};
}

namespace {
ResidueTable fill_pattern(Complex c, Complex a, Complex b) {
  ResidueTable tab;
  tab.alpha[0] = {c, std::conj(c), std::conj(c), c};
  tab.alpha[1] = {a, a, -a, -a};
  tab.alpha[2] = {b, -b, b, -b};
  return tab;
}
}  // namespace

ResidueTable residue_closed_form(double t) {
  LineGeometry g = poles(t);
  const double mu = g.mu_plus - g.mu_minus, t2 = t * t;
  const Complex z1 = g.pole(PoleLabel::Zero);
  Complex c = -I * (t2 - 1.0) * (t2 - 9.0) / (16.0 * t2 * t * mu);
  Complex a = (g.mu_minus + 1.0) * (t + 1.0) * (t - 3.0) / (8.0 * t2 * mu * z1);
  Complex b = I * (g.mu_minus - 1.0) * (t - 1.0) * (t + 3.0) / (8.0 * t2 * mu * z1);
  return fill_pattern(c, a, b);
}

ResidueTable residue_printed(double t) {
  LineGeometry g = poles(t);
  const double mu = g.mu_plus - g.mu_minus, t2 = t * t;
  const Complex z1 = g.pole(PoleLabel::Zero);
  Complex c = I * (t2 - 1.0) * (t2 - 9.0) / (16.0 * t2 * t * mu);
  Complex a = (g.mu_minus + 1.0) * t * (t + 1.0) * (t - 3.0) / (8.0 * t2 * mu * z1);
  Complex b = I * (g.mu_plus - 1.0) * t * (t - 1.0) * (t + 3.0) / (8.0 * t2 * mu * z1);
  return fill_pattern(c, a, b);
}

Complex residue_numeric(double t, int i, PoleLabel p, int nodes) {
  if (i < 0 || i > 2) throw Error(ErrorKind::InvalidArgument, "form index must be 0, 1 or 2");
  LineGeometry g = poles(t);
  Mobius inv = g.mobius.inverse();
  // the form in the normalized coordinate zeta
  auto form = [&](Complex zeta) {
    return alpha_inv_tangent(t, inv(zeta))[i] * inv.derivative(zeta);
  };
  std::function<Complex(Complex)> f;
  Complex center;
  std::vector<Complex> others;
  if (p == PoleLabel::Infinity) {
    f = [&](Complex w) { return form(1.0 / w) * (-1.0 / (w * w)); };
    center = 0.0;
    others = {1.0, 1.0 / g.x};
  } else {
    f = form;
    std::array<Complex, 3> finite{0.0, 1.0, g.x};
    center = finite[static_cast<int>(p)];
    for (int k = 0; k < 3; ++k)
      if (k != static_cast<int>(p)) others.push_back(finite[k]);
  }
  double sep = std::numeric_limits<double>::infinity();
  for (Complex o : others) sep = std::min(sep, std::abs(o - center));
  auto contour = [&](double r) {
    Complex acc{};
    for (int k = 0; k < nodes; ++k) {
      Complex e = std::polar(1.0, 2.0 * std::numbers::pi * k / nodes);
      acc += f(center + r * e) * r * e;
    }
    return acc / double(nodes);
  };
  const double r = 1e-2 * sep;
  Complex res = contour(r), res2 = contour(0.5 * r);
  if (std::abs(res - res2) > 1e-7 * std::max(1.0, std::abs(res)))
    throw Error(ErrorKind::QuadratureFailure, "contour residue not converged");
  return res;
}

TracelessMat2 connection_form(const ProfileTriple& profile, double t, Complex lam) {
  Vec3 c = alpha_inv_tangent(t, lam);
  Real3 a = profile.value(t);
  return TracelessMat2::from_basis(-a[0] * c[0], -a[1] * c[1], -a[2] * c[2]);
}

FuchsianData fuchsian_data(const ProfileTriple& profile, double t) {
  ResidueTable tab = residue_closed_form(t);
  Real3 a = profile.value(t);
  FuchsianData f;
  f.t = t;
  f.x = cross_ratio(t);
  for (PoleLabel p : kPoleLabels)
    f.A[static_cast<int>(p)] = TracelessMat2::from_basis(-a[0] * tab(0, p), -a[1] * tab(1, p), -a[2] * tab(2, p));
  return f;
}

}  // namespace pinst
