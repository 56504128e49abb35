#include "pinst/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pinst/errors.hpp"
#include "pinst/numdiff.hpp"
#include "pinst/ode.hpp"

namespace pinst {

const char* to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }
const char* to_string(DeltaVariant v) { return v == DeltaVariant::Intro ? "intro" : "theorem"; }

Complex pvi_second_derivative(const PviParams& p, Complex x, Complex y, Complex yp) {
  constexpr double tiny = 1e-12;
  if (std::abs(x) < tiny || std::abs(x - 1.0) < tiny)
    throw Error(ErrorKind::SingularArgument, "x at a fixed singular point");
  if (std::abs(y) < tiny || std::abs(y - 1.0) < tiny || std::abs(y - x) < tiny)
    throw Error(ErrorKind::SingularArgument, "y at a singular point of the equation");
  const Complex y1 = y - 1.0, yx = y - x, x1 = x - 1.0;
  Complex first = 0.5 * (1.0 / y + 1.0 / y1 + 1.0 / yx) * yp * yp;
  Complex second = (1.0 / x + 1.0 / x1 + 1.0 / yx) * yp;
  Complex bracket = p.alpha + p.beta * x / (y * y) + p.gamma * x1 / (y1 * y1) + p.delta * x * x1 / (yx * yx);
  return first - second + y * y1 * yx / (x * x * x1 * x1) * bracket;
}

PviJet pvi_jet(const PviSample& s, std::size_t k) {
  if (k < 2 || k + 2 >= s.points.size()) throw Error(ErrorKind::InvalidArgument, "5-point stencil out of range");
  const auto* q = &s.points[k - 2];
  std::array<double, 5> u;
  for (int j = 0; j < 5; ++j) {
    Complex x = q[j].x;
    switch (s.coordinate) {
      case StencilCoordinate::X:
      case StencilCoordinate::LogXMinusOne:
        if (std::abs(x.imag()) > 1e-12 * std::max(1.0, std::abs(x)))
          throw Error(ErrorKind::InvalidArgument, "stencil coordinate needs real x");
        if (s.coordinate == StencilCoordinate::X) {
          u[j] = x.real();
        } else {
          if (!(x.real() > 1.0)) throw Error(ErrorKind::InvalidArgument, "log(x-1) coordinate needs x > 1");
          u[j] = std::log(x.real() - 1.0);
        }
        break;
      case StencilCoordinate::Parameter: u[j] = q[j].t; break;
    }
  }
  Stencil5 w = stencil5(u, 2);
  Complex ys{}, yss{}, xs{}, xss{};
  for (int j = 0; j < 5; ++j) {
    ys += w.d1[j] * q[j].y;
    yss += w.d2[j] * q[j].y;
    xs += w.d1[j] * q[j].x;
    xss += w.d2[j] * q[j].x;
  }
  if (s.coordinate == StencilCoordinate::X) return {q[2].y, ys, yss};
  if (s.coordinate == StencilCoordinate::LogXMinusOne) {
    // x = 1 + e^u exactly
    Complex xm1 = q[2].x - 1.0;
    return {q[2].y, ys / xm1, (yss - ys) / (xm1 * xm1)};
  }
  if (std::abs(xs) == 0.0) throw Error(ErrorKind::SingularArgument, "x is stationary in the sampling parameter");
  Complex yp = ys / xs;
  return {q[2].y, yp, (yss - yp * xss) / (xs * xs)};
}

Complex pvi_residual(const PviSample& s, const PviParams& p, std::size_t k) {
  PviJet j = pvi_jet(s, k);
  return j.ypp - pvi_second_derivative(p, s.points[k].x, j.y, j.yp);
}

double pvi_scaled_residual(const PviSample& s, const PviParams& p, std::size_t k) {
  PviJet j = pvi_jet(s, k);
  const Complex x = s.points[k].x, y = j.y, yp = j.yp;
  Complex r = j.ypp - pvi_second_derivative(p, x, y, yp);
  const Complex y1 = y - 1.0, yx = y - x, x1 = x - 1.0;
  const Complex pre = y * y1 * yx / (x * x * x1 * x1);
  const Complex terms[] = {j.ypp,
                           0.5 * yp * yp / y,
                           0.5 * yp * yp / y1,
                           0.5 * yp * yp / yx,
                           yp / x,
                           yp / x1,
                           yp / yx,
                           pre * p.alpha,
                           pre * p.beta * x / (y * y),
                           pre * p.gamma * x1 / (y1 * y1),
                           pre * p.delta * x * x1 / (yx * yx)};
  double scale = 0.0;
  for (Complex v : terms) scale = std::max(scale, std::abs(v));
  return scale > 0.0 ? std::abs(r) / scale : std::abs(r);
}

namespace {

double segment_distance(Complex a, Complex b, Complex z) {
  Complex d = b - a;
  double n2 = std::norm(d);
  double s = n2 > 0.0 ? std::clamp(((z - a) * std::conj(d)).real() / n2, 0.0, 1.0) : 0.0;
  return std::abs(a + s * d - z);
}

std::string where(Complex x) {
  return "(" + std::to_string(x.real()) + ", " + std::to_string(x.imag()) + ")";
}

}  // namespace

PviSample pvi_integrate(const PviParams& p, Complex x0, Complex y0, Complex yp0, Complex x1, int steps,
                        double rtol) {
  constexpr double near = 1e-8;
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  PviSample out;
  out.coordinate = StencilCoordinate::Parameter;
  out.points.push_back({0.0, x0, y0});
  if (x1 == x0) return out;
  for (Complex c : {Complex{0.0}, Complex{1.0}})
    if (segment_distance(x0, x1, c) < near)
      throw Error(ErrorKind::SingularityEncountered, "path meets x=" + where(c));
  for (Complex c : {Complex{0.0}, Complex{1.0}, x0})
    if (std::abs(y0 - c) < near) throw Error(ErrorKind::SingularityEncountered, "seed y at x=" + where(x0));

  const Complex dx = x1 - x0;
  using Integrator = Dopri5<Complex, 2>;
  auto rhs = [&](double s, const Integrator::State& st) -> Integrator::State {
    Complex x = x0 + s * dx;
    return {st[1] * dx, pvi_second_derivative(p, x, st[0], st[1]) * dx};
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-1;
  Integrator ode(rhs, 0.0, {y0, yp0}, opt);
  ode.set_guard([&](double s, const Integrator::State& st) {
    Complex x = x0 + s * dx, y = st[0];
    return std::abs(y) >= near && std::abs(y - 1.0) >= near && std::abs(y - x) >= near;
  });
  for (int k = 1; k <= steps; ++k) {
    double s = double(k) / steps;
    try {
      auto st = ode.advance_to(s);
      out.points.push_back({s, x0 + s * dx, st[0]});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::SingularArgument)
        throw Error(ErrorKind::SingularityEncountered, "integration stopped near x=" + where(x0 + ode.t() * dx));
      throw;
    }
  }
  return out;
}

PviParams params_from_n(int n, DeltaVariant variant, Branch branch) {
  if (n % 2 == 0) throw Error(ErrorKind::InvalidArgument, "n must be odd");
  const double m = n, n2 = m * m;
  double a = branch == Branch::Plus ? (m + 2.0) : (m - 2.0);
  double delta = variant == DeltaVariant::Intro ? -(n2 - 4.0) / 8.0 : -(n2 - 1.0) / 8.0;
  return {a * a / 8.0, -n2 / 8.0, n2 / 8.0, delta};
}

}  // namespace pinst
