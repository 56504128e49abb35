#include <doctest.h>

#include <cmath>
#include <random>

#include "pinst/errors.hpp"
#include "pinst/isomonodromy.hpp"
#include "pinst/numdiff.hpp"
#include "pinst/painleve.hpp"
#include "pinst/verify.hpp"

using namespace pinst;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

// Second transcription over a common denominator, written from the equation
//   x^2 (x-1)^2 y'' = ...
Complex pvi_rhs_reference(const PviParams& p, Complex x, Complex y, Complex yp) {
  Complex y1 = y - 1.0, x1 = x - 1.0, d = y - x;
  Complex sum_inv_y = (y1 * d + y * d + y * y1) / (y * y1 * d);
  Complex sum_inv_x = (x1 * d + x * d + x * x1) / (x * x1 * d);
  Complex lhs_q = sum_inv_y * yp * yp / 2.0;
  Complex lhs_l = sum_inv_x * yp;
  Complex poly = p.alpha * y * y1 * d + p.beta * x * y1 * d / y + p.gamma * x1 * y * d / y1 + p.delta * x * x1 * y * y1 / d;
  return lhs_q - lhs_l + poly / (x * x * x1 * x1);
}

PviSample family_y(int n, Branch b, std::size_t samples) {
  auto prof = instanton_profile(n);
  PviSample s;
  s.coordinate = StencilCoordinate::LogXMinusOne;
  for (double t : logit_nodes(0.05, 0.95, samples)) {
    FuchsianData f = fuchsian_data(prof, t);
    s.points.push_back({t, f.x, extract_y(f, b)});
  }
  return s;
}

double max_scaled(const PviSample& s, const PviParams& p) {
  double m = 0.0;
  for (std::size_t k = 2; k + 2 < s.points.size(); ++k) m = std::max(m, pvi_scaled_residual(s, p, k));
  return m;
}

}  // namespace

TEST_CASE("double transcription") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto c = [&] { return Complex{u(rng), u(rng)}; };
  int checked = 0;
  while (checked < 1000) {
    PviParams p{c(), c(), c(), c()};
    Complex x = c(), y = c(), yp = c();
    if (std::abs(x) < 0.1 || std::abs(x - 1.0) < 0.1 || std::abs(y) < 0.1 || std::abs(y - 1.0) < 0.1 ||
        std::abs(y - x) < 0.1)
      continue;
    Complex a = pvi_second_derivative(p, x, y, yp), b = pvi_rhs_reference(p, x, y, yp);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
    ++checked;
  }
}

TEST_CASE("right-hand side examples") {
  PviParams zero{};
  CHECK(pvi_second_derivative(zero, 0.3, 2.0, 0.0) == Complex(0.0));
  PviParams p{0.7, -0.2, 0.4, 0.1};
  CHECK(std::abs(pvi_second_derivative(p, Complex(2.5), Complex(0.4), 0.0)) > 1e-3);
  CHECK(kind_of([&] { pvi_second_derivative(p, 1.0, 0.4, 0.0); }) == ErrorKind::SingularArgument);
  CHECK(kind_of([&] { pvi_second_derivative(p, 2.0, 2.0, 0.0); }) == ErrorKind::SingularArgument);
  CHECK(kind_of([&] { pvi_second_derivative(p, 2.0, 0.0, 0.0); }) == ErrorKind::SingularArgument);
}

TEST_CASE("parameter sets") {
  PviParams a = params_from_n(1, DeltaVariant::Intro, Branch::Plus);
  CHECK(a.alpha == Complex(9.0 / 8));
  CHECK(a.beta == Complex(-1.0 / 8));
  CHECK(a.gamma == Complex(1.0 / 8));
  CHECK(a.delta == Complex(3.0 / 8));
  PviParams b = params_from_n(3, DeltaVariant::Theorem, Branch::Minus);
  CHECK(b.alpha == Complex(1.0 / 8));
  CHECK(b.beta == Complex(-9.0 / 8));
  CHECK(b.gamma == Complex(9.0 / 8));
  CHECK(b.delta == Complex(-1.0));
  PviParams c = params_from_n(5, DeltaVariant::Intro, Branch::Plus);
  CHECK(c.alpha == Complex(49.0 / 8));
  CHECK(c.beta == Complex(-25.0 / 8));
  CHECK(c.gamma == Complex(25.0 / 8));
  CHECK(c.delta == Complex(-21.0 / 8));
  CHECK(kind_of([] { params_from_n(4, DeltaVariant::Intro, Branch::Plus); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("stencil coordinates agree") {
  // y = x^2 on real x > 1, differentiated through each coordinate
  PviSample sx, sl, st;
  sl.coordinate = StencilCoordinate::LogXMinusOne;
  st.coordinate = StencilCoordinate::Parameter;
  for (int k = 0; k < 5; ++k) {
    double t = 0.5 + 0.01 * k;
    Complex x = 1.0 + t + t * t;
    PviPoint q{t, x, x * x};
    sx.points.push_back(q);
    sl.points.push_back(q);
    st.points.push_back(q);
  }
  Complex x = sx.points[2].x;
  for (const auto* s : {&sx, &sl, &st}) {
    PviJet j = pvi_jet(*s, 2);
    CHECK(std::abs(j.yp - 2.0 * x) < 1e-5);
    CHECK(std::abs(j.ypp - 2.0) < 1e-3);
  }
  CHECK(kind_of([&] { pvi_jet(sx, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("residual of the n=3 transcendent") {
  PviParams plus = params_from_n(3, DeltaVariant::Intro, Branch::Minus);  // alpha 1/8 pairs with the plus branch
  PviParams minus = params_from_n(3, DeltaVariant::Intro, Branch::Plus);
  PviSample sp = family_y(3, Branch::Plus, 101), sm = family_y(3, Branch::Minus, 101);
  CHECK(max_scaled(sp, plus) < 1e-5);
  CHECK(max_scaled(sm, minus) < 1e-5);

  PviParams wrong_delta = plus;
  wrong_delta.delta = -1.0;
  CHECK(max_scaled(sp, wrong_delta) > 1e-4);
  PviParams wrong_beta = plus;
  wrong_beta.beta += 0.1;
  double raw = 0.0;
  for (std::size_t k = 2; k + 2 < sp.points.size(); ++k) raw = std::max(raw, std::abs(pvi_residual(sp, wrong_beta, k)));
  CHECK(raw > 1e-3);

  // fourth-order convergence of the finite-difference residual
  PviSample fine = family_y(3, Branch::Plus, 201);
  CHECK(std::log2(max_scaled(sp, plus) / max_scaled(fine, plus)) > 3.0);
}

TEST_CASE("integrator") {
  PviParams p = params_from_n(3, DeltaVariant::Intro, Branch::Minus);
  PviSample z = pvi_integrate(p, 1.3, 0.4, 0.2, 1.3);
  REQUIRE(z.points.size() == 1);
  CHECK(z.points[0].y == Complex(0.4));
  CHECK(kind_of([&] { pvi_integrate(p, 0.5, 0.4, 0.2, 1.5); }) == ErrorKind::SingularityEncountered);
  CHECK(kind_of([&] { pvi_integrate(p, 1.5, 1.0, 0.2, 1.6); }) == ErrorKind::SingularityEncountered);
  PviSample many = pvi_integrate(p, 1.3, 0.4, 0.2, 1.4, 4);
  CHECK(many.points.size() == 5);
}

TEST_CASE("integrator oracle for n=3") {
  auto prof = instanton_profile(3);
  PviParams ok = params_from_n(3, DeltaVariant::Intro, Branch::Minus);
  PviParams bad = params_from_n(3, DeltaVariant::Theorem, Branch::Minus);
  PviJet seed = y_jet_at(prof, 0.4, Branch::Plus);
  FuchsianData f0 = fuchsian_data(prof, 0.4), f1 = fuchsian_data(prof, 0.5);
  Complex target = extract_y(f1, Branch::Plus);
  CHECK(std::abs(pvi_integrate(ok, f0.x, seed.y, seed.yp, f1.x).points.back().y - target) < 1e-6);
  CHECK(std::abs(pvi_integrate(bad, f0.x, seed.y, seed.yp, f1.x).points.back().y - target) > 1e-4);

  PviSample s = family_y(3, Branch::Plus, 101);
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < s.points.size(); ++k) {
    PviJet j = pvi_jet(s, k);
    Complex y = pvi_integrate(ok, s.points[k].x, j.y, j.yp, s.points[k + 1].x).points.back().y;
    worst = std::max(worst, std::abs(y - s.points[k + 1].y));
  }
  CHECK(worst < 1e-6);
}
