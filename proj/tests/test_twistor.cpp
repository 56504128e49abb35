#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pinst/errors.hpp"
#include "pinst/twistor.hpp"

using namespace pinst;

namespace {

const Complex I{0.0, 1.0};
const double kSqrt3 = std::sqrt(3.0);

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

// polynomial extrapolation to s = 0 from samples (s_k, f_k) (Neville)
Complex extrapolate_zero(std::vector<double> s, std::vector<Complex> f) {
  const std::size_t n = s.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) f[i] = (s[i + m] * f[i] - s[i] * f[i + 1]) / (s[i + m] - s[i]);
  return f[0];
}

Complex limit_at_one(int i) {
  std::vector<double> s;
  std::vector<Complex> f;
  for (double h = 1e-2; h > 1e-4; h *= 0.5) {
    s.push_back(std::sqrt(h));
    f.push_back(residue_closed_form(1.0 - h)(i, PoleLabel::Infinity));
  }
  return extrapolate_zero(s, f);
}

}  // namespace

TEST_CASE("alpha matrix") {
  Mat3 z = alpha_matrix(0.0, 0.0, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1)
        CHECK(std::abs(z(i, j) - kSqrt3) < 1e-15);
      else
        CHECK(z(i, j) == Complex(0.0));
    }
  Mat3 h = alpha_matrix(1.0, 0.5 / kSqrt3, 0.5 / kSqrt3);
  CHECK(std::abs(h.det()) > 1e-3);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95), v(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    double t = u(rng);
    Complex lam{v(rng), v(rng)};
    Complex d = -alpha_matrix(lam, lam * t / kSqrt3, t / kSqrt3).det();
    CHECK(std::abs(delta(t, lam) - d) < 1e-10 * std::max(1.0, std::abs(d)));
  }
}

TEST_CASE("delta") {
  double t = 0.37;
  CHECK(std::abs(delta(t, 0.0) - 8 * t * t * t / 3) < 1e-15);
  LineGeometry g = poles(0.5);
  for (Complex z : g.poles_lambda) CHECK(std::abs(delta(0.5, z)) < 1e-12);
}

TEST_CASE("alpha inverse on the tangent") {
  CHECK(alpha_inv_tangent(0.3, 0.0)[0] == Complex(0.0));
  LineGeometry g = poles(0.4);
  CHECK(kind_of([&] { alpha_inv_tangent(0.4, g.poles_lambda[1]); }) == ErrorKind::OnDivisor);

  Vec3 a = alpha_inv_tangent(0.5, 1.0), b = alpha_inv_tangent_solve(0.5, 1.0);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95), v(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    double t = u(rng);
    Complex lam{v(rng), v(rng)};
    Vec3 c = alpha_inv_tangent(t, lam);
    // applying the action matrix recovers T = d/dlam + t/sqrt3 d/dmu
    Vec3 tv = alpha_matrix(lam, lam * t / kSqrt3, t / kSqrt3) * from_x_basis(c);
    CHECK(std::abs(tv[0] - 1.0) < 1e-9);
    CHECK(std::abs(tv[1] - t / kSqrt3) < 1e-9);
    CHECK(std::abs(tv[2]) < 1e-9);
  }
}

TEST_CASE("poles and mu") {
  LineGeometry h = poles(0.5);
  double r = std::sqrt(502.44140625);
  CHECK(h.mu_plus == doctest::Approx(-22.4375 + r).epsilon(1e-10));
  CHECK(h.mu_minus == doctest::Approx(-22.4375 - r).epsilon(1e-14));
  for (int k = 1; k < 1000; ++k) {
    LineGeometry g = poles(k / 1000.0);
    CHECK(std::abs(g.mu_plus * g.mu_minus - 1.0) < 1e-12);
    CHECK(g.mu_plus < 0.0);
    CHECK(g.mu_minus < 0.0);
  }
  CHECK(kind_of([] { poles(1.0); }) == ErrorKind::DegenerateLine);
  CHECK(kind_of([] { poles(0.0); }) == ErrorKind::DegenerateLine);
  // z4 = -z1 = sqrt(mu_-), z3 = -z2 = sqrt(mu_+)
  CHECK(h.poles_lambda[3] == -h.poles_lambda[0]);
  CHECK(h.poles_lambda[2] == -h.poles_lambda[1]);
  CHECK(std::abs(h.poles_lambda[3] * h.poles_lambda[3] - h.mu_minus) < 1e-12);
  CHECK(std::abs(h.poles_lambda[2] * h.poles_lambda[2] - h.mu_plus) < 1e-14);
}

TEST_CASE("cross ratio") {
  CHECK(cross_ratio(0.5).real() == doctest::Approx(375.0 / 343.0).epsilon(1e-15));
  CHECK(std::abs(cross_ratio(1e-9) - 1.0) < 1e-8);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 100; ++k) {
    double t = u(rng);
    LineGeometry g = poles(t);
    CHECK(std::abs(g.x - cross_ratio(t)) < 1e-10);
  }
  double prev = 0.0;
  for (int k = 1; k < 200; ++k) {
    double x = cross_ratio(k / 200.0).real();
    CHECK(x > prev);
    prev = x;
  }
  double t = 0.3, h = 1e-5;
  CHECK(cross_ratio_dt(t) == doctest::Approx((cross_ratio(t + h) - cross_ratio(t - h)).real() / (2 * h)).epsilon(1e-8));
}

TEST_CASE("moebius normalization") {
  LineGeometry g = poles(0.6);
  Mobius T = mobius_normalize(g);
  CHECK(std::abs(T(g.poles_lambda[0])) < 1e-11);
  CHECK(std::abs(T(g.poles_lambda[1]) - 1.0) < 1e-11);
  CHECK(!std::isfinite(std::abs(T(g.poles_lambda[3]))));
  CHECK(std::abs(T(g.poles_lambda[2]) - cross_ratio(0.6)) < 1e-11);
  Mobius inv = T.inverse();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) {
    Complex z{n(rng), n(rng)};
    CHECK(std::abs(inv(T(z)) - z) < 1e-11 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("residue table against quadrature") {
  for (int k = 1; k <= 9; ++k) {
    double t = k / 10.0;
    ResidueTable tab = residue_closed_form(t);
    for (int i = 0; i < 3; ++i) {
      Complex sum{};
      for (PoleLabel p : kPoleLabels) {
        Complex num = residue_numeric(t, i, p);
        sum += num;
        CHECK(std::abs(num - tab(i, p)) < 1e-8);
      }
      CHECK(std::abs(sum) < 1e-9);
    }
  }
  Complex a = residue_numeric(0.4, 0, PoleLabel::Zero, 256), b = residue_numeric(0.4, 0, PoleLabel::Zero, 512);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("residue table symmetry pattern") {
  ResidueTable tab = residue_closed_form(0.35);
  using P = PoleLabel;
  CHECK(tab(0, P::Infinity) == tab(0, P::Zero));
  CHECK(tab(0, P::X) == std::conj(tab(0, P::Zero)));
  CHECK(tab(0, P::One) == std::conj(tab(0, P::Zero)));
  CHECK(tab(1, P::Infinity) == -tab(1, P::Zero));
  CHECK(tab(1, P::One) == tab(1, P::Zero));
  CHECK(tab(1, P::X) == -tab(1, P::Zero));
  CHECK(tab(2, P::Infinity) == -tab(2, P::Zero));
  CHECK(tab(2, P::One) == -tab(2, P::Zero));
  CHECK(tab(2, P::X) == tab(2, P::Zero));
}

TEST_CASE("residue limits at the end of the family") {
  CHECK(std::abs(limit_at_one(1) - I / 4.0) < 1e-6);
  CHECK(std::abs(limit_at_one(0)) < 1e-6);
  CHECK(std::abs(limit_at_one(2)) < 1e-6);
}

TEST_CASE("connection form") {
  auto triv = closed_form_profile(ProfileKind::ClosedFormTrivial);
  auto e3 = closed_form_profile(ProfileKind::ClosedFormEminus3).with_global_negation();
  CHECK(connection_form(triv, 0.4, 0.0).basis_coords()[0] == Complex(0.0));

  // contour residue of A(t, lam) d lam at each pole matches the assembled residue
  double t = 0.45;
  LineGeometry g = poles(t);
  FuchsianData f = fuchsian_data(e3, t);
  double sep = std::abs(g.poles_lambda[1] - g.poles_lambda[2]);
  for (int p = 0; p < 4; ++p) {
    Complex z = g.poles_lambda[p];
    double r = 1e-3 * sep;
    const int nodes = 256;
    TracelessMat2 acc;
    for (int k = 0; k < nodes; ++k) {
      Complex e = std::polar(1.0, 2 * std::numbers::pi * k / nodes);
      acc += (r * e / double(nodes)) * connection_form(e3, t, z + r * e);
    }
    CHECK((acc - f.A[p]).norm() < 1e-8 * std::max(1.0, f.A[p].norm()));
  }

  TracelessMat2 a = connection_form(e3, 0.3, Complex(0.2, 0.7));
  TracelessMat2 b = connection_form(e3.with_signs({2.0, 2.0, 2.0}), 0.3, Complex(0.2, 0.7));
  CHECK((b - 2.0 * a).norm() < 1e-13 * a.norm());
}

TEST_CASE("fuchsian data") {
  auto triv = closed_form_profile(ProfileKind::ClosedFormTrivial);
  auto e3 = closed_form_profile(ProfileKind::ClosedFormEminus3).with_global_negation();
  for (int k = 1; k < 20; ++k) {
    double t = k / 20.0;
    for (const auto* pr : {&triv, &e3}) {
      FuchsianData f = fuchsian_data(*pr, t);
      double scale = 0.0;
      for (const auto& a : f.A) scale = std::max(scale, a.norm());
      CHECK((f.A[0] + f.A[1] + f.A[2] + f.A[3]).norm() < 1e-10 * scale);
      CHECK((f.Ax() + f.A0().adjoint()).norm() < 1e-9 * scale);
      CHECK((f.Ainf() + f.A1().adjoint()).norm() < 1e-9 * scale);
      CHECK(std::abs(f.x - cross_ratio(t)) == 0.0);
    }
    CHECK(trace_sq(fuchsian_data(triv, t).Ainf()).real() == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(trace_sq(fuchsian_data(e3, t).Ainf()).real() == doctest::Approx(9.0 / 8.0).epsilon(1e-12));
  }
}
