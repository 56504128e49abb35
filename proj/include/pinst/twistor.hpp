#pragma once

// Twistor-line data for the family of lines P_t, t in (0,1): the infinitesimal action matrix,
// its inverse on the tangent vector, the four poles, Moebius normalization, residues and the
// resulting Fuchsian systems.

#include <array>
#include <string>

#include "pinst/instanton.hpp"
#include "pinst/liealg.hpp"

namespace pinst {

// Action matrix in the basis {-iX1, (X2+iX3)/2, -(X2-iX3)/2}; rows are the (lam, mu, zeta)
// components of the induced tangent vector.
Mat3 alpha_matrix(Complex lam, Complex mu, Complex zeta);

// Coordinates in {-iX1, (X2+iX3)/2, -(X2-iX3)/2} -> coordinates in {X1, X2, X3}, and back.
Vec3 to_x_basis(const Vec3& c);
Vec3 from_x_basis(const Vec3& c);

Complex delta(double t, Complex lam);
Complex delta_dlam(double t, Complex lam);

// Coefficients (c1,c2,c3) of X1,X2,X3 in alpha^{-1}(T), T = d/dlam + t/sqrt3 d/dmu.
// OnDivisor when |Delta| <= 1e-13.
Vec3 alpha_inv_tangent(double t, Complex lam);

// Same quantity by solving the 3x3 system directly.
Vec3 alpha_inv_tangent_solve(double t, Complex lam);

enum class PoleLabel { Zero = 0, One = 1, X = 2, Infinity = 3 };
inline constexpr std::array<PoleLabel, 4> kPoleLabels{PoleLabel::Zero, PoleLabel::One, PoleLabel::X,
                                                      PoleLabel::Infinity};
const char* to_string(PoleLabel p);

struct Mobius {
  Complex a, b, c, d;
  Complex operator()(Complex z) const;  // may return infinity
  Mobius inverse() const { return {d, -b, -c, a}; }
  Complex derivative(Complex z) const;
};

struct LineGeometry {
  double t = 0.0;
  double mu_plus = 0.0, mu_minus = 0.0;
  std::array<Complex, 4> poles_lambda{};  // z1..z4, labelled 0, 1, x, infinity
  Mobius mobius{};
  Complex x{};

  Complex pole(PoleLabel p) const { return poles_lambda[static_cast<int>(p)]; }
};

// Square root used for the pole positions: -i*sqrt(|mu|) for mu < 0.
Complex line_sqrt(double mu);

// mu_plus, mu_minus, z1=-sqrt(mu_-), z2=-sqrt(mu_+), z3=sqrt(mu_+), z4=sqrt(mu_-), Moebius map and x.
// DegenerateLine outside (0,1).
LineGeometry poles(double t);

Complex cross_ratio(double t);
double cross_ratio_dt(double t);
double cross_ratio_dt2(double t);

// T(z) = (z - z1)(z2 - z4) / ((z - z4)(z2 - z1))
Mobius mobius_normalize(const LineGeometry& g);

struct ResidueTable {
  std::array<std::array<Complex, 4>, 3> alpha{};  // [i][label]
  Complex operator()(int i, PoleLabel p) const { return alpha[i][static_cast<int>(p)]; }
};

// Residues of the scalar forms alpha_i at the four poles (closed expressions).
ResidueTable residue_closed_form(double t);
// The table exactly as printed in the source derivation, kept for comparison.
ResidueTable residue_printed(double t);

// Contour-quadrature residue in the normalized coordinate (chart 1/zeta at infinity).
Complex residue_numeric(double t, int i, PoleLabel p, int nodes = 256);

// A(t, lam) = -sum_i a_i(t) alpha_i(t, lam) X_i  (coefficient of d lam)
TracelessMat2 connection_form(const ProfileTriple& profile, double t, Complex lam);

struct FuchsianData {
  double t = 0.0;
  Complex x{};
  std::array<TracelessMat2, 4> A{};  // by PoleLabel

  const TracelessMat2& at(PoleLabel p) const { return A[static_cast<int>(p)]; }
  const TracelessMat2& A0() const { return A[0]; }
  const TracelessMat2& A1() const { return A[1]; }
  const TracelessMat2& Ax() const { return A[2]; }
  const TracelessMat2& Ainf() const { return A[3]; }
};

FuchsianData fuchsian_data(const ProfileTriple& profile, double t);

}  // namespace pinst
