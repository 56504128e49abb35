#pragma once

// Painleve VI: right-hand side, finite-difference residual of a sampled solution, a direct
// integrator along straight paths in x, and the parameter sets attached to the instanton
// families.

#include <string>
#include <vector>

#include "pinst/liealg.hpp"

namespace pinst {

struct PviParams {
  Complex alpha, beta, gamma, delta;
};

// Eigenvalue branch of A_inf: Plus is the canonical eigen2 eigenvalue, Minus its negative.
enum class Branch { Plus, Minus };
enum class DeltaVariant { Intro, Theorem };

const char* to_string(Branch b);
const char* to_string(DeltaVariant v);

// y'' = 1/2 (1/y + 1/(y-1) + 1/(y-x)) y'^2 - (1/x + 1/(x-1) + 1/(y-x)) y'
//       + y(y-1)(y-x)/(x^2 (x-1)^2) * (alpha + beta x/y^2 + gamma (x-1)/(y-1)^2 + delta x(x-1)/(y-x)^2)
// SingularArgument when x in {0,1} or y in {0,1,x} within 1e-12.
Complex pvi_second_derivative(const PviParams& p, Complex x, Complex y, Complex yp);

struct PviPoint {
  double t = 0.0;  // sampling parameter
  Complex x, y;
};

// Coordinate of the 5-point stencils: x itself (x real), log(x - 1) (x real and > 1), or the
// sampling parameter t with dx/dt from the same stencil.
enum class StencilCoordinate { X, LogXMinusOne, Parameter };

struct PviSample {
  std::vector<PviPoint> points;
  StencilCoordinate coordinate = StencilCoordinate::X;
};

// y, y', y'' at node k from a 5-point stencil in the sample's coordinate.
struct PviJet {
  Complex y, yp, ypp;
};
PviJet pvi_jet(const PviSample& s, std::size_t k);

// y''(finite difference) - pvi_second_derivative(x, y, y'(finite difference)); 2 <= k <= len-3.
Complex pvi_residual(const PviSample& s, const PviParams& p, std::size_t k);

// |pvi_residual| divided by the largest single term of the equation at node k
// (y'' and each summand of the right-hand side).
double pvi_scaled_residual(const PviSample& s, const PviParams& p, std::size_t k);

// Integrates along x0 + s (x1 - x0), s in [0,1], returning steps+1 equally spaced points
// (t = s). Throws SingularityEncountered near x in {0,1} or y in {0,1,x} (within 1e-8).
PviSample pvi_integrate(const PviParams& p, Complex x0, Complex y0, Complex yp0, Complex x1, int steps = 1,
                        double rtol = 1e-11);

// alpha = (n+2)^2/8 (Plus) or (n-2)^2/8 (Minus), beta = -n^2/8, gamma = n^2/8,
// delta = -(n^2-4)/8 (Intro) or -(n^2-1)/8 (Theorem).
PviParams params_from_n(int n, DeltaVariant variant, Branch branch);

}  // namespace pinst
