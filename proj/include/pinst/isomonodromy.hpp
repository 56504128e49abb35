#pragma once

// Families of Fuchsian systems along the twistor lines: Schlesinger flow and its
// finite-difference check, isospectrality, the transcendent y(x) and the Painleve VI
// parameters read off the residues.

#include <array>
#include <string>
#include <vector>

#include "pinst/painleve.hpp"
#include "pinst/twistor.hpp"

namespace pinst {

struct FuchsianFamily {
  std::vector<FuchsianData> samples;  // increasing t
  std::string source;
};

// fuchsian_data at each t; InvalidArgument unless t and x are strictly increasing.
FuchsianFamily build_family(const ProfileTriple& profile, const std::vector<double>& ts, std::string source);

// d/dx of (A0, A1, Ax): [A0,Ax]/x, [A1,Ax]/(x-1), -[A0,Ax]/x - [A1,Ax]/(x-1).
// BadDeformationParameter when x is within 1e-12 of 0 or 1.
std::array<TracelessMat2, 3> schlesinger_rhs(const FuchsianData& f);

struct SchlesingerCheck {
  double absolute = 0.0;  // Frobenius norm of the defect, summed over A0, A1, Ax
  double relative = 0.0;  // absolute / (1 + sum of |dA/dx|)
  TracelessMat2 gauge;    // fitted infinitesimal conjugation
};

// Finite-difference dA/dx (5-point stencil in log(t/(1-t)), exact dx/dt) against the
// Schlesinger flow, after removing the best-fitting infinitesimal conjugation [G, A].
// Needs 2 <= k <= len-3.
SchlesingerCheck schlesinger_check(const FuchsianFamily& fam, std::size_t k);
double schlesinger_residual(const FuchsianFamily& fam, std::size_t k);

// max - min of tr(A_p^2) along the family for p = 0, 1, x, inf.
std::array<double, 4> isospectral_drift(const FuchsianFamily& fam);

// Zero of the affine numerator N(z) = sum_p b_p prod_{q != p}(z - q), with b_p the lower-left
// entry of A_p in an eigenbasis of A_inf whose first vector belongs to the branch eigenvalue.
// ReducibleSystem when every |b_p| < 1e-12; IndeterminateY when the root is undetermined,
// infinite, in {0,1,x}, or fails |N(y)| < 1e-10 max|b_p|.
Complex extract_y(const FuchsianData& f, Branch branch);

// Eigenvalue of A_inf on the given branch.
Complex branch_eigenvalue(const FuchsianData& f, Branch branch);

// alpha = (2 lambda - 1)^2 / 2, beta = 2 det A0, gamma = -2 det A1, delta = (1 + 4 det Ax) / 2.
PviParams jimbo_miwa_params(const FuchsianData& f, Branch branch);

// Integrates the Schlesinger flow along the straight path to x_target (rtol 1e-11).
// PathTooClose when the path passes within 1e-3 of 0 or 1. The result carries t = NaN.
FuchsianData schlesinger_integrate(const FuchsianData& f0, Complex x_target, int steps = 1);

// max over pole pairs p <= q of |tr(A_p A_q) - tr(B_p B_q)|
double invariant_mismatch(const FuchsianData& a, const FuchsianData& b);

}  // namespace pinst
