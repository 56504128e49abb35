#pragma once

// Reduced duality equations for SU(2)-invariant connections on S^4:
//   sign * K_i(t)/2 * a_i' = a_j a_k - a_i,  (i,j,k) cyclic,
// their closed-form solutions and a two-sided shooting solver for the
// boundary-value problem a1(0)=1, a2(1)=-n, a1(1)=a3(1)=0.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pinst {

using Real3 = std::array<double, 3>;

enum class DualitySign { SelfDual, AntiSelfDual };
enum class ProfileKind { ClosedFormTrivial, ClosedFormHopfSD, ClosedFormEminus3, NumericGrid };
enum class Side { Zero, One };

const char* to_string(DualitySign s);
const char* to_string(ProfileKind k);

// K_1 = (t^2-1)(t^2-9)/(4t), K_2 = 4t(t-3)(t+1)/((t+3)(t-1)), K_3 = 4t(t+3)(t-1)/((t-3)(t+1)).
// index is 1-based. PoleAtEndpoint where the denominator vanishes.
double coeff_K(int index, double t);

Real3 asd_rhs(DualitySign sign, double t, const Real3& a);

struct ProfilePoint {
  double t, a1, a2, a3;
};

class ProfileTriple {
 public:
  static ProfileTriple closed_form(ProfileKind kind);
  static ProfileTriple grid(int n, std::vector<ProfilePoint> points);

  ProfileKind kind() const { return kind_; }
  int n() const { return n_; }  // |n|, 0 when not meaningful
  double raw_a2_at_one() const { return value(1.0)[1]; }
  const Real3& signs() const { return signs_; }
  bool globally_negated() const { return signs_[0] < 0 && signs_[1] < 0 && signs_[2] < 0; }
  const std::vector<ProfilePoint>& points() const { return points_; }

  // Componentwise sign change; (-1,-1,-1) is the global negation.
  ProfileTriple with_signs(const Real3& s) const;
  ProfileTriple with_global_negation() const { return with_signs({-1.0, -1.0, -1.0}); }

  // Closed forms: exact. Grids: 8-point local interpolation (extrapolation allowed up to the ends).
  Real3 value(double t) const;
  Real3 derivative(double t) const;

  // grid index of t, if t is a node
  std::optional<std::size_t> node_index(double t) const;

 private:
  ProfileKind kind_ = ProfileKind::ClosedFormTrivial;
  int n_ = 1;
  Real3 signs_{1.0, 1.0, 1.0};
  std::vector<ProfilePoint> points_;
  std::array<std::vector<double>, 4> cols_;  // t, a1, a2, a3
};

ProfileTriple closed_form_profile(ProfileKind kind);

// r_i = sign*K_i/2 * a_i' - (a_j a_k - a_i). Grids need t to be a node with a centered
// 5-point stencil.
Real3 duality_residual(const ProfileTriple& p, DualitySign sign, double t, bool global_negation);
Real3 duality_residual_at(const ProfileTriple& p, DualitySign sign, std::size_t k);

struct EndpointSeries {
  int n = 0;
  Side side = Side::Zero;
  // coeffs[i][m]: coefficient of u^m in a_{i+1}, u = t (Side::Zero) or 1-t (Side::One)
  std::array<std::vector<double>, 3> coeffs;
  std::vector<int> free_levels;  // orders at which a free parameter entered

  Real3 eval(double t) const;
  Real3 eval_derivative(double t) const;  // d/dt
};

// Number of free parameters of the regular branch at the given end.
// Zero: the common value a2(0)=a3(0) and one resonant coefficient. One: one.
int free_parameter_count(int n, Side side);

// Regular power-series branch of the anti-self-dual system at an end, with boundary data
// a1(0)=1 (Side::Zero) or a2(1)=-n, a1(1)=a3(1)=0 (Side::One; for |n|=1 a1(1) is free).
// Missing free parameters default to 0.
EndpointSeries endpoint_series(int n, Side side, int order, std::span<const double> free_params = {});

struct BvpConfig {
  int n = 3;
  int grid_size = 401;
  double match_point = 0.5;
  int series_order = 12;
  double newton_tol = 1e-10;
  int max_iter = 50;
  double eps = 1e-4;
  double fd_step = 1e-6;
  double rtol = 1e-11;
  double atol = 1e-12;
  // optional start for (a2(0), resonant coefficient at 0, free coefficient at 1)
  std::optional<Real3> initial_guess;
};

struct BvpResult {
  ProfileTriple profile;
  Real3 params{};  // for |n|
  double defect = 0.0;
  int iterations = 0;
  EndpointSeries left, right;
};

BvpResult solve_bvp(const BvpConfig& cfg);

// Match-point defect of the two shooting branches (a_left - a_right) for |n|.
Real3 shooting_defect(int n, const Real3& params, const BvpConfig& cfg);

// tr(A_inf^2) = -2 sum_i a_i^2 alpha_{i,inf}^2 using the closed residue table.
double conserved_tr(const ProfileTriple& p, double t);

}  // namespace pinst
