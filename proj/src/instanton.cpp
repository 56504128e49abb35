#include "pinst/instanton.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pinst/errors.hpp"
#include "pinst/numdiff.hpp"
#include "pinst/ode.hpp"
#include "pinst/twistor.hpp"

namespace pinst {

const char* to_string(DualitySign s) { return s == DualitySign::SelfDual ? "self-dual" : "anti-self-dual"; }

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::ClosedFormTrivial: return "trivial";
    case ProfileKind::ClosedFormHopfSD: return "hopf-sd";
    case ProfileKind::ClosedFormEminus3: return "e-minus-3";
    case ProfileKind::NumericGrid: return "numeric-grid";
  }
  return "unknown";
}

double coeff_K(int index, double t) {
  switch (index) {
    case 1:
      if (t == 0.0) throw Error(ErrorKind::PoleAtEndpoint, "K1 has a pole at t=0");
      return (t * t - 1.0) * (t * t - 9.0) / (4.0 * t);
    case 2:
      if (t == 1.0 || t == -3.0) throw Error(ErrorKind::PoleAtEndpoint, "K2 has a pole at t=1");
      return 4.0 * t * (t - 3.0) * (t + 1.0) / ((t + 3.0) * (t - 1.0));
    case 3:
      if (t == 3.0 || t == -1.0) throw Error(ErrorKind::PoleAtEndpoint, "K3 has a pole");
      return 4.0 * t * (t + 3.0) * (t - 1.0) / ((t - 3.0) * (t + 1.0));
    default:
      throw Error(ErrorKind::InvalidArgument, "coefficient index must be 1, 2 or 3");
  }
}

namespace {

double sign_of(DualitySign s) { return s == DualitySign::SelfDual ? 1.0 : -1.0; }

Real3 bracket(const Real3& a) {
  return {a[1] * a[2] - a[0], a[2] * a[0] - a[1], a[0] * a[1] - a[2]};
}

}  // namespace

Real3 asd_rhs(DualitySign sign, double t, const Real3& a) {
  const double s = sign_of(sign);
  Real3 b = bracket(a), out{};
  for (int i = 0; i < 3; ++i) {
    double k = coeff_K(i + 1, t);
    if (std::abs(k) < 1e-14) throw Error(ErrorKind::DegenerateCoefficient, "K vanishes at t=" + std::to_string(t));
    out[i] = b[i] / (0.5 * s * k);
  }
  return out;
}

// ---------------------------------------------------------------- profiles

ProfileTriple ProfileTriple::closed_form(ProfileKind kind) {
  if (kind == ProfileKind::NumericGrid) throw Error(ErrorKind::InvalidArgument, "not a closed form");
  ProfileTriple p;
  p.kind_ = kind;
  p.n_ = kind == ProfileKind::ClosedFormTrivial ? 1 : (kind == ProfileKind::ClosedFormEminus3 ? 3 : 0);
  return p;
}

ProfileTriple ProfileTriple::grid(int n, std::vector<ProfilePoint> points) {
  if (points.size() < 8) throw Error(ErrorKind::InvalidArgument, "grid profile needs at least 8 points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& q = points[k];
    if (!(q.t > 0.0 && q.t < 1.0)) throw Error(ErrorKind::InvalidArgument, "grid t outside (0,1)");
    if (k > 0 && !(q.t > points[k - 1].t)) throw Error(ErrorKind::InvalidArgument, "grid t not increasing");
  }
  ProfileTriple p;
  p.kind_ = ProfileKind::NumericGrid;
  p.n_ = std::abs(n);
  p.points_ = std::move(points);
  for (auto& c : p.cols_) c.reserve(p.points_.size());
  for (const auto& q : p.points_) {
    p.cols_[0].push_back(q.t);
    p.cols_[1].push_back(q.a1);
    p.cols_[2].push_back(q.a2);
    p.cols_[3].push_back(q.a3);
  }
  return p;
}

ProfileTriple ProfileTriple::with_signs(const Real3& s) const {
  ProfileTriple p = *this;
  for (int i = 0; i < 3; ++i) p.signs_[i] *= s[i];
  return p;
}

Real3 ProfileTriple::value(double t) const {
  const double d = t * t + 3.0;
  Real3 a{};
  switch (kind_) {
    case ProfileKind::ClosedFormTrivial: a = {1.0, 1.0, 1.0}; break;
    case ProfileKind::ClosedFormHopfSD:
      a = {(t * t - 9.0) / d, -2.0 * t * (t - 3.0) / d, -2.0 * t * (t + 3.0) / d};
      break;
    case ProfileKind::ClosedFormEminus3:
      a = {3.0 * (1.0 - t * t) / d, -6.0 * (t + 1.0) / d, -6.0 * (t - 1.0) / d};
      break;
    case ProfileKind::NumericGrid:
      for (int i = 0; i < 3; ++i) a[i] = local_interp(cols_[0], cols_[i + 1], t).value;
      break;
  }
  for (int i = 0; i < 3; ++i) a[i] *= signs_[i];
  return a;
}

Real3 ProfileTriple::derivative(double t) const {
  const double d = t * t + 3.0, d2 = d * d;
  Real3 a{};
  switch (kind_) {
    case ProfileKind::ClosedFormTrivial: a = {0.0, 0.0, 0.0}; break;
    case ProfileKind::ClosedFormHopfSD:
      a = {24.0 * t / d2, -6.0 * (t + 3.0) * (t - 1.0) / d2, 6.0 * (t - 3.0) * (t + 1.0) / d2};
      break;
    case ProfileKind::ClosedFormEminus3:
      a = {-24.0 * t / d2, 6.0 * (t + 3.0) * (t - 1.0) / d2, 6.0 * (t - 3.0) * (t + 1.0) / d2};
      break;
    case ProfileKind::NumericGrid:
      for (int i = 0; i < 3; ++i) a[i] = local_interp(cols_[0], cols_[i + 1], t).d1;
      break;
  }
  for (int i = 0; i < 3; ++i) a[i] *= signs_[i];
  return a;
}

std::optional<std::size_t> ProfileTriple::node_index(double t) const {
  if (kind_ != ProfileKind::NumericGrid) return std::nullopt;
  const auto& ts = cols_[0];
  auto it = std::lower_bound(ts.begin(), ts.end(), t - 1e-14);
  if (it == ts.end() || std::abs(*it - t) > 1e-14) return std::nullopt;
  return static_cast<std::size_t>(it - ts.begin());
}

ProfileTriple closed_form_profile(ProfileKind kind) { return ProfileTriple::closed_form(kind); }

namespace {

Real3 residual_from(DualitySign sign, double t, const Real3& a, const Real3& da) {
  const double s = sign_of(sign);
  Real3 b = bracket(a), r{};
  for (int i = 0; i < 3; ++i) r[i] = 0.5 * s * coeff_K(i + 1, t) * da[i] - b[i];
  return r;
}

}  // namespace

Real3 duality_residual_at(const ProfileTriple& p, DualitySign sign, std::size_t k) {
  if (p.kind() != ProfileKind::NumericGrid) throw Error(ErrorKind::InvalidArgument, "index form needs a grid profile");
  const auto& pts = p.points();
  std::vector<double> ts(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) ts[j] = pts[j].t;
  Stencil5 st = stencil5(ts, k);
  Real3 a{}, da{};
  for (int j = 0; j < 5; ++j) {
    const auto& q = pts[k - 2 + j];
    Real3 v{q.a1, q.a2, q.a3};
    for (int i = 0; i < 3; ++i) da[i] += st.d1[j] * v[i] * p.signs()[i];
  }
  const auto& q = pts[k];
  a = {q.a1 * p.signs()[0], q.a2 * p.signs()[1], q.a3 * p.signs()[2]};
  return residual_from(sign, ts[k], a, da);
}

Real3 duality_residual(const ProfileTriple& p, DualitySign sign, double t, bool global_negation) {
  const ProfileTriple& q = p;
  Real3 r;
  if (p.kind() == ProfileKind::NumericGrid) {
    auto k = p.node_index(t);
    if (!k) throw Error(ErrorKind::InvalidArgument, "t is not a grid node");
    if (global_negation) return duality_residual_at(p.with_global_negation(), sign, *k);
    return duality_residual_at(p, sign, *k);
  }
  Real3 a = q.value(t), da = q.derivative(t);
  if (global_negation)
    for (int i = 0; i < 3; ++i) {
      a[i] = -a[i];
      da[i] = -da[i];
    }
  r = residual_from(sign, t, a, da);
  return r;
}

// ---------------------------------------------------------------- endpoint series

namespace {

using Poly = std::vector<double>;

double coef(const Poly& p, int k) { return k >= 0 && k < static_cast<int>(p.size()) ? p[k] : 0.0; }

Poly shifted(const Poly& p, double t0, double su) {
  // p(t0 + su*u) as a polynomial in u
  Poly out(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    double binom = 1.0;
    for (std::size_t k = 0; k <= j; ++k) {
      out[k] += p[j] * binom * std::pow(t0, double(j - k)) * std::pow(su, double(k));
      binom = binom * double(j - k) / double(k + 1);
    }
  }
  return out;
}

struct KPolys {
  std::array<Poly, 3> num, den;
};

KPolys k_polys(Side side) {
  const double t0 = side == Side::Zero ? 0.0 : 1.0, su = side == Side::Zero ? 1.0 : -1.0;
  KPolys k;
  k.num = {shifted({9, 0, -10, 0, 1}, t0, su), shifted({0, -12, -8, 4}, t0, su), shifted({0, -12, 8, 4}, t0, su)};
  k.den = {shifted({0, 4}, t0, su), shifted({-3, 2, 1}, t0, su), shifted({-3, -2, 1}, t0, su)};
  return k;
}

}  // namespace

int free_parameter_count(int /*n*/, Side side) { return side == Side::Zero ? 2 : 1; }

EndpointSeries endpoint_series(int n, Side side, int order, std::span<const double> free_params) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "series order must be >= 1");
  if (n % 2 == 0) throw Error(ErrorKind::InvalidArgument, "n must be odd");
  const int M = order;
  const double su = side == Side::Zero ? 1.0 : -1.0;
  const double s = -1.0 * su;  // anti-self-dual branch
  const KPolys kp = k_polys(side);
  int v[3];
  for (int i = 0; i < 3; ++i) v[i] = std::abs(coef(kp.num[i], 0)) < 1e-14 ? 1 : 0;

  auto param = [&](std::size_t idx) { return idx < free_params.size() ? free_params[idx] : 0.0; };
  std::size_t next_param = 0;

  std::array<Poly, 3> c;
  for (auto& ci : c) ci.assign(M + 1, 0.0);
  if (side == Side::Zero) {
    double w = param(next_param++);
    c[0][0] = 1.0;
    c[1][0] = w;
    c[2][0] = w;
  } else if (std::abs(n) == 1) {
    double q = param(next_param++);
    c[0][0] = 0.5 * q;
    c[1][0] = -n;
    c[2][0] = -n * 0.5 * q;
  } else {
    c[1][0] = -n;
  }

  // coefficient of u^o in  s*N_i a_i' - 2 D_i (a_j a_k - a_i)
  auto eq = [&](const std::array<Poly, 3>& cc, int i, int o) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    double L = 0.0, R = 0.0;
    for (int r = 0; r <= o; ++r) {
      int q = o - r;
      double ad = q + 1 <= M ? (q + 1) * cc[i][q + 1] : 0.0;
      double b = -cc[i][q];
      for (int p = 0; p <= q; ++p) b += cc[j][p] * cc[k][q - p];
      L += coef(kp.num[i], r) * ad;
      R += coef(kp.den[i], r) * b;
    }
    return s * L - 2.0 * R;
  };

  for (int i = 0; i < 3; ++i)
    if (v[i] == 1 && std::abs(eq(c, i, 0)) > 1e-12)
      throw Error(ErrorKind::NoAnalyticBranch, "boundary data inconsistent at order 0");

  EndpointSeries out;
  out.n = n;
  out.side = side;
  for (int m = 1; m <= M; ++m) {
    Eigen::Vector3d e0;
    Eigen::Matrix3d L;
    for (int i = 0; i < 3; ++i) e0(i) = eq(c, i, m - 1 + v[i]);
    for (int q = 0; q < 3; ++q) {
      auto cc = c;
      cc[q][m] = 1.0;
      for (int i = 0; i < 3; ++i) L(i, q) = eq(cc, i, m - 1 + v[i]) - e0(i);
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    Eigen::Vector3d x;
    if (sv(2) < 1e-9 * sv(0)) {
      svd.setThreshold(1e-9);
      x = svd.solve(-e0);
      if ((L * x + e0).norm() > 1e-9 * (1.0 + e0.norm()))
        throw Error(ErrorKind::NoAnalyticBranch, "incompatible resonance at order " + std::to_string(m));
      Eigen::Vector3d nv = svd.matrixV().col(2);
      for (int i = 0; i < 3; ++i)
        if (std::abs(nv(i)) > 1e-8) {
          if (nv(i) < 0) nv = -nv;
          break;
        }
      x += param(next_param++) * nv;
      out.free_levels.push_back(m);
    } else {
      x = L.fullPivLu().solve(-e0);
    }
    for (int i = 0; i < 3; ++i) c[i][m] = x(i);
  }
  out.coeffs = c;
  return out;
}

Real3 EndpointSeries::eval(double t) const {
  double u = side == Side::Zero ? t : 1.0 - t;
  Real3 a{};
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (auto it = coeffs[i].rbegin(); it != coeffs[i].rend(); ++it) acc = acc * u + *it;
    a[i] = acc;
  }
  return a;
}

Real3 EndpointSeries::eval_derivative(double t) const {
  double u = side == Side::Zero ? t : 1.0 - t, su = side == Side::Zero ? 1.0 : -1.0;
  Real3 a{};
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (std::size_t m = coeffs[i].size() - 1; m >= 1; --m) acc = acc * u + double(m) * coeffs[i][m];
    a[i] = su * acc;
  }
  return a;
}

// ---------------------------------------------------------------- shooting

namespace {

using Integrator = Dopri5<double, 3>;

Integrator make_integrator(double t0, const Real3& y0, const BvpConfig& cfg) {
  OdeOptions opt;
  opt.rtol = cfg.rtol;
  opt.atol = cfg.atol;
  opt.max_steps = 400000;
  return Integrator([](double t, const Real3& a) { return asd_rhs(DualitySign::AntiSelfDual, t, a); }, t0, y0, opt);
}

struct Branches {
  EndpointSeries left, right;
};

Branches branches(int n, const Real3& p, int order) {
  double lp[2] = {p[0], p[1]}, rp[1] = {p[2]};
  return {endpoint_series(n, Side::Zero, order, lp), endpoint_series(n, Side::One, order, rp)};
}

double norm3(const Real3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Starting points for |n|; the first is a smooth fit in n, the rest are fallbacks.
std::vector<Real3> default_guesses(int n) {
  double m = std::abs(n);
  return {{-std::sqrt(2.0 * m), 3.0 - 2.0 * m, std::max(1.0, 0.5 * m)},
          {-2.0, -4.0, 1.0},
          {-1.0, 0.0, 2.0},
          {-0.5 * m, -2.0 * m, 0.5 * m},
          {-std::sqrt(2.0 * m), 3.0 - 2.0 * m, 2.0 * m}};
}

}  // namespace

namespace {

// Both branches run through the same stops whether or not samples are kept, so the
// converged parameters absorb the integration error of exactly the path that is sampled.
Real3 sweep(int m, const Real3& params, const BvpConfig& cfg, std::vector<ProfilePoint>* out) {
  Branches b = branches(m, params, cfg.series_order);
  const double tm = cfg.match_point;
  std::vector<double> ts = cosine_nodes(cfg.eps, 1.0 - cfg.eps, cfg.grid_size);
  std::size_t split = 0;
  while (split < ts.size() && ts[split] <= tm) ++split;
  if (out) out->resize(ts.size());
  Integrator left = make_integrator(cfg.eps, b.left.eval(cfg.eps), cfg);
  for (std::size_t k = 0; k < split; ++k) {
    Real3 a = k == 0 ? b.left.eval(cfg.eps) : left.advance_to(ts[k]);
    if (out) (*out)[k] = {ts[k], a[0], a[1], a[2]};
  }
  Real3 l = left.advance_to(tm);
  Integrator right = make_integrator(1.0 - cfg.eps, b.right.eval(1.0 - cfg.eps), cfg);
  for (std::size_t k = ts.size(); k-- > split;) {
    Real3 a = k + 1 == ts.size() ? b.right.eval(1.0 - cfg.eps) : right.advance_to(ts[k]);
    if (out) (*out)[k] = {ts[k], a[0], a[1], a[2]};
  }
  Real3 r = right.advance_to(tm);
  return {l[0] - r[0], l[1] - r[1], l[2] - r[2]};
}

}  // namespace

Real3 shooting_defect(int n, const Real3& params, const BvpConfig& cfg) {
  return sweep(std::abs(n), params, cfg, nullptr);
}

BvpResult solve_bvp(const BvpConfig& cfg) {
  if (cfg.n % 2 == 0) throw Error(ErrorKind::InvalidArgument, "n must be odd");
  if (cfg.grid_size < 64) throw Error(ErrorKind::InvalidArgument, "grid_size must be >= 64");
  if (!(cfg.match_point > 0.0 && cfg.match_point < 1.0)) throw Error(ErrorKind::InvalidArgument, "match point outside (0,1)");
  if (cfg.series_order < 3) throw Error(ErrorKind::InvalidArgument, "series order must be >= 3");
  const int m = std::abs(cfg.n);

  auto defect = [&](const Real3& p, Real3& out) {
    try {
      out = shooting_defect(m, p, cfg);
      return std::isfinite(norm3(out));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoAnalyticBranch) throw;
      return false;
    }
  };

  std::vector<Real3> guesses;
  if (cfg.initial_guess) guesses.push_back(*cfg.initial_guess);
  for (const auto& g : default_guesses(m)) guesses.push_back(g);

  Real3 best_p{};
  double best = std::numeric_limits<double>::infinity();
  int iters = 0;
  bool converged = false;
  for (const auto& g : guesses) {
    Real3 p = g, f;
    if (!defect(p, f)) continue;
    double fn = norm3(f);
    for (int it = 0; it < cfg.max_iter; ++it) {
      if (fn < cfg.newton_tol) break;
      Eigen::Matrix3d J;
      bool ok = true;
      for (int q = 0; q < 3 && ok; ++q) {
        Real3 pp = p, pm = p, fp, fm;
        pp[q] += cfg.fd_step;
        pm[q] -= cfg.fd_step;
        ok = defect(pp, fp) && defect(pm, fm);
        for (int i = 0; i < 3 && ok; ++i) J(i, q) = (fp[i] - fm[i]) / (2.0 * cfg.fd_step);
      }
      if (!ok) break;
      Eigen::Vector3d rhs(-f[0], -f[1], -f[2]);
      Eigen::Vector3d dp = J.fullPivLu().solve(rhs);
      if (!dp.allFinite()) break;
      double lam = 1.0;
      bool improved = false;
      for (int h = 0; h < 12; ++h, lam *= 0.5) {
        Real3 trial{p[0] + lam * dp(0), p[1] + lam * dp(1), p[2] + lam * dp(2)}, ft;
        if (defect(trial, ft) && norm3(ft) < fn) {
          p = trial;
          f = ft;
          fn = norm3(ft);
          improved = true;
          break;
        }
      }
      ++iters;
      if (!improved) break;
    }
    if (fn < best) {
      best = fn;
      best_p = p;
    }
    if (fn < cfg.newton_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence, "shooting did not converge for n=" + std::to_string(cfg.n) +
                                              ", last defect " + std::to_string(best));

  // n < 0 is the (a1, -a2, -a3) image of |n|
  Branches b = branches(m, best_p, cfg.series_order);
  const double flip = cfg.n < 0 ? -1.0 : 1.0;
  std::vector<ProfilePoint> pts;
  sweep(m, best_p, cfg, &pts);
  for (auto& q : pts) {
    q.a2 *= flip;
    q.a3 *= flip;
  }
  return {ProfileTriple::grid(cfg.n, std::move(pts)), best_p, best, iters, b.left, b.right};
}

double conserved_tr(const ProfileTriple& p, double t) {
  ResidueTable tab = residue_closed_form(t);
  Real3 a = p.value(t);
  Complex s{};
  for (int i = 0; i < 3; ++i) {
    Complex al = tab(i, PoleLabel::Infinity);
    s += a[i] * a[i] * al * al;
  }
  return (-2.0 * s).real();
}

}  // namespace pinst
