#include "pinst/isomonodromy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pinst/errors.hpp"
#include "pinst/numdiff.hpp"
#include "pinst/ode.hpp"

namespace pinst {

FuchsianFamily build_family(const ProfileTriple& profile, const std::vector<double>& ts, std::string source) {
  FuchsianFamily fam;
  fam.source = std::move(source);
  fam.samples.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (k > 0 && !(ts[k] > ts[k - 1])) throw Error(ErrorKind::InvalidArgument, "family t values must increase");
    fam.samples.push_back(fuchsian_data(profile, ts[k]));
    if (k > 0 && !(fam.samples[k].x.real() > fam.samples[k - 1].x.real()))
      throw Error(ErrorKind::InvalidArgument, "x is not strictly increasing along the family");
  }
  return fam;
}

std::array<TracelessMat2, 3> schlesinger_rhs(const FuchsianData& f) {
  const Complex x = f.x;
  if (std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12)
    throw Error(ErrorKind::BadDeformationParameter, "x must avoid 0 and 1");
  TracelessMat2 c0 = (1.0 / x) * commutator(f.A0(), f.Ax());
  TracelessMat2 c1 = (1.0 / (x - 1.0)) * commutator(f.A1(), f.Ax());
  return {c0, c1, -(c0 + c1)};
}

SchlesingerCheck schlesinger_check(const FuchsianFamily& fam, std::size_t k) {
  const auto& s = fam.samples;
  if (k < 2 || k + 2 >= s.size()) throw Error(ErrorKind::InvalidArgument, "5-point stencil out of range");
  // stencil in u = log(x - 1), so dx/du = x - 1 exactly
  std::array<double, 5> u;
  for (int j = 0; j < 5; ++j) {
    Complex x = s[k - 2 + j].x;
    if (!(x.real() > 1.0) || std::abs(x.imag()) > 1e-12 * std::abs(x))
      throw Error(ErrorKind::BadDeformationParameter, "family x must be real and > 1");
    u[j] = std::log(x.real() - 1.0);
  }
  Stencil5 w = stencil5(u, 2);
  const Complex dxdu = s[k].x - 1.0;
  const FuchsianData& f = s[k];
  auto rhs = schlesinger_rhs(f);

  // defect D_p = dA_p/dx - rhs_p; remove the part of the form [G, A_p]
  std::array<TracelessMat2, 3> diff, defect;
  double scale = 1.0;
  for (int p = 0; p < 3; ++p) {
    TracelessMat2 d;
    for (int j = 0; j < 5; ++j) d += w.d1[j] * s[k - 2 + j].A[p];
    diff[p] = (1.0 / dxdu) * d;
    defect[p] = diff[p] - rhs[p];
    scale += diff[p].norm();
  }
  const auto& basis = su_basis();
  Eigen::Matrix<Complex, 9, 3> M;
  Eigen::Matrix<Complex, 9, 1> b;
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      TracelessMat2 c = commutator(basis[q], f.A[p]);
      M(3 * p, q) = c.a();
      M(3 * p + 1, q) = c.b();
      M(3 * p + 2, q) = c.c();
    }
    b(3 * p) = defect[p].a();
    b(3 * p + 1) = defect[p].b();
    b(3 * p + 2) = defect[p].c();
  }
  // the diagonal entry appears twice in the Frobenius norm
  for (int p = 0; p < 3; ++p) {
    M.row(3 * p) *= std::sqrt(2.0);
    b(3 * p) *= std::sqrt(2.0);
  }
  Eigen::Matrix<Complex, 3, 1> g = M.completeOrthogonalDecomposition().solve(b);
  SchlesingerCheck out;
  out.gauge = TracelessMat2::from_basis(g(0), g(1), g(2));
  double acc = 0.0;
  for (int p = 0; p < 3; ++p) acc += (defect[p] - commutator(out.gauge, f.A[p])).norm();
  out.absolute = acc;
  out.relative = acc / scale;
  return out;
}

double schlesinger_residual(const FuchsianFamily& fam, std::size_t k) { return schlesinger_check(fam, k).absolute; }

std::array<double, 4> isospectral_drift(const FuchsianFamily& fam) {
  std::array<double, 4> out{};
  if (fam.samples.empty()) return out;
  for (int p = 0; p < 4; ++p) {
    double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo, ilo = rlo, ihi = -rlo;
    for (const auto& f : fam.samples) {
      Complex v = trace_sq(f.A[p]);
      rlo = std::min(rlo, v.real());
      rhi = std::max(rhi, v.real());
      ilo = std::min(ilo, v.imag());
      ihi = std::max(ihi, v.imag());
    }
    out[p] = std::hypot(rhi - rlo, ihi - ilo);
  }
  return out;
}

namespace {

struct EigenFrame {
  Complex lambda;
  Mat2 P;
};

EigenFrame branch_frame(const FuchsianData& f, Branch branch) {
  Eigen2 e = eigen2(f.Ainf());
  Vec2 v = branch == Branch::Plus ? e.v_plus : e.v_minus;
  Vec2 o = branch == Branch::Plus ? e.v_minus : e.v_plus;
  return {branch == Branch::Plus ? e.lambda : -e.lambda, Mat2{v[0], o[0], v[1], o[1]}};
}

}  // namespace

Complex branch_eigenvalue(const FuchsianData& f, Branch branch) { return branch_frame(f, branch).lambda; }

Complex extract_y(const FuchsianData& f, Branch branch) {
  EigenFrame fr = branch_frame(f, branch);
  const Complex x = f.x;
  std::array<Complex, 3> b;
  double bmax = 0.0;
  for (int p = 0; p < 3; ++p) {
    b[p] = conjugate_by(fr.P, f.A[p]).c();
    bmax = std::max(bmax, std::abs(b[p]));
  }
  if (bmax < 1e-12) throw Error(ErrorKind::ReducibleSystem, "common eigenvector at every point");
  // N(z) = b0 (z-1)(z-x) + b1 z (z-x) + bx z (z-1) = c2 z^2 + c1 z + c0, and c2 = -b_inf = 0
  // up to rounding on the scale of the residues
  double scale = 0.0;
  for (const auto& a : f.A) scale = std::max(scale, a.norm());
  const Complex c2 = b[0] + b[1] + b[2];
  const Complex c1 = -b[0] * (1.0 + x) - b[1] * x - b[2];
  const Complex c0 = b[0] * x;
  auto excluded = [&](Complex z) {
    return !std::isfinite(std::abs(z)) || std::abs(z) < 1e-10 || std::abs(z - 1.0) < 1e-10 || std::abs(z - x) < 1e-10;
  };
  Complex y;
  if (std::abs(c2) <= 1e-10 * scale) {
    if (std::abs(c1) <= 1e-12 * bmax) throw Error(ErrorKind::IndeterminateY, "numerator is constant");
    y = -c0 / c1;
    if (std::abs(c1 * y + c0) >= 1e-10 * bmax * std::max(1.0, std::abs(y)))
      throw Error(ErrorKind::IndeterminateY, "root check failed");
  } else {
    // residues that do not sum to zero: accept the quadratic only when exactly one root is admissible
    Complex disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    Complex r1 = (-c1 + disc) / (2.0 * c2), r2 = (-c1 - disc) / (2.0 * c2);
    bool ok1 = !excluded(r1), ok2 = !excluded(r2);
    if (ok1 == ok2) throw Error(ErrorKind::IndeterminateY, "numerator roots are not separated by the excluded set");
    y = ok1 ? r1 : r2;
  }
  if (excluded(y)) throw Error(ErrorKind::IndeterminateY, "root lies in {0, 1, x, inf}");
  return y;
}

PviParams jimbo_miwa_params(const FuchsianData& f, Branch branch) {
  Complex lam = branch_eigenvalue(f, branch);
  Complex a = 2.0 * lam - 1.0;
  return {0.5 * a * a, 2.0 * det2(f.A0()), -2.0 * det2(f.A1()), 0.5 * (1.0 + 4.0 * det2(f.Ax()))};
}

namespace {

double segment_distance(Complex a, Complex b, Complex z) {
  Complex d = b - a;
  double n2 = std::norm(d);
  double s = n2 > 0.0 ? std::clamp(((z - a) * std::conj(d)).real() / n2, 0.0, 1.0) : 0.0;
  return std::abs(a + s * d - z);
}

}  // namespace

FuchsianData schlesinger_integrate(const FuchsianData& f0, Complex x_target, int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  FuchsianData out = f0;
  out.t = std::numeric_limits<double>::quiet_NaN();
  if (x_target == f0.x) return out;
  for (Complex c : {Complex{0.0}, Complex{1.0}})
    if (segment_distance(f0.x, x_target, c) <= 1e-3)
      throw Error(ErrorKind::PathTooClose, "path passes within 1e-3 of a fixed pole");

  using Integrator = Dopri5<Complex, 9>;
  const Complex x0 = f0.x, dx = x_target - x0;
  auto unpack = [](const Integrator::State& st, Complex xs) {
    FuchsianData f;
    f.x = xs;
    for (int p = 0; p < 3; ++p) f.A[p] = TracelessMat2(st[3 * p], st[3 * p + 1], st[3 * p + 2]);
    f.A[3] = -(f.A[0] + f.A[1] + f.A[2]);
    return f;
  };
  auto rhs = [&](double s, const Integrator::State& st) {
    FuchsianData f = unpack(st, x0 + s * dx);
    auto d = schlesinger_rhs(f);
    Integrator::State out;
    for (int p = 0; p < 3; ++p) {
      out[3 * p] = d[p].a() * dx;
      out[3 * p + 1] = d[p].b() * dx;
      out[3 * p + 2] = d[p].c() * dx;
    }
    return out;
  };
  Integrator::State y0;
  for (int p = 0; p < 3; ++p) {
    y0[3 * p] = f0.A[p].a();
    y0[3 * p + 1] = f0.A[p].b();
    y0[3 * p + 2] = f0.A[p].c();
  }
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  opt.h_init = 1.0 / steps;
  Integrator ode(rhs, 0.0, y0, opt);
  Integrator::State y = ode.advance_to(1.0);
  FuchsianData res = unpack(y, x_target);
  res.t = out.t;
  return res;
}

double invariant_mismatch(const FuchsianData& a, const FuchsianData& b) {
  double m = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = p; q < 4; ++q) m = std::max(m, std::abs(trace_prod(a.A[p], a.A[q]) - trace_prod(b.A[p], b.A[q])));
  return m;
}

}  // namespace pinst
