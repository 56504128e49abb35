#include "pinst/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pinst/errors.hpp"

namespace pinst {

namespace {
const Complex I{0.0, 1.0};

Vec2 normalized(Vec2 v) {
  double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  // fix the phase so the dominant component is real positive
  Complex big = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
  Complex phase = std::conj(big) / std::abs(big);
  return {v[0] * phase / n, v[1] * phase / n};
}

Vec2 null_vector(Complex a, Complex b, Complex c, Complex lam) {
  // kernel of [[a-lam, b], [c, -a-lam]]
  Vec2 r1{b, lam - a};
  Vec2 r2{lam + a, c};
  double n1 = std::norm(r1[0]) + std::norm(r1[1]);
  double n2 = std::norm(r2[0]) + std::norm(r2[1]);
  return normalized(n1 >= n2 ? r1 : r2);
}
}  // namespace

Mat2 Mat2::inverse() const {
  Complex d = det();
  if (d == Complex{}) throw Error(ErrorKind::SingularMatrix, "2x2 matrix is singular");
  return {m11 / d, -m01 / d, -m10 / d, m00 / d};
}

double Mat2::norm() const {
  return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
}

double Mat2::max_abs() const {
  return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}
Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}
Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}
Mat2 operator*(Complex s, const Mat2& a) { return {s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }

TracelessMat2::TracelessMat2(const Mat2& m, double tol) {
  double scale = std::max(m.max_abs(), 1e-300);
  if (std::abs(m.trace()) > tol * scale)
    throw Error(ErrorKind::InvalidArgument, "matrix is not traceless");
  a_ = 0.5 * (m.m00 - m.m11);
  b_ = m.m01;
  c_ = m.m10;
}

TracelessMat2 TracelessMat2::from_basis(Complex c1, Complex c2, Complex c3) {
  return {I * c1, c2 + I * c3, -c2 + I * c3};
}

Vec3 TracelessMat2::basis_coords() const {
  return {-I * a_, 0.5 * (b_ - c_), -0.5 * I * (b_ + c_)};
}

Complex TracelessMat2::operator()(int i, int j) const {
  if (i == 0) return j == 0 ? a_ : b_;
  return j == 0 ? c_ : -a_;
}

double TracelessMat2::norm() const {
  return std::sqrt(2.0 * std::norm(a_) + std::norm(b_) + std::norm(c_));
}

bool TracelessMat2::finite() const {
  auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(a_) && ok(b_) && ok(c_);
}

TracelessMat2& TracelessMat2::operator+=(const TracelessMat2& o) {
  a_ += o.a_;
  b_ += o.b_;
  c_ += o.c_;
  return *this;
}
TracelessMat2& TracelessMat2::operator-=(const TracelessMat2& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  c_ -= o.c_;
  return *this;
}
TracelessMat2& TracelessMat2::operator*=(Complex s) {
  a_ *= s;
  b_ *= s;
  c_ *= s;
  return *this;
}

TracelessMat2 operator+(TracelessMat2 x, const TracelessMat2& y) { return x += y; }
TracelessMat2 operator-(TracelessMat2 x, const TracelessMat2& y) { return x -= y; }
TracelessMat2 operator*(Complex s, TracelessMat2 x) { return x *= s; }
TracelessMat2 operator*(double s, TracelessMat2 x) { return x *= Complex{s, 0.0}; }

TracelessMat2 conjugate_by(const Mat2& p, const TracelessMat2& a) {
  Mat2 r = p.inverse() * a.mat() * p;
  return {0.5 * (r.m00 - r.m11), r.m01, r.m10};
}

const SuBasis& su_basis() {
  static const SuBasis basis{TracelessMat2{I, 0.0, 0.0}, TracelessMat2{0.0, 1.0, -1.0},
                             TracelessMat2{0.0, I, I}};
  return basis;
}

TracelessMat2 commutator(const TracelessMat2& x, const TracelessMat2& y) {
  // [[a,b],[c,-a]] and [[p,q],[r,-p]]
  Complex a = x.a(), b = x.b(), c = x.c();
  Complex p = y.a(), q = y.b(), r = y.c();
  return {b * r - q * c, 2.0 * (a * q - p * b), 2.0 * (c * p - r * a)};
}

Complex det2(const TracelessMat2& m) { return -m.a() * m.a() - m.b() * m.c(); }

Complex trace_sq(const TracelessMat2& m) { return 2.0 * (m.a() * m.a() + m.b() * m.c()); }

Complex trace_prod(const TracelessMat2& x, const TracelessMat2& y) {
  return 2.0 * x.a() * y.a() + x.b() * y.c() + x.c() * y.b();
}

Eigen2 eigen2(const TracelessMat2& m, double tol) {
  Complex disc = m.a() * m.a() + m.b() * m.c();
  double scale = m.norm();
  if (std::abs(2.0 * disc) <= tol * scale * scale)
    throw Error(ErrorKind::DegenerateMatrix, "nilpotent or zero matrix has no eigenbasis");
  Complex lam = std::sqrt(disc);
  if (lam.real() < 0.0 || (lam.real() == 0.0 && lam.imag() < 0.0)) lam = -lam;
  return {lam, null_vector(m.a(), m.b(), m.c(), lam), null_vector(m.a(), m.b(), m.c(), -lam)};
}

Complex Mat3::det() const {
  return e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
         e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
         e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
}

double Mat3::norm() const {
  double s = 0.0;
  for (const auto& row : e)
    for (Complex z : row) s += std::norm(z);
  return std::sqrt(s);
}

Vec3 Mat3::operator*(const Vec3& v) const {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += e[i][j] * v[j];
  return out;
}

Mat3 Mat3::identity() {
  Mat3 m;
  for (int i = 0; i < 3; ++i) m.e[i][i] = 1.0;
  return m;
}

Vec3 solve3(const Mat3& m, const Vec3& b, double tol) {
  double nm = m.norm();
  if (!(std::abs(m.det()) > tol * nm * nm * nm))
    throw Error(ErrorKind::SingularMatrix, "3x3 system is singular");
  auto a = m.e;
  Vec3 x = b;
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(x[col], x[piv]);
    for (int r = col + 1; r < 3; ++r) {
      Complex f = a[r][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[r][k] -= f * a[col][k];
      x[r] -= f * x[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    for (int k = r + 1; k < 3; ++k) x[r] -= a[r][k] * x[k];
    x[r] /= a[r][r];
  }
  return x;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::PoleAtEndpoint: return "PoleAtEndpoint";
    case ErrorKind::DegenerateCoefficient: return "DegenerateCoefficient";
    case ErrorKind::NoAnalyticBranch: return "NoAnalyticBranch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateLine: return "DegenerateLine";
    case ErrorKind::OnDivisor: return "OnDivisor";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::BadDeformationParameter: return "BadDeformationParameter";
    case ErrorKind::ReducibleSystem: return "ReducibleSystem";
    case ErrorKind::IndeterminateY: return "IndeterminateY";
    case ErrorKind::PathTooClose: return "PathTooClose";
    case ErrorKind::SingularArgument: return "SingularArgument";
    case ErrorKind::SingularityEncountered: return "SingularityEncountered";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace pinst
