#pragma once

// Fixed-size complex 2x2 / 3x3 kernel and the su(2) basis.

#include <array>
#include <complex>

namespace pinst {

using Complex = std::complex<double>;
using Vec2 = std::array<Complex, 2>;
using Vec3 = std::array<Complex, 3>;

inline constexpr double kDefaultTol = 1e-10;

struct Mat2 {
  Complex m00{}, m01{}, m10{}, m11{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Complex det() const { return m00 * m11 - m01 * m10; }
  Complex trace() const { return m00 + m11; }
  Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
  Mat2 inverse() const;
  double norm() const;  // Frobenius
  double max_abs() const;

  Vec2 operator*(const Vec2& v) const { return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]}; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, const Mat2& a);

// Traceless 2x2 matrix stored as [[a, b], [c, -a]]; tracelessness holds by construction.
class TracelessMat2 {
 public:
  TracelessMat2() = default;
  TracelessMat2(Complex a, Complex b, Complex c) : a_(a), b_(b), c_(c) {}
  // Throws InvalidArgument if |tr M| exceeds tol on the scale of the largest entry.
  explicit TracelessMat2(const Mat2& m, double tol = 1e-12);

  // c1 X1 + c2 X2 + c3 X3
  static TracelessMat2 from_basis(Complex c1, Complex c2, Complex c3);
  static TracelessMat2 from_basis(const Vec3& c) { return from_basis(c[0], c[1], c[2]); }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex operator()(int i, int j) const;

  Mat2 mat() const { return {a_, b_, c_, -a_}; }
  Vec3 basis_coords() const;  // inverse of from_basis
  TracelessMat2 adjoint() const { return {std::conj(a_), std::conj(c_), std::conj(b_)}; }
  double norm() const;        // Frobenius
  bool finite() const;

  TracelessMat2 operator-() const { return {-a_, -b_, -c_}; }
  TracelessMat2& operator+=(const TracelessMat2& o);
  TracelessMat2& operator-=(const TracelessMat2& o);
  TracelessMat2& operator*=(Complex s);

 private:
  Complex a_{}, b_{}, c_{};
};

TracelessMat2 operator+(TracelessMat2 x, const TracelessMat2& y);
TracelessMat2 operator-(TracelessMat2 x, const TracelessMat2& y);
TracelessMat2 operator*(Complex s, TracelessMat2 x);
TracelessMat2 operator*(double s, TracelessMat2 x);
// P^{-1} A P
TracelessMat2 conjugate_by(const Mat2& p, const TracelessMat2& a);

struct SuBasis {
  TracelessMat2 X1, X2, X3;
  const TracelessMat2& operator[](int k) const { return k == 0 ? X1 : (k == 1 ? X2 : X3); }
};
const SuBasis& su_basis();

TracelessMat2 commutator(const TracelessMat2& a, const TracelessMat2& b);
Complex det2(const TracelessMat2& a);
Complex trace_sq(const TracelessMat2& a);
Complex trace_prod(const TracelessMat2& a, const TracelessMat2& b);

struct Eigen2 {
  Complex lambda;
  Vec2 v_plus, v_minus;
};
// Eigenvalues +-lambda with Re(lambda) >= 0 (tie: Im >= 0) and unit eigenvectors.
// DegenerateMatrix when |tr A^2| <= tol * |A|^2.
Eigen2 eigen2(const TracelessMat2& a, double tol = kDefaultTol);

struct Mat3 {
  std::array<std::array<Complex, 3>, 3> e{};

  Complex& operator()(int i, int j) { return e[i][j]; }
  Complex operator()(int i, int j) const { return e[i][j]; }
  Complex det() const;
  double norm() const;  // Frobenius
  Vec3 operator*(const Vec3& v) const;
  static Mat3 identity();
};

// Gaussian elimination with partial pivoting; SingularMatrix if |det M| <= tol*|M|^3.
Vec3 solve3(const Mat3& m, const Vec3& b, double tol = kDefaultTol);

}  // namespace pinst
