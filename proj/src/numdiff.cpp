#include "pinst/numdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pinst/errors.hpp"

namespace pinst {

std::vector<std::array<double, 3>> fd_weights(double z, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::array<double, 3>> c(n, {0.0, 0.0, 0.0});
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    int mn = static_cast<int>(std::min<std::size_t>(i, 2));
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

Stencil5 stencil5(std::span<const double> s, std::size_t k) {
  if (k < 2 || k + 2 >= s.size()) throw Error(ErrorKind::InvalidArgument, "5-point stencil out of range");
  auto w = fd_weights(s[k], s.subspan(k - 2, 5));
  Stencil5 out;
  for (int j = 0; j < 5; ++j) {
    out.d1[j] = w[j][1];
    out.d2[j] = w[j][2];
  }
  return out;
}

Interp local_interp(std::span<const double> xs, std::span<const double> ys, double t, int npts) {
  const std::size_t n = xs.size();
  if (n < static_cast<std::size_t>(npts)) throw Error(ErrorKind::InvalidArgument, "too few interpolation nodes");
  std::size_t hi = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), t) - xs.begin());
  std::size_t lo = hi >= static_cast<std::size_t>(npts / 2) ? hi - npts / 2 : 0;
  lo = std::min(lo, n - npts);
  auto w = fd_weights(t, xs.subspan(lo, npts));
  Interp r{0.0, 0.0};
  for (int j = 0; j < npts; ++j) {
    r.value += w[j][0] * ys[lo + j];
    r.d1 += w[j][1] * ys[lo + j];
  }
  return r;
}

std::vector<double> cosine_nodes(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    double c = 0.5 * (1.0 - std::cos(std::numbers::pi * double(k) / double(n - 1)));
    t[k] = a + (b - a) * c;
  }
  t.front() = a;
  t.back() = b;
  return t;
}

std::vector<double> logit_nodes(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b < 1.0 && a < b)) throw Error(ErrorKind::InvalidArgument, "logit nodes need 0 < a < b < 1");
  double ua = std::log(a / (1.0 - a)), ub = std::log(b / (1.0 - b));
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    double u = ua + (ub - ua) * double(k) / double(n - 1);
    t[k] = 1.0 / (1.0 + std::exp(-u));
  }
  t.front() = a;
  t.back() = b;
  return t;
}

}  // namespace pinst
