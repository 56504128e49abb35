#pragma once

// Finite-difference weights on arbitrary nodes and local polynomial interpolation.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace pinst {

// Fornberg weights for derivatives 0..2 at z from the given nodes.
// w[m][j] multiplies f(nodes[j]) in the m-th derivative.
std::vector<std::array<double, 3>> fd_weights(double z, std::span<const double> nodes);

struct Stencil5 {
  std::array<double, 5> d1{}, d2{};
};

// Centered 5-point weights at s[k]; requires 2 <= k <= s.size()-3.
Stencil5 stencil5(std::span<const double> s, std::size_t k);

// Evaluate (and differentiate) the degree npts-1 interpolant through the npts nodes nearest t.
struct Interp {
  double value, d1;
};
Interp local_interp(std::span<const double> xs, std::span<const double> ys, double t, int npts = 8);

// Cosine-clustered nodes on [a, b].
std::vector<double> cosine_nodes(double a, double b, std::size_t n);
// Nodes uniform in log(t/(1-t)) on [a, b] subset of (0,1).
std::vector<double> logit_nodes(double a, double b, std::size_t n);

}  // namespace pinst
