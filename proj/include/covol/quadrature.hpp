#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature for real- and complex-valued
// integrands on finite intervals, with helpers for even integrands on the
// whole line that decay rapidly away from the origin.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

#include "covol/common.hpp"

namespace covol {
namespace quad {

namespace detail {

// K15 nodes on [0,1] of the positive half, with Kronrod and Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename T>
struct Piece {
  double a, b;
  T value;
  double err;
};

template <typename T, typename F>
Piece<T> gk15(const F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T resk = kWgk[7] * f(c);
  T resg = kWg[3] * f(c);
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    T fsum = f(c - dx) + f(c + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  resk *= h;
  resg *= h;
  return {a, b, resk, std::abs(resk - resg)};
}

}  // namespace detail

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

// Adaptive integration of f over [a, b]. T is double or complex<double>.
template <typename T, typename F>
T integrate(const F& f, double a, double b, const Options& opt = {}) {
  auto cmp = [](const detail::Piece<T>& p, const detail::Piece<T>& q) { return p.err < q.err; };
  std::priority_queue<detail::Piece<T>, std::vector<detail::Piece<T>>, decltype(cmp)> heap(cmp);
  heap.push(detail::gk15<T>(f, a, b));
  T total = heap.top().value;
  double err = heap.top().err;
  int n = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && n < opt.max_intervals) {
    detail::Piece<T> worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  if (!(err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 50.0 + 1e-300))
    fail(Errc::QuadratureNotConverged, "interval budget exhausted, err=" + std::to_string(err));
  return total;
}

template <typename F>
double integrate_real(const F& f, double a, double b, const Options& opt = {}) {
  return integrate<double>(f, a, b, opt);
}

// Integral over [a, infinity) of a function that eventually decays fast:
// marches in doubling windows until a window contributes less than the
// tolerance relative to the accumulated total.
template <typename T, typename F>
T integrate_tail(const F& f, double a, double width0, const Options& opt = {}) {
  T total{};
  double left = a, width = width0;
  for (int k = 0; k < 64; ++k) {
    T piece = integrate<T>(f, left, left + width, opt);
    total += piece;
    left += width;
    width *= 2.0;
    if (std::abs(piece) < 0.5 * std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) return total;
  }
  fail(Errc::QuadratureNotConverged, "tail did not decay");
}

// Whole-line integral of an even-in-structure integrand concentrated near 0
// with characteristic scale `scale`.
template <typename T, typename F>
T integrate_line(const F& f, double scale, const Options& opt = {}) {
  T core = integrate<T>(f, -8.0 * scale, 8.0 * scale, opt);
  T up = integrate_tail<T>(f, 8.0 * scale, 8.0 * scale, opt);
  T down = integrate_tail<T>([&](double t) { return f(-t); }, 8.0 * scale, 8.0 * scale, opt);
  return core + up + down;
}

}  // namespace quad
}  // namespace covol
