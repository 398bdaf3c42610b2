#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/series.hpp"

namespace pj {

using ScalarFunction = std::function<Complex(Complex)>;
// Closed curve parametrized on [0, 1).
using Contour = std::function<Complex(double)>;

inline Contour circle_contour(Complex center, double radius) {
  return [=](double s) {
    return center + std::polar(radius, 2 * std::numbers::pi * s);
  };
}

struct Rect {
  double x0, x1, y0, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Complex mid() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

// Counterclockwise boundary, arc length parametrization.
inline Contour rect_contour(Rect r) {
  return [=](double s) {
    double w = r.width(), h = r.height(), per = 2 * (w + h);
    double t = s * per;
    if (t < w) return Complex(r.x0 + t, r.y0);
    t -= w;
    if (t < h) return Complex(r.x1, r.y0 + t);
    t -= h;
    if (t < w) return Complex(r.x1 - t, r.y1);
    t -= w;
    return Complex(r.x0, r.y1 - t);
  };
}

struct WindingOptions {
  int samples = 256;
  int max_samples = 1 << 20;
  double noise = 0;  // absolute evaluation error of f
};

// Sample count is doubled until every step turns by less than pi/4 and
// the sampled minimum of |f| exceeds 10 times the half-step variation.
inline int winding_count(ScalarFunction const& f, Contour const& gamma,
                         WindingOptions const& opt = {}) {
  if (opt.samples < 8) throw DomainError("too few winding samples");
  for (int n = opt.samples; n <= opt.max_samples; n *= 2) {
    std::vector<Complex> v(n);
    for (int k = 0; k < n; ++k) v[k] = f(gamma(double(k) / n));
    double min_abs = INFINITY, max_step = 0, max_turn = 0, total = 0;
    for (int k = 0; k < n; ++k) {
      Complex a = v[k], b = v[(k + 1) % n];
      min_abs = std::min(min_abs, std::abs(a));
      max_step = std::max(max_step, std::abs(b - a));
      if (a == Complex(0) || b == Complex(0)) continue;
      double turn = std::arg(b / a);
      max_turn = std::max(max_turn, std::abs(turn));
      total += turn;
    }
    if (!(min_abs > 10 * opt.noise) || min_abs == 0)
      throw Error("zero on contour");
    if (max_turn < std::numbers::pi / 4 && min_abs > 5 * max_step) {
      double w = total / (2 * std::numbers::pi);
      double r = std::round(w);
      if (std::abs(w - r) < 0.1) return int(r);
      throw Error("insufficient samples");
    }
  }
  throw Error("zero on contour");
}

inline int winding_count(ScalarFunction const& f, Complex center,
                         double radius, int samples = 256) {
  WindingOptions o;
  o.samples = samples;
  return winding_count(f, circle_contour(center, radius), o);
}

}  // namespace pj
