#pragma once

// Trigonometric polynomials on the quasimomentum torus and their exact
// extremisation.  Every dispersion function of the lattice fiber problem is,
// at fixed momentum, a first-order bivariate trigonometric polynomial: nine
// harmonics e^{i(n1*th1 + n2*th2)} with n1, n2 in {-1,0,1}.  This makes both
// coefficient extraction (a 3x3 DFT) and range computation (elimination of
// one angle in closed form) exact up to rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qlattice/types.hpp"

namespace qlattice {

struct TorusPoint {
  double th1 = 0.0, th2 = 0.0;
};

// F(th1,th2) = c0 + Re(a[0] e^{i th1}) + Re(a[1] e^{i th2})
//                 + Re(a[2] e^{i(th1-th2)}) + Re(a[3] e^{i(th1+th2)})
struct TrigForm {
  double c0 = 0.0;
  std::array<cplx, 4> a{};

  double operator()(double th1, double th2) const {
    const cplx e1 = std::polar(1.0, th1);
    const cplx e2 = std::polar(1.0, th2);
    return c0 + (a[0] * e1).real() + (a[1] * e2).real() +
           (a[2] * e1 * std::conj(e2)).real() + (a[3] * e1 * e2).real();
  }

  // Degeneracy is an exact statement about the coefficients, not a numeric
  // tolerance: the range is a single point iff all four harmonics vanish.
  bool degenerate() const {
    return a[0] == cplx{} && a[1] == cplx{} && a[2] == cplx{} && a[3] == cplx{};
  }
};

struct TrigRange {
  double min = 0.0, max = 0.0;
  TorusPoint argmin, argmax;
  bool degenerate = false;
};

namespace detail {

// Golden-section minimisation of a unimodal bracket; returns (x, f(x)).
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Minimise a smooth 2pi-periodic function of one angle: nested grid plus
// golden refinement of every local minimum bracket.
template <typename F>
std::pair<double, double> periodic_min_1d(F&& f, int samples, double xtol) {
  const int n = std::max(samples, 16);
  std::vector<double> val(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) val[j] = f(-pi + 2.0 * pi * j / n);
  double best_x = -pi, best_f = val[0];
  const double h = 2.0 * pi / n;
  for (int j = 0; j < n; ++j) {
    const double vm = val[(j + n - 1) % n], v0 = val[j], vp = val[(j + 1) % n];
    if (v0 <= vm && v0 <= vp) {
      const double x0 = -pi + h * j;
      auto [x, fx] = golden_min(f, x0 - h, x0 + h, xtol);
      if (fx < best_f) {
        best_f = fx;
        best_x = x;
      }
    }
  }
  return {reduce_angle(best_x), best_f};
}

}  // namespace detail

// Range of a TrigForm over the torus.  th1 is eliminated in closed form:
// over th1 the form is a single harmonic with amplitude
// |a0 + a2 e^{-i th2} + a3 e^{i th2}|, so only a 1D search in th2 remains.
// The sample count mirrors the requested grid (grid_n x grid_n budget) and
// nests under doubling.
inline TrigRange trig_form_range(const TrigForm& f, int grid_n = 32) {
  const int g = std::max(grid_n, 8);
  const int samples = std::clamp(g * g, 64, 8192);
  const double xtol = 1e-12;

  const auto w = [&f](double th2) {
    const cplx e2 = std::polar(1.0, th2);
    return f.a[0] + f.a[2] * std::conj(e2) + f.a[3] * e2;
  };
  const auto base = [&f](double th2) {
    return f.c0 + (f.a[1] * std::polar(1.0, th2)).real();
  };

  TrigRange r;
  r.degenerate = f.degenerate();

  const auto low = [&](double th2) { return base(th2) - std::abs(w(th2)); };
  const auto neg_high = [&](double th2) { return -(base(th2) + std::abs(w(th2))); };

  auto [t2min, fmin] = detail::periodic_min_1d(low, samples, xtol);
  auto [t2max, nfmax] = detail::periodic_min_1d(neg_high, samples, xtol);
  r.min = fmin;
  r.max = -nfmax;

  const cplx wmin = w(t2min), wmax = w(t2max);
  r.argmin = {reduce_angle(std::abs(wmin) > 0 ? pi - std::arg(wmin) : 0.0), t2min};
  r.argmax = {reduce_angle(std::abs(wmax) > 0 ? -std::arg(wmax) : 0.0), t2max};
  return r;
}

// Full first-order bivariate trig polynomial, possibly complex-valued:
//   F(th1,th2) = sum c[n1+1][n2+1] e^{i(n1 th1 + n2 th2)},  n1,n2 in {-1,0,1}.
struct BiTrigPoly {
  std::array<std::array<cplx, 3>, 3> c{};

  cplx operator()(double th1, double th2) const {
    cplx s{};
    for (int n1 = -1; n1 <= 1; ++n1)
      for (int n2 = -1; n2 <= 1; ++n2)
        s += c[n1 + 1][n2 + 1] * std::polar(1.0, n1 * th1 + n2 * th2);
    return s;
  }

  // Relative deviation from being a real-valued function: for real F the
  // coefficients satisfy c_{-n} = conj(c_n).
  double realness_defect() const {
    double worst = 0.0, scale = 0.0;
    for (int n1 = -1; n1 <= 1; ++n1)
      for (int n2 = -1; n2 <= 1; ++n2) {
        const cplx d = c[n1 + 1][n2 + 1] - std::conj(c[1 - n1][1 - n2]);
        worst = std::max(worst, std::abs(d));
        scale = std::max(scale, std::abs(c[n1 + 1][n2 + 1]));
      }
    return worst / (1.0 + scale);
  }

  // Sup bound for |F| and for its quasimomentum dependence.
  double magnitude() const {
    double s = 0.0;
    for (const auto& row : c)
      for (const cplx& v : row) s += std::abs(v);
    return s;
  }
  double theta_residual() const {
    double s = 0.0;
    for (int n1 = -1; n1 <= 1; ++n1)
      for (int n2 = -1; n2 <= 1; ++n2)
        if (n1 != 0 || n2 != 0) s += std::abs(c[n1 + 1][n2 + 1]);
    return s;
  }

  // TrigForm of Re(F).
  TrigForm real_part() const {
    TrigForm f;
    f.c0 = 0.5 * (c[1][1] + std::conj(c[1][1])).real();
    f.a[0] = c[2][1] + std::conj(c[0][1]);
    f.a[1] = c[1][2] + std::conj(c[1][0]);
    f.a[2] = c[2][0] + std::conj(c[0][2]);
    f.a[3] = c[2][2] + std::conj(c[0][0]);
    return f;
  }
};

// Exact coefficient extraction from nine samples (3x3 DFT).
template <typename F>
BiTrigPoly extract_bitrig(F&& f) {
  std::array<std::array<cplx, 3>, 3> v{};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) v[j][l] = f(2.0 * pi * j / 3.0, 2.0 * pi * l / 3.0);
  BiTrigPoly p;
  for (int n1 = -1; n1 <= 1; ++n1)
    for (int n2 = -1; n2 <= 1; ++n2) {
      cplx s{};
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          s += v[j][l] * std::polar(1.0, -2.0 * pi * (n1 * j + n2 * l) / 3.0);
      p.c[n1 + 1][n2 + 1] = s / 9.0;
    }
  return p;
}

struct TorusOpt {
  double value = 0.0;
  TorusPoint arg;
};

namespace detail {

// Coarse grid followed by 8-direction step-halving descent.  Works on any
// callable; NaN marks an invalid point and never counts as an improvement.
template <typename F>
TorusOpt torus_minimize_impl(F&& f, int grid_n, double tol) {
  const int g = std::max(grid_n, 8);
  struct Seed {
    double v, th1, th2;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const double t1 = -pi + 2.0 * pi * i / g;
      const double t2 = -pi + 2.0 * pi * j / g;
      const double v = f(t1, t2);
      if (!std::isnan(v)) seeds.push_back({v, t1, t2});
    }
  if (seeds.empty()) return {std::numeric_limits<double>::quiet_NaN(), {}};
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.v < b.v; });

  // keep a few well-separated starts to dodge distinct basins
  std::vector<Seed> starts;
  const double sep = 2.0 * pi / 6.0;
  for (const Seed& s : seeds) {
    bool close = false;
    for (const Seed& t : starts) {
      const double d1 = std::abs(reduce_angle(s.th1 - t.th1));
      const double d2 = std::abs(reduce_angle(s.th2 - t.th2));
      if (d1 < sep && d2 < sep) {
        close = true;
        break;
      }
    }
    if (!close) starts.push_back(s);
    if (starts.size() >= 4) break;
  }

  TorusOpt best{std::numeric_limits<double>::infinity(), {}};
  for (const Seed& s0 : starts) {
    double t1 = s0.th1, t2 = s0.th2, v = s0.v;
    double step = 2.0 * pi / g;
    while (step > tol) {
      bool moved = false;
      static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
      static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
      for (int d = 0; d < 8; ++d) {
        const double u1 = t1 + step * dx[d];
        const double u2 = t2 + step * dy[d];
        const double w = f(u1, u2);
        if (!std::isnan(w) && w < v) {
          v = w;
          t1 = u1;
          t2 = u2;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (v < best.value) best = {v, {reduce_angle(t1), reduce_angle(t2)}};
  }
  return best;
}

}  // namespace detail

template <typename F>
TorusOpt torus_minimize(F&& f, int grid_n = 64, double tol = 1e-10) {
  return detail::torus_minimize_impl(std::forward<F>(f), grid_n, tol);
}

template <typename F>
TorusOpt torus_maximize(F&& f, int grid_n = 64, double tol = 1e-10) {
  auto neg = [&f](double t1, double t2) { return -f(t1, t2); };
  TorusOpt r = detail::torus_minimize_impl(neg, grid_n, tol);
  r.value = -r.value;
  return r;
}

}  // namespace qlattice
