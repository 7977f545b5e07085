#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stein {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

namespace quad_detail {

// 15-point Kronrod nodes on [-1,1] (positive half) with the embedded
// 7-point Gauss rule. Standard QUADPACK dqk15 constants.
inline constexpr double kNode[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
inline void gk15_panel(const F& f, double a, double b, double& value,
                       double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kNode[i]);
    fv[14 - i] = f(c + h * kNode[i]);
  }
  fv[7] = f(c);
  double k = kWeightK[7] * fv[7];
  double g = kWeightG[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    k += kWeightK[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) g += kWeightG[i / 2] * (fv[i] + fv[14 - i]);
  }
  value = k * h;
  const double diff = std::fabs(k - g) * h;
  // QUADPACK-style sharpened error estimate.
  error = diff;
  if (diff > 0.0) error = std::min(diff, 200.0 * diff * std::sqrt(diff));
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace quad_detail

// Single non-adaptive GK15 panel; `error` is the embedded estimate.
template <typename F>
inline double gk15(const F& f, double a, double b, double* error = nullptr) {
  double v, e;
  quad_detail::gk15_panel(f, a, b, v, e);
  if (error) *error = e;
  return v;
}

// Adaptive Gauss-Kronrod: worst-panel-first bisection until the accumulated
// error estimate drops under max(abs_tol, rel_tol*|value|).
template <typename F>
QuadResult integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-12, int max_panels = 4000) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<quad_detail::Panel> heap;
  double v, e;
  quad_detail::gk15_panel(f, a, b, v, e);
  heap.push({a, b, v, e});
  double total_v = v, total_e = e;
  int panels = 1;
  while (total_e > std::max(abs_tol, rel_tol * std::fabs(total_v)) &&
         panels < max_panels) {
    quad_detail::Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {  // interval exhausted at double precision
      heap.push({p.a, p.b, p.value, 0.0});
      total_e -= p.error;
      continue;
    }
    double v1, e1, v2, e2;
    quad_detail::gk15_panel(f, p.a, mid, v1, e1);
    quad_detail::gk15_panel(f, mid, p.b, v2, e2);
    total_v += (v1 + v2) - p.value;
    total_e += (e1 + e2) - p.error;
    heap.push({p.a, mid, v1, e1});
    heap.push({mid, p.b, v2, e2});
    ++panels;
  }
  out.value = total_v;
  out.error = total_e;
  out.panels = panels;
  out.converged =
      total_e <= std::max(abs_tol, rel_tol * std::fabs(total_v)) * 1.0001 ||
      total_e <= abs_tol * 16.0;
  return out;
}

// Adaptive integration with forced subdivision at interior split points
// (integrand kinks); each smooth piece is integrated independently.
template <typename F>
QuadResult integrate_split(const F& f, double a, double b,
                           std::span<const double> splits,
                           double abs_tol = 1e-10, double rel_tol = 1e-12,
                           int max_panels = 4000) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double s : splits)
    if (s > a && s < b) pts.push_back(s);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  QuadResult out;
  const double piece_tol = abs_tol / static_cast<double>(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadResult r =
        integrate(f, pts[i], pts[i + 1], piece_tol, rel_tol, max_panels);
    out.value += r.value;
    out.error += r.error;
    out.panels += r.panels;
    out.converged = out.converged && r.converged;
  }
  return out;
}

// Golden-section maximisation of a continuous function on [a,b].
template <typename F>
double golden_maximize(const F& f, double a, double b, double tol,
                       double* arg_max = nullptr) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  if (arg_max) *arg_max = xm;
  return f(xm);
}

// Bisection root finder for a continuous function with f(lo), f(hi) of
// opposite sign.
template <typename F>
double bisect(const F& f, double lo, double hi, double tol,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace stein
