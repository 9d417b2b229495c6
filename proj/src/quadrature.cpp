#include "airyspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "airyspec/types.hpp"

namespace airyspec {

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

const GaussRule& gauss16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

namespace {

void adapt(const std::function<double(double)>& f, double a, double b, double whole,
           double rel_tol, double abs_tol, int depth, Integral& out) {
  const double m = 0.5 * (a + b);
  const double l = gauss_panel(f, a, m), r = gauss_panel(f, m, b);
  const double diff = std::abs(whole - (l + r));
  if (depth <= 0 || diff <= std::max(rel_tol * std::abs(l + r), abs_tol)) {
    out.value += l + r;
    out.error += diff;
    out.panels += 2;
    return;
  }
  adapt(f, a, m, l, rel_tol, abs_tol * 0.5, depth - 1, out);
  adapt(f, m, b, r, rel_tol, abs_tol * 0.5, depth - 1, out);
}

double log_panel(const std::function<double(double)>& logf, double a, double b) {
  const GaussRule& g = gauss16();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  LogSum s;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s.add(std::log(g.weights[i]) + logf(c + h * g.nodes[i]));
  return s.log() + std::log(h);
}

void adapt_log(const std::function<double(double)>& logf, double a, double b, double whole,
               double rel_tol, double log_floor, int depth, LogSum& acc, double& err_num,
               int& panels) {
  const double m = 0.5 * (a + b);
  const double l = log_panel(logf, a, m), r = log_panel(logf, m, b);
  LogSum halves;
  halves.add(l);
  halves.add(r);
  const double lh = halves.log();
  const double rel = std::isfinite(lh) ? std::abs(std::expm1(whole - lh)) : 0.0;
  if (depth <= 0 || rel <= rel_tol || lh < log_floor) {
    acc.add(lh);
    if (std::isfinite(lh)) err_num = std::max(err_num, rel);
    panels += 2;
    return;
  }
  adapt_log(logf, a, m, l, rel_tol, log_floor, depth - 1, acc, err_num, panels);
  adapt_log(logf, m, b, r, rel_tol, log_floor, depth - 1, acc, err_num, panels);
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                   double abs_tol, int max_depth) {
  Integral out;
  adapt(f, a, b, gauss_panel(f, a, b), rel_tol, abs_tol, max_depth, out);
  return out;
}

void LogSum::add(double l) noexcept {
  if (!(l > -std::numeric_limits<double>::infinity())) return;
  if (l <= m_) {
    s_ += std::exp(l - m_);
  } else {
    s_ = s_ * std::exp(m_ - l) + 1.0;
    m_ = l;
  }
}

double LogSum::log() const noexcept {
  if (empty()) return m_;
  return m_ + std::log(s_);
}

LogIntegral integrate_log(const std::function<double(double)>& logf, double a, double b,
                          double rel_tol, int max_depth, double log_floor) {
  LogSum acc;
  double err = 0.0;
  int panels = 0;
  adapt_log(logf, a, b, log_panel(logf, a, b), rel_tol, log_floor, max_depth, acc, err, panels);
  return {acc.log(), err, panels};
}

LogIntegral log_add(const LogIntegral& a, const LogIntegral& b) {
  LogSum s;
  s.add(a.log_value);
  s.add(b.log_value);
  const double l = s.log();
  // Relative errors weighted by each part's share.
  double err = 0.0;
  if (std::isfinite(l)) {
    if (std::isfinite(a.log_value)) err += a.rel_error * std::exp(a.log_value - l);
    if (std::isfinite(b.log_value)) err += b.rel_error * std::exp(b.log_value - l);
  }
  return {l, err, a.panels + b.panels};
}

}  // namespace airyspec
