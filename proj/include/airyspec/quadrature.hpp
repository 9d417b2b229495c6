#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace airyspec {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);
const GaussRule& gauss16();

// One Gauss panel on [a, b] for any integrand whose values can be added
// and scaled by a double.
template <class F>
auto gauss_panel(const F& f, double a, double b, const GaussRule& rule = gauss16()) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  decltype(f(c)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  return sum * h;
}

struct Integral {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

// Adaptive 16-node Gauss-Legendre; a panel is bisected while its estimate
// differs from the sum over its halves by more than max(rel_tol*|I|, abs_tol).
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 40);

// Running log(sum exp(l_i)).
class LogSum {
 public:
  void add(double l) noexcept;
  void add(const LogSum& o) noexcept { add(o.log()); }
  double log() const noexcept;
  bool empty() const noexcept { return m_ == -std::numeric_limits<double>::infinity(); }

 private:
  double m_ = -std::numeric_limits<double>::infinity();
  double s_ = 0.0;
};

struct LogIntegral {
  double log_value = -std::numeric_limits<double>::infinity();
  double rel_error = 0.0;
  int panels = 0;
};

// Integral of exp(logf(x)) over [a, b], returned as a log. Same adaptive
// rule as integrate(), with the tolerance relative to the panel value.
// Panels whose log-value falls below log_floor are accepted unrefined.
LogIntegral integrate_log(const std::function<double(double)>& logf, double a, double b,
                          double rel_tol = 1e-10, int max_depth = 30,
                          double log_floor = -std::numeric_limits<double>::infinity());

// Combines panel results.
LogIntegral log_add(const LogIntegral& a, const LogIntegral& b);

}  // namespace airyspec
