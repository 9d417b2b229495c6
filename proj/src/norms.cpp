#include "airyspec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "airyspec/airy.hpp"

namespace airyspec {

namespace {

constexpr double kTwoPi = 2.0 * pi;
constexpr double kNegligible = 40.0;  // e^{-40} of the running total

cplx w_of(double x, cplx lambda) { return {lambda.real(), lambda.imag() + x}; }
Scaled q_of(double x, cplx lambda) { return airy_scaled(rot_m * w_of(x, lambda)).value; }
Scaled p_of(double x, cplx lambda) { return airy_scaled(rot_p * w_of(x, lambda)).value; }

// Integral of exp(logf) over [a, limit) with panels of doubling width w0,
// 2 w0, ... Stops once a panel is negligible and the integrand decreases.
LogIntegral integrate_log_ray(const std::function<double(double)>& logf, double a, double w0,
                              double rel_tol, double limit = INFINITY) {
  LogIntegral total;
  double lo = a, w = w0;
  double f_lo = logf(a);
  for (int k = 0; k < 90 && lo < limit; ++k) {
    const double hi = std::min(lo + w, limit);
    const double floor = std::isfinite(total.log_value) ? total.log_value - kNegligible : -INFINITY;
    const LogIntegral part = integrate_log(logf, lo, hi, rel_tol, 30, floor);
    total = log_add(total, part);
    const double f_hi = logf(hi);
    if (k >= 2 && part.log_value < total.log_value - kNegligible && !(f_hi > f_lo)) break;
    lo = hi;
    f_lo = f_hi;
    w *= 2.0;
  }
  return total;
}

// Non-adaptive version: panels of doubling width, each with a fixed
// 32-node rule, so the result is a smooth function of parameters in logf.
double fixed_log_ray(const std::function<double(double)>& logf, double a, double w0, double limit) {
  static const GaussRule rule = gauss_legendre(32);
  LogSum total;
  double lo = a, w = w0;
  for (int k = 0; k < 60 && lo < limit; ++k) {
    const double hi = std::min(lo + w, limit);
    const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    LogSum part;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      part.add(std::log(rule.weights[i] * hw) + logf(c + hw * rule.nodes[i]));
    }
    total.add(part);
    if (k >= 3 && part.log() < total.log() - kNegligible) break;
    lo = hi;
    w *= 2.0;
  }
  return total.log();
}

// One triangular block of a kernel of the form 2 pi Phi(x_<) Q(x_>), in
// diagonal coordinates t = (x + y) / 2, s = |x - y|:
//   ||.||^2 = 8 pi^2 int D(t) dt,  D(t) = int |Phi(t - s/2)|^2 |Q(t + s/2)|^2 ds.
// For large tau = t + shift, D ~ C0 |tau|^{-3/2}; the outer integral is
// carried to |tau| = T and the remainder integrated from a fitted model.
struct Block {
  std::function<Scaled(double)> companion;
  std::function<Scaled(double)> decaying;
  bool half = true;  // x, y >= 0
  double shift = 0.0;
};

struct BlockResult {
  double log_value = -INFINITY;  // log of the squared HS norm
  double rel_error = 0.0;
  double tail_rel = 0.0;
};

class DiagonalDensity {
 public:
  DiagonalDensity(const Block& b, double scale) : b_(b), scale_(scale) {}

  double log_d(double t, double refine = 1.0) {
    const double tau = t + b_.shift;
    const double w0 = 0.25 * refine / (1.0 + std::sqrt(scale_ + std::abs(tau)));
    auto logf = [&](double s) {
      const Scaled phi = b_.companion(t - 0.5 * s);
      const Scaled q = b_.decaying(t + 0.5 * s);
      return 2.0 * (phi.log_abs() + q.log_abs());
    };
    const double limit = b_.half ? 2.0 * t : INFINITY;
    if (limit <= 0.0) return -INFINITY;
    return fixed_log_ray(logf, 0.0, w0, limit);
  }

  // Compares the inner rule against one with panels half as wide.
  void probe(double t) {
    const double a = log_d(t), b = log_d(t, 0.5);
    if (std::isfinite(a) && std::isfinite(b)) inner_err_ = std::max(inner_err_, std::abs(std::expm1(a - b)));
  }

  double inner_error() const { return inner_err_; }

 private:
  const Block& b_;
  double scale_;
  double inner_err_ = 0.0;
};

struct TailFit {
  double log_value = -INFINITY;
  double uncertainty = 0.0;  // absolute, on the tail integral
};

// g(tau) = D tau^{3/2} ~ C0 + C1 / tau + C2 / tau^{3/2}, fitted at T, 2T, 4T
// and checked at 8T.
TailFit fit_tail(DiagonalDensity& dens, const Block& b, double T, double dir) {
  double g[4];
  for (int k = 0; k < 4; ++k) {
    const double tau = T * double(1 << k);
    const double t = dir * tau - b.shift;
    g[k] = std::exp(dens.log_d(t) + 1.5 * std::log(tau));
  }
  // Exact solve of the 3x3 system in (C0, C1, C2).
  double A[3][4];
  for (int k = 0; k < 3; ++k) {
    const double tau = T * double(1 << k);
    A[k][0] = 1.0;
    A[k][1] = 1.0 / tau;
    A[k][2] = std::pow(tau, -1.5);
    A[k][3] = g[k];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double m = A[r][c] / A[c][c];
      for (int j = c; j < 4; ++j) A[r][j] -= m * A[c][j];
    }
  }
  const double c0 = A[0][3] / A[0][0], c1 = A[1][3] / A[1][1], c2 = A[2][3] / A[2][2];
  const double tau8 = 8.0 * T;
  const double pred = c0 + c1 / tau8 + c2 * std::pow(tau8, -1.5);
  const double value = 2.0 * c0 / std::sqrt(T) + (2.0 / 3.0) * c1 * std::pow(T, -1.5) + c2 / (2.0 * T * T);
  TailFit out;
  out.log_value = value > 0 ? std::log(value) : -INFINITY;
  out.uncertainty = std::abs(pred - g[3]) * 2.0 / std::sqrt(T) +
                    std::abs(value) * 1e-9;
  return out;
}

BlockResult block_norm2(const Block& b, double scale) {
  DiagonalDensity dens(b, scale);
  auto logd = [&](double t) { return dens.log_d(t); };
  const double lo = b.half ? 0.0 : -INFINITY;
  const double t0 = std::max(lo, -b.shift);
  const double R = 4.0 + 2.0 * std::sqrt(scale);
  const double T = 1000.0 * (1.0 + scale);
  const double rel = 1e-10;

  LogIntegral core = integrate_log(logd, std::max(lo, t0 - R), t0 + R, rel, 20);
  dens.probe(t0 + 0.5);
  dens.probe(t0 + R);
  dens.probe(T - b.shift);
  double floor = core.log_value - kNegligible;
  LogIntegral total = core;
  auto sweep = [&](double start, double stop, double dir) {
    double d = R;
    double a = start;
    while (dir * (stop - a) > 0) {
      const double bnd = dir > 0 ? std::min(a + d, stop) : std::max(a - d, stop);
      const LogIntegral part = dir > 0 ? integrate_log(logd, a, bnd, rel, 20, floor)
                                       : integrate_log(logd, bnd, a, rel, 20, floor);
      total = log_add(total, part);
      a = bnd;
      d *= 2.0;
    }
  };
  // Right side: up to tau = T.
  sweep(t0 + R, T - b.shift, 1.0);
  TailFit right = fit_tail(dens, b, T, 1.0);
  double tail_unc = right.uncertainty;
  LogSum sum;
  sum.add(total.log_value);
  sum.add(right.log_value);
  if (!b.half) {
    if (t0 - R > -T - b.shift) sweep(t0 - R, -T - b.shift, -1.0);
    TailFit left = fit_tail(dens, b, T, -1.0);
    sum = LogSum();
    sum.add(total.log_value);
    sum.add(right.log_value);
    sum.add(left.log_value);
    tail_unc += left.uncertainty;
  }
  BlockResult out;
  out.log_value = std::log(8.0 * pi * pi) + sum.log();
  out.tail_rel = tail_unc / std::exp(sum.log());
  out.rel_error = total.rel_error + dens.inner_error() + out.tail_rel;
  return out;
}

// Companion Phi(y) = d q(y) - e^{-ia} Ai(w_y) of the half-line kernels.
Block half_line_block(const Scaled& d, cplx lambda) {
  Block b;
  b.companion = [d, lambda](double y) {
    return d * q_of(y, lambda) - Scaled(rot_m) * airy_scaled(w_of(y, lambda)).value;
  };
  b.decaying = [lambda](double y) { return q_of(y, lambda); };
  b.half = true;
  b.shift = lambda.imag();
  return b;
}

HsResult finish(const SpectralProblem& problem, cplx lambda, double log_hs2, double rel2) {
  HsResult r;
  r.lambda = lambda;
  r.problem = problem;
  r.log_hs = 0.5 * log_hs2;
  const double rel = 0.5 * rel2;
  if (r.log_hs > 700.0) {
    r.log_scaled = true;
    r.hs_norm = r.log_hs;
    r.quadrature_error = rel;
  } else {
    r.hs_norm = std::exp(r.log_hs);
    r.quadrature_error = rel * r.hs_norm;
  }
  return r;
}

void require_tail(const BlockResult& b, cplx lambda) {
  if (!(b.tail_rel <= 1e-6)) {
    throw Error(ErrorCode::TailUncertified, "hs_norm: tail at lambda=(" + std::to_string(lambda.real()) +
                                                "," + std::to_string(lambda.imag()) + ") not certified, rel " +
                                                std::to_string(b.tail_rel));
  }
}

}  // namespace

HsResult hs_norm(const SpectralProblem& problem, cplx lambda_in) {
  if (!is_finite(lambda_in)) throw Error(ErrorCode::Validation, "hs_norm: non-finite lambda");
  // The +ix kernel is the conjugate of the -ix kernel at conj(lambda).
  const cplx lambda = problem.sign == Sign::PlusIx ? std::conj(lambda_in) : lambda_in;
  const double scale = std::abs(lambda);
  switch (problem.regime) {
    case Regime::FreeLine: {
      Block b;
      b.companion = [lambda](double y) { return p_of(y, lambda); };
      b.decaying = [lambda](double y) { return q_of(y, lambda); };
      b.half = false;
      b.shift = lambda.imag();
      const BlockResult r = block_norm2(b, scale);
      require_tail(r, lambda_in);
      return finish(problem, lambda_in, r.log_value, r.rel_error);
    }
    case Regime::Dirichlet:
    case Regime::Neumann:
    case Regime::Robin: {
      if (problem.regime == Regime::Robin && problem.kappa < 0) {
        throw Error(ErrorCode::Validation, "hs_norm: kappa must be >= 0");
      }
      const Scaled d = half_line_coefficient(problem, lambda);
      const BlockResult r = block_norm2(half_line_block(d, lambda), scale);
      require_tail(r, lambda_in);
      return finish(problem, lambda_in, r.log_value, r.rel_error);
    }
    case Regime::Transmission: {
      const TransmissionCoeffs c = transmission_coefficients(lambda, problem.kappa);
      Block pp;
      const Scaled cpp = c.pp / Scaled(kTwoPi);
      pp.companion = [lambda, cpp](double y) { return p_of(y, lambda) + cpp * q_of(y, lambda); };
      pp.decaying = [lambda](double y) { return q_of(y, lambda); };
      pp.shift = lambda.imag();
      Block mm;
      const Scaled cmm = c.mm / Scaled(kTwoPi);
      mm.companion = [lambda, cmm](double u) { return q_of(-u, lambda) + cmm * p_of(-u, lambda); };
      mm.decaying = [lambda](double u) { return p_of(-u, lambda); };
      mm.shift = -lambda.imag();
      const BlockResult rp = block_norm2(pp, scale);
      const BlockResult rm = block_norm2(mm, scale);
      require_tail(rp, lambda_in);
      require_tail(rm, lambda_in);
      const LogIntegral jp = j_plus(lambda), jm = j_minus(lambda);
      const Scaled coef = Scaled(kTwoPi * problem.kappa) / (c.f + Scaled(problem.kappa));
      LogSum s;
      s.add(rp.log_value);
      s.add(rm.log_value);
      double off = -INFINITY;
      if (problem.kappa > 0) {
        off = std::log(2.0) + 2.0 * coef.log_abs() + jp.log_value + jm.log_value;
        s.add(off);
      }
      const double l = s.log();
      double rel = rp.rel_error * std::exp(rp.log_value - l) + rm.rel_error * std::exp(rm.log_value - l);
      if (std::isfinite(off)) rel += (jp.rel_error + jm.rel_error) * std::exp(off - l);
      return finish(problem, lambda_in, l, rel);
    }
    case Regime::FreeLaplacianBarrier:
      break;
  }
  throw Error(ErrorCode::Validation, "hs_norm: regime not supported");
}

LogIntegral j_plus(cplx lambda) {
  auto logf = [lambda](double x) { return 2.0 * q_of(x, lambda).log_abs(); };
  return integrate_log_ray(logf, 0.0, 0.25 / (1.0 + std::sqrt(std::abs(lambda))), 1e-12);
}

LogIntegral j_minus(cplx lambda) {
  auto logf = [lambda](double u) { return 2.0 * p_of(-u, lambda).log_abs(); };
  return integrate_log_ray(logf, 0.0, 0.25 / (1.0 + std::sqrt(std::abs(lambda))), 1e-12);
}

double i0_integral(double lambda) {
  if (!(lambda > 0)) throw Error(ErrorCode::Validation, "i0_integral: lambda must be > 0");
  return std::exp(j_plus(lambda).log_value);
}

CorrectionNorms transmission_correction_norm(double lambda0, double eta, double kappa) {
  if (!(lambda0 >= 0 && lambda0 <= 5)) {
    throw Error(ErrorCode::Validation, "transmission_correction_norm: lambda0 must lie in [0, 5]");
  }
  if (!std::isfinite(eta)) throw Error(ErrorCode::Validation, "transmission_correction_norm: bad eta");
  const cplx lambda{lambda0, eta};
  const TransmissionCoeffs c = transmission_coefficients(lambda, kappa);
  const double ljp = j_plus(lambda).log_value, ljm = j_minus(lambda).log_value;
  CorrectionNorms out;
  const double lp = c.pp.log_abs() + ljp;
  const double lc = c.off.log_abs() + 0.5 * (ljp + ljm);
  const double lm = c.mm.log_abs() + ljm;
  out.plus = std::exp(lp);
  out.cross = std::exp(lc);
  out.minus = std::exp(lm);
  LogSum s;
  s.add(2.0 * lp);
  s.add(std::log(2.0) + 2.0 * lc);
  s.add(2.0 * lm);
  out.total = std::exp(0.5 * s.log());
  return out;
}

double neumann_correction_norm(cplx lambda) {
  const Scaled d = half_line_coefficient({Regime::Neumann, 0.0, Sign::MinusIx}, lambda);
  const Scaled c = Scaled(kTwoPi) * (d + Scaled(rot_p));
  return std::exp(c.log_abs() + j_plus(lambda).log_value);
}

HalfLineDifferences half_line_difference_norms(cplx lambda, double kappa) {
  if (kappa < 0) throw Error(ErrorCode::Validation, "half_line_difference_norms: kappa must be >= 0");
  const cplx mu = rot_m * lambda;
  const ScaledAiry am = airy_scaled(mu);
  const double ljp = j_plus(lambda).log_value;
  HalfLineDifferences out;
  // 2 pi (d_D - d_N) = e^{i pi/6} / (Ai(mu) Ai'(mu)).
  out.dirichlet_neumann = std::exp(ljp - am.value.log_abs() - am.derivative.log_abs());
  // 2 pi (d_N - d_R) = kappa e^{i pi/6} / (Ai'(mu) f^R).
  const Scaled fr = Scaled(cplx(0.0, 1.0) * rot_m) * am.derivative - Scaled(kappa) * am.value;
  out.neumann_robin = kappa == 0.0 ? 0.0 : std::exp(std::log(kappa) + ljp - am.derivative.log_abs() - fr.log_abs());
  return out;
}

PhiIntegral phi_integral(double h) {
  if (!(h > 0 && h <= 1)) throw Error(ErrorCode::Validation, "phi_integral: h must lie in (0, 1]");
  const double k = 2.0 / h;
  auto phi = [](double x) { return x - x * x * x / 3.0; };
  const double r3 = std::sqrt(3.0);

  auto l4 = [&](double x) { return k * phi(x); };
  LogIntegral i4 = log_add(integrate_log(l4, 0.0, r3, 1e-12), integrate_log_ray(l4, r3, 0.5, 1e-12));

  // I1 = int_0^inf dy int_0^inf ds exp(k s (1 - y^2 - s y - s^2 / 3)).
  double inner_err = 0.0;
  auto inner = [&](double y) {
    auto g = [&](double s) { return k * s * (1.0 - y * y - s * y - s * s / 3.0); };
    const double w0 = 0.25 * std::sqrt(h) / (1.0 + y * y);
    LogIntegral r;
    if (y < 1.0) {
      const double peak = 1.0 - y;
      r = log_add(integrate_log(g, 0.0, peak, 1e-12), integrate_log_ray(g, peak, w0, 1e-12));
    } else {
      r = integrate_log_ray(g, 0.0, w0, 1e-12);
    }
    inner_err = std::max(inner_err, r.rel_error);
    return r.log_value;
  };
  LogIntegral i1 = log_add(integrate_log(inner, 0.0, 1.0, 1e-11), integrate_log(inner, 1.0, r3, 1e-11));
  const double Y = 1e4;
  for (double a = r3; a < Y;) {
    const double b = std::min(2.0 * a, Y);
    i1 = log_add(i1, integrate_log(inner, a, b, 1e-11));
    a = b;
  }
  // Beyond Y the inner integral is h / (2 (y^2 - 1)) to relative O(h / y^3).
  LogIntegral tail;
  tail.log_value = std::log(0.25 * h * std::log((Y + 1) / (Y - 1)));
  i1 = log_add(i1, tail);

  PhiIntegral out;
  out.log_i1 = i1.log_value;
  out.log_i4 = i4.log_value;
  LogSum s;
  s.add(std::log(2.0) + out.log_i1);
  s.add(2.0 * out.log_i4);
  out.log_phi = s.log();
  out.rel_error = i1.rel_error + inner_err + 2.0 * i4.rel_error;
  return out;
}

double semigroup_symbol_norm(double t) {
  if (!(t > 0)) throw Error(ErrorCode::Validation, "semigroup_symbol_norm: t must be > 0");
  auto expo = [t](double xi) { return -xi * xi * t - xi * t * t - t * t * t / 3.0; };
  return std::exp(expo(-0.5 * t));
}

double envelope_u(double s) {
  const double r = std::sqrt(1.0 + s * s);
  return std::sqrt(r + 1.0) * (r - 2.0) / std::sqrt(2.0);
}

double log_airy_envelope(double x, double lambda) {
  if (!(lambda > 0)) throw Error(ErrorCode::Validation, "log_airy_envelope: lambda must be > 0");
  return -2.0 / 3.0 * std::pow(lambda, 1.5) * envelope_u(x / lambda) - std::log(2.0 * std::sqrt(pi)) -
         0.125 * std::log(lambda * lambda + x * x);
}

}  // namespace airyspec
