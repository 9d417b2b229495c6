#include "airyspec/airy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace airyspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAi0 = 0.355028053887817239260063186004;
constexpr double kAip0 = -0.258819403792806798405183560189;
constexpr double kSqrtPi = 1.772453850905516027298167483341;

// Maclaurin coefficients of Ai: c_{k+3} = c_k / ((k+3)(k+2)).
const std::vector<double>& maclaurin() {
  static const std::vector<double> c = [] {
    std::vector<double> v(240, 0.0);
    v[0] = kAi0;
    v[1] = kAip0;
    for (std::size_t k = 0; k + 3 < v.size(); ++k) {
      v[k + 3] = v[k] / (double(k + 3) * double(k + 2));
    }
    return v;
  }();
  return c;
}

struct Coeffs {
  std::array<double, 100> u;
  std::array<double, 100> v;
};

// u_k, v_k of the Poincare expansions of Ai and Ai'.
const Coeffs& asymptotic_coeffs() {
  static const Coeffs c = [] {
    Coeffs t{};
    t.u[0] = 1.0;
    t.v[0] = 1.0;
    for (int k = 1; k < 100; ++k) {
      const double kk = k;
      t.u[k] = t.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
               ((2 * kk - 1) * 216 * kk);
      t.v[k] = -(6 * kk + 1) / (6 * kk - 1) * t.u[k];
    }
    return t;
  }();
  return c;
}

double amplitude(cplx v, cplx d, cplx z) {
  return std::abs(v) + std::abs(d) / std::sqrt(std::max(1.0, std::abs(z)));
}

struct Plain {
  cplx v, d;
  double rel_err;
};

Plain series(cplx z) {
  const auto& c = maclaurin();
  cplx v{}, d{};
  cplx zk{1.0, 0.0};  // z^k
  cplx zkm1{};        // z^{k-1}
  double mass = 0.0, dmass = 0.0;
  int small = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const cplx tv = c[k] * zk;
    const cplx td = k ? double(k) * c[k] * zkm1 : cplx{};
    v += tv;
    d += td;
    mass += std::abs(tv);
    dmass += std::abs(td);
    if (k > 4 && std::abs(tv) <= 1e-18 * mass && std::abs(td) <= 1e-18 * (dmass + 1e-300)) {
      if (++small == 3) break;
    } else {
      small = 0;
    }
    zkm1 = zk;
    zk *= z;
  }
  const double amp = amplitude(v, d, z);
  const double rel = 2 * kEps * (mass + dmass / std::sqrt(std::max(1.0, std::abs(z)))) / amp;
  return {v, d, rel};
}

// One Taylor step of u'' = z u from z0 to z0 + h.
Plain taylor_step(cplx z0, cplx u, cplx up, cplx h, double rel_in) {
  cplx cm1 = u;                 // c_{k-1}
  cplx ck = up;                 // c_k
  cplx ckp1 = 0.5 * z0 * u;     // c_{k+1}
  cplx v = u + up * h + ckp1 * h * h;
  cplx d = up + 2.0 * ckp1 * h;
  double mass = std::abs(u) + std::abs(up * h) + std::abs(ckp1 * h * h);
  cplx hp = h * h;  // h^{k+1}
  int small = 0;
  for (int k = 1; k < 200; ++k) {
    // c_{k+2} = (z0 c_k + c_{k-1}) / ((k+2)(k+1))
    const cplx ckp2 = (z0 * ck + cm1) / (double(k + 2) * double(k + 1));
    const cplx tv = ckp2 * hp * h;
    const cplx td = double(k + 2) * ckp2 * hp;
    v += tv;
    d += td;
    mass += std::abs(tv);
    if (std::abs(tv) <= 1e-18 * std::abs(v) && std::abs(td) <= 1e-18 * std::abs(d)) {
      if (++small == 3) break;
    } else {
      small = 0;
    }
    cm1 = ck;
    ck = ckp1;
    ckp1 = ckp2;
    hp *= h;
  }
  const double amp = amplitude(v, d, z0 + h);
  return {v, d, rel_in + 2 * kEps * mass / std::max(amp, 1e-300)};
}

ScaledAiry asymptotic(cplx z) {
  const auto& c = asymptotic_coeffs();
  const cplx sq = std::sqrt(z);
  const cplx zeta = (2.0 / 3.0) * z * sq;
  const cplx q = std::sqrt(sq);
  const cplx r = -1.0 / zeta;  // (-1)^k zeta^{-k} = r^k
  cplx s1{1.0, 0.0}, s2{1.0, 0.0};
  cplx rk = r;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (int k = 1; k < 100; ++k) {
    const cplx t1 = c.u[k] * rk;
    const cplx t2 = c.v[k] * rk;
    const double mag = std::max(std::abs(t1), std::abs(t2));
    if (mag > prev) break;
    s1 += t1;
    s2 += t2;
    last = mag;
    prev = mag;
    if (mag < 1e-17) break;
    rk *= r;
  }
  const Scaled e = Scaled::exp(-zeta);
  ScaledAiry out;
  out.value = Scaled(s1 / (2.0 * kSqrtPi * q)) * e;
  out.derivative = Scaled(-q * s2 / (2.0 * kSqrtPi)) * e;
  out.regime = AiryRegime::AsymptoticRight;
  out.rel_err = last + 4 * kEps;
  return out;
}

ScaledAiry rotated(cplx z) {
  const ScaledAiry a1 = asymptotic(rot_m * z);
  const ScaledAiry a2 = asymptotic(rot_p * z);
  ScaledAiry out;
  const Scaled t1 = Scaled(-rot_m) * a1.value;
  const Scaled t2 = Scaled(-rot_p) * a2.value;
  out.value = t1 + t2;
  out.derivative = Scaled(-rot_p) * a1.derivative + Scaled(-rot_m) * a2.derivative;
  out.regime = AiryRegime::Rotated;
  // Errors relative to the larger input amplitude, then to the output amplitude.
  const double in_la = std::max(t1.log_abs(), t2.log_abs());
  const double out_la =
      std::max(out.value.log_abs(),
               out.derivative.log_abs() - 0.5 * std::log(std::max(1.0, std::abs(z))));
  const double gain = std::exp(std::min(50.0, in_la - out_la));
  out.rel_err = (std::max(a1.rel_err, a2.rel_err) + 2 * kEps) * gain;
  return out;
}

ScaledAiry from_plain(const Plain& p, AiryRegime regime) {
  return {Scaled(p.v), Scaled(p.d), regime, p.rel_err};
}

ScaledAiry continued(cplx z) {
  const double th = std::arg(z);
  cplx z0;
  Plain p;
  if (std::abs(th) < pi / 3) {
    // Ai decays outward here, so integrate inward from the asymptotic circle.
    z0 = std::polar(asymptotic_radius, th);
    const ScaledAiry a = asymptotic(z0);
    p = {a.value.value(), a.derivative.value(), a.rel_err};
  } else {
    z0 = std::polar(switch_radius, th);
    p = series(z0);
  }
  const double dist = std::abs(z - z0);
  const int steps = std::max(1, int(std::ceil(dist / 1.0)));
  const cplx h = (z - z0) / double(steps);
  for (int s = 0; s < steps; ++s) {
    p = taylor_step(z0 + double(s) * h, p.v, p.d, h, p.rel_err);
  }
  return from_plain(p, AiryRegime::Continuation);
}

}  // namespace

const char* regime_name(AiryRegime r) noexcept {
  switch (r) {
    case AiryRegime::Series: return "Series";
    case AiryRegime::Continuation: return "Continuation";
    case AiryRegime::AsymptoticRight: return "AsymptoticRight";
    case AiryRegime::Rotated: return "Rotated";
  }
  return "?";
}

ScaledAiry airy_scaled_in(cplx z, AiryRegime regime) {
  switch (regime) {
    case AiryRegime::Series: return from_plain(series(z), AiryRegime::Series);
    case AiryRegime::Continuation: return continued(z);
    case AiryRegime::AsymptoticRight: return asymptotic(z);
    case AiryRegime::Rotated: return rotated(z);
  }
  return asymptotic(z);
}

ScaledAiry airy_scaled(cplx z) {
  if (!is_finite(z)) throw Error(ErrorCode::Validation, "eval_airy: non-finite argument");
  const double r = std::abs(z);
  if (r > 1e100) throw Error(ErrorCode::AccuracyLoss, "eval_airy: |z| beyond 1e100");
  if (r <= switch_radius) return from_plain(series(z), AiryRegime::Series);
  if (r >= asymptotic_radius) {
    return std::abs(std::arg(z)) <= 2 * pi / 3 ? asymptotic(z) : rotated(z);
  }
  return continued(z);
}

AiryEval eval_airy(cplx z) {
  const ScaledAiry s = airy_scaled(z);
  AiryEval out;
  out.value = s.value.value();
  out.derivative = s.derivative.value();
  out.regime = s.regime;
  out.err_estimate = s.rel_err * amplitude(out.value, out.derivative, z);
  if (out.err_estimate > 1e-8 * std::max(1.0, std::abs(out.value))) {
    throw Error(ErrorCode::AccuracyLoss,
                "eval_airy: error estimate " + std::to_string(out.err_estimate) + " at z=(" +
                    std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
  }
  return out;
}

IdentityResiduals airy_identity_residuals(cplx z) {
  const ScaledAiry a0 = airy_scaled(z);
  const ScaledAiry a1 = airy_scaled(rot_m * z);
  const ScaledAiry a2 = airy_scaled(rot_p * z);

  const Scaled r1 = Scaled(rot_m) * a1.value;
  const Scaled r2 = Scaled(rot_p) * a2.value;
  const Scaled rot_sum = a0.value + r1 + r2;
  const Scaled rot_scale = Scaled(a0.value.abs_scaled()) + r1.abs_scaled() + r2.abs_scaled();

  const Scaled w1 = Scaled(rot_m) * a1.derivative * a2.value;
  const Scaled w2 = Scaled(rot_p) * a2.derivative * a1.value;
  const Scaled wr = w1 - w2 - Scaled(cplx{0.0, 1.0 / (2 * pi)});
  const Scaled w_scale = w1.abs_scaled() + w2.abs_scaled();

  auto ratio = [](const Scaled& num, const Scaled& den) {
    return std::exp(num.log_abs() - std::max(0.0, den.log_abs()));
  };
  return {ratio(rot_sum, rot_scale), ratio(wr, w_scale)};
}

namespace {

double zero_seed(int n, ZeroKind kind) {
  const double tn = kind == ZeroKind::OfAi ? 4.0 * n - 1.0 : 4.0 * n - 3.0;
  const double t = 3 * pi / 8 * tn;
  const double t2 = 1.0 / (t * t);
  const double base = std::cbrt(t * t);
  if (kind == ZeroKind::OfAi) return -base * (1 + 5.0 / 48 * t2 - 5.0 / 36 * t2 * t2);
  return -base * (1 - 7.0 / 48 * t2 + 35.0 / 288 * t2 * t2);
}

struct ZeroFn {
  double f, fp;
};

ZeroFn zero_fn(double x, ZeroKind kind) {
  const AiryEval e = eval_airy({x, 0.0});
  if (kind == ZeroKind::OfAi) return {e.value.real(), e.derivative.real()};
  return {e.derivative.real(), x * e.value.real()};
}

}  // namespace

AiryZero airy_zero(int n, ZeroKind kind) {
  if (n < 1) throw Error(ErrorCode::Validation, "airy_zero: n must be >= 1");
  double x = zero_seed(n, kind);
  const double w = 0.45 * pi / std::sqrt(std::max(1.0, std::abs(x)));
  double lo = x - w, hi = x + w;
  double flo = zero_fn(lo, kind).f, fhi = zero_fn(hi, kind).f;
  const bool bracketed = (flo < 0) != (fhi < 0);
  for (int it = 0; it < 50; ++it) {
    const ZeroFn v = zero_fn(x, kind);
    if (v.f == 0.0) return {n, kind, x, 0.0};
    if (bracketed) {
      if ((v.f < 0) == (flo < 0)) {
        lo = x;
        flo = v.f;
      } else {
        hi = x;
        fhi = v.f;
      }
    }
    double next = x - v.f / v.fp;
    if (bracketed && !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4 * kEps * std::abs(x)) {
      // Newton stalls a few ulps out; settle on the nearby double with the smallest residual.
      double best = x, res = std::abs(zero_fn(x, kind).f);
      double up = x, down = x;
      for (int k = 0; k < 16; ++k) {
        up = std::nextafter(up, 0.0);
        down = std::nextafter(down, -HUGE_VAL);
        for (double c : {up, down}) {
          const double r = std::abs(zero_fn(c, kind).f);
          if (r < res) {
            res = r;
            best = c;
          }
        }
      }
      return {n, kind, best, res};
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "airy_zero: n=" + std::to_string(n) + " did not converge in 50 steps");
}

}  // namespace airyspec
