#include "airyspec/kernels.hpp"

#include <cmath>
#include <string>

#include "airyspec/airy.hpp"

namespace airyspec {

namespace {

constexpr double kTwoPi = 2.0 * pi;

cplx w_of(double x, cplx lambda) { return {lambda.real(), lambda.imag() + x}; }

// Ai(e^{-ia} w_x), decaying as x -> +inf.
Scaled q_of(double x, cplx lambda) { return airy_scaled(rot_m * w_of(x, lambda)).value; }
// Ai(e^{ia} w_x), decaying as x -> -inf.
Scaled p_of(double x, cplx lambda) { return airy_scaled(rot_p * w_of(x, lambda)).value; }

Scaled natural_scale(const ScaledAiry& a, cplx z) {
  return a.value.abs_scaled() * Scaled(std::sqrt(std::max(1.0, std::abs(z)))) + a.derivative.abs_scaled();
}

void require_finite(cplx lambda, const char* where) {
  if (!is_finite(lambda)) throw Error(ErrorCode::Validation, std::string(where) + ": non-finite lambda");
}

}  // namespace

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::FreeLine: return "free-line";
    case Regime::Dirichlet: return "dirichlet";
    case Regime::Neumann: return "neumann";
    case Regime::Robin: return "robin";
    case Regime::Transmission: return "transmission";
    case Regime::FreeLaplacianBarrier: return "laplacian-barrier";
  }
  return "?";
}

void check_pole(const Scaled& den, const Scaled& scale, cplx lambda, const char* where) {
  const double guard = std::log(1e-14 * std::sqrt(1.0 + std::abs(lambda)));
  if (den.is_zero() || den.log_abs() - scale.log_abs() <= guard) {
    throw Error(ErrorCode::AtPole, std::string(where) + ": lambda=(" + std::to_string(lambda.real()) +
                                       "," + std::to_string(lambda.imag()) + ") is a pole");
  }
}

cplx kernel_free_line(double x, double y, cplx lambda) {
  require_finite(lambda, "kernel_free_line");
  const double lo = std::min(x, y), hi = std::max(x, y);
  return (Scaled(kTwoPi) * p_of(lo, lambda) * q_of(hi, lambda)).value();
}

Scaled half_line_coefficient(const SpectralProblem& problem, cplx lambda) {
  const cplx mu = rot_m * lambda;
  const ScaledAiry am = airy_scaled(mu);
  const ScaledAiry a0 = airy_scaled(lambda);
  const double lead = std::sqrt(std::max(1.0, std::abs(mu)));
  Scaled num, den, scale;
  switch (problem.regime) {
    case Regime::Dirichlet:
      num = Scaled(rot_m) * a0.value;
      den = am.value;
      scale = natural_scale(am, mu) / Scaled(lead);
      break;
    case Regime::Neumann:
      num = a0.derivative;
      den = am.derivative;
      scale = natural_scale(am, mu);
      break;
    case Regime::Robin: {
      const cplx i{0.0, 1.0};
      const double k = problem.kappa;
      num = Scaled(rot_m) * (Scaled(i) * a0.derivative - Scaled(k) * a0.value);
      den = Scaled(i * rot_m) * am.derivative - Scaled(k) * am.value;
      scale = am.derivative.abs_scaled() + Scaled(k) * am.value.abs_scaled();
      break;
    }
    default:
      throw Error(ErrorCode::Validation, "half-line kernel needs Dirichlet, Neumann or Robin");
  }
  check_pole(den, scale, lambda, "kernel_half_line");
  return num / den;
}

cplx kernel_half_line(const SpectralProblem& problem, double x, double y, cplx lambda) {
  require_finite(lambda, "kernel_half_line");
  if (x < 0 || y < 0) throw Error(ErrorCode::Validation, "kernel_half_line: x, y must be >= 0");
  if (problem.regime == Regime::Robin && problem.kappa < 0) {
    throw Error(ErrorCode::Validation, "kernel_half_line: kappa must be >= 0");
  }
  const Scaled d = half_line_coefficient(problem, lambda);
  const double lo = std::min(x, y), hi = std::max(x, y);
  const Scaled inner = d * q_of(lo, lambda) - Scaled(rot_m) * airy_scaled(w_of(lo, lambda)).value;
  return (Scaled(kTwoPi) * q_of(hi, lambda) * inner).value();
}

Scaled characteristic_f(cplx lambda) {
  return Scaled(kTwoPi) * airy_scaled(rot_m * lambda).derivative *
         airy_scaled(rot_p * lambda).derivative;
}

TransmissionCoeffs transmission_coefficients(cplx lambda, double kappa) {
  if (kappa < 0) throw Error(ErrorCode::Validation, "transmission: kappa must be >= 0");
  const cplx mu = rot_m * lambda, nu = rot_p * lambda;
  const ScaledAiry am = airy_scaled(mu);
  const ScaledAiry ap = airy_scaled(nu);
  TransmissionCoeffs c;
  c.f = Scaled(kTwoPi) * am.derivative * ap.derivative;
  const Scaled den = c.f + Scaled(kappa);
  const Scaled scale = Scaled(kTwoPi) * natural_scale(am, mu) * natural_scale(ap, nu) + Scaled(kappa);
  check_pole(den, scale, lambda, "kernel_transmission");
  const double four_pi2 = 4.0 * pi * pi;
  c.pp = Scaled(-four_pi2 * rot_p * rot_p) * ap.derivative * ap.derivative / den;
  c.off = Scaled(-kTwoPi) * c.f / den;
  c.mm = Scaled(-four_pi2 * rot_m * rot_m) * am.derivative * am.derivative / den;
  return c;
}

namespace {

Scaled correction_scaled(const TransmissionCoeffs& c, double x, double y, cplx lambda) {
  const bool xp = x >= 0, yp = y >= 0;
  if (xp && yp) return c.pp * q_of(x, lambda) * q_of(y, lambda);
  if (!xp && !yp) return c.mm * p_of(x, lambda) * p_of(y, lambda);
  if (yp) return c.off * p_of(x, lambda) * q_of(y, lambda);
  return c.off * q_of(x, lambda) * p_of(y, lambda);
}

}  // namespace

cplx kernel_transmission_correction(double x, double y, cplx lambda, double kappa) {
  require_finite(lambda, "kernel_transmission");
  const TransmissionCoeffs c = transmission_coefficients(lambda, kappa);
  return correction_scaled(c, x, y, lambda).value();
}

cplx kernel_transmission(double x, double y, cplx lambda, double kappa) {
  require_finite(lambda, "kernel_transmission");
  const TransmissionCoeffs c = transmission_coefficients(lambda, kappa);
  const bool xp = x >= 0, yp = y >= 0;
  if (xp != yp) {
    // G0 and G1 combine to 2 pi kappa / (f + kappa) Ai(e^{ia} w_-) Ai(e^{-ia} w_+).
    const double neg = xp ? y : x, pos = xp ? x : y;
    const Scaled coef = Scaled(kTwoPi * kappa) / (c.f + Scaled(kappa));
    return (coef * p_of(neg, lambda) * q_of(pos, lambda)).value();
  }
  const double lo = std::min(x, y), hi = std::max(x, y);
  const Scaled g0 = Scaled(kTwoPi) * p_of(lo, lambda) * q_of(hi, lambda);
  return (g0 + correction_scaled(c, x, y, lambda)).value();
}

double kernel_laplacian_barrier(double x, double y, double mu, double kappa) {
  if (!(mu < 0)) throw Error(ErrorCode::Validation, "kernel_laplacian_barrier: mu must be < 0");
  const double s = std::sqrt(-mu);
  const double den = s + 2.0 * kappa;
  if (std::abs(den) <= 1e-14 * std::sqrt(1.0 + std::abs(mu)) * (s + 2.0 * std::abs(kappa))) {
    throw Error(ErrorCode::AtPole, "kernel_laplacian_barrier: mu = -4 kappa^2 is an eigenvalue");
  }
  const double eps = x >= 0 ? 1.0 : -1.0;
  const double sig = y >= 0 ? 1.0 : -1.0;
  return std::exp(-s * std::abs(x - y)) / (2 * s) +
         eps * sig * std::exp(-s * (std::abs(x) + std::abs(y))) / (2 * den);
}

KernelSample conjugation_map(const KernelSample& s) {
  KernelSample out = s;
  out.lambda = std::conj(s.lambda);
  out.value = std::conj(s.value);
  out.sign = s.sign == Sign::MinusIx ? Sign::PlusIx : Sign::MinusIx;
  return out;
}

namespace {

cplx kernel_minus(const SpectralProblem& p, double x, double y, cplx lambda) {
  switch (p.regime) {
    case Regime::FreeLine: return kernel_free_line(x, y, lambda);
    case Regime::Dirichlet:
    case Regime::Neumann:
    case Regime::Robin: return kernel_half_line(p, x, y, lambda);
    case Regime::Transmission: return kernel_transmission(x, y, lambda, p.kappa);
    case Regime::FreeLaplacianBarrier:
      if (lambda.imag() != 0.0) {
        throw Error(ErrorCode::Validation, "laplacian-barrier kernel needs real mu");
      }
      return kernel_laplacian_barrier(x, y, lambda.real(), p.kappa);
  }
  throw Error(ErrorCode::Validation, "unknown regime");
}

}  // namespace

cplx kernel(const SpectralProblem& p, double x, double y, cplx lambda) {
  if (p.sign == Sign::MinusIx || p.regime == Regime::FreeLaplacianBarrier) {
    return kernel_minus(p, x, y, lambda);
  }
  return std::conj(kernel_minus(p, x, y, std::conj(lambda)));
}

KernelSample kernel_sample(const SpectralProblem& p, double x, double y, cplx lambda) {
  return {x, y, lambda, kernel(p, x, y, lambda), p.sign};
}

}  // namespace airyspec
