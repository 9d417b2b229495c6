#pragma once

#include "airyspec/kernels.hpp"
#include "airyspec/quadrature.hpp"
#include "airyspec/types.hpp"

namespace airyspec {

struct HsResult {
  cplx lambda{};
  SpectralProblem problem;
  // The norm itself, or its logarithm when log_scaled is set.
  double hs_norm = 0.0;
  double quadrature_error = 0.0;  // absolute, same scaling as hs_norm
  bool log_scaled = false;
  double log_hs = 0.0;  // always the logarithm
};

// Hilbert-Schmidt norm of the resolvent kernel for FreeLine, Dirichlet,
// Neumann, Robin (on the half-line x > 0) and Transmission.
// Throws AtPole, TailUncertified.
HsResult hs_norm(const SpectralProblem& problem, cplx lambda);

// Integral over x > 0 of |Ai(e^{-ia}(ix + lambda))|^2 and over x < 0 of
// |Ai(e^{ia}(ix + lambda))|^2.
LogIntegral j_plus(cplx lambda);
LogIntegral j_minus(cplx lambda);

double i0_integral(double lambda);

// HS norms of the four blocks of the transmission correction G1.
struct CorrectionNorms {
  double plus = 0.0;   // x, y > 0
  double cross = 0.0;  // x < 0 < y (the transposed block has the same norm)
  double minus = 0.0;  // x, y < 0
  double total = 0.0;
};

CorrectionNorms transmission_correction_norm(double lambda0, double eta, double kappa);

// ||G^N - G0|| on the half-line.
double neumann_correction_norm(cplx lambda);

// ||G^D - G^N|| and ||G^N - G^R(kappa)|| on the half-line; both
// differences are rank one.
struct HalfLineDifferences {
  double dirichlet_neumann = 0.0;
  double neumann_robin = 0.0;
};

HalfLineDifferences half_line_difference_norms(cplx lambda, double kappa);

// Phi(h) = int_{y < x} exp(2/h [phi(x) - phi(y)]), phi(x) = x - x^3 / 3,
// evaluated as 2 I1 + I4^2. Both are returned as logarithms.
struct PhiIntegral {
  double log_phi = 0.0;
  double log_i1 = 0.0;
  double log_i4 = 0.0;
  double rel_error = 0.0;
};

PhiIntegral phi_integral(double h);

// sup over xi of exp(-xi^2 t - xi t^2 - t^3 / 3).
double semigroup_symbol_norm(double t);

// u(s) = -(1 + s^2)^{3/4} cos(3/2 atan s).
double envelope_u(double s);

// log of exp(-2/3 lambda^{3/2} u(x/lambda)) / (2 sqrt(pi) (lambda^2 + x^2)^{1/8}),
// the leading-order value of |Ai(e^{-ia}(ix + lambda))| for lambda > 0.
double log_airy_envelope(double x, double lambda);

// Limit of D(t) |t|^{3/2} for the diagonal density used by hs_norm.
inline constexpr double diagonal_tail_constant = 1.0 / (16.0 * 1.4142135623730951 * pi * pi);

}  // namespace airyspec
