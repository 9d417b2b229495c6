#pragma once

#include "airyspec/scaled.hpp"
#include "airyspec/types.hpp"

namespace airyspec {

enum class Regime { FreeLine, Dirichlet, Neumann, Robin, Transmission, FreeLaplacianBarrier };

// Sign of the potential: -d^2/dx^2 + ix (PlusIx) or -d^2/dx^2 - ix (MinusIx).
enum class Sign { PlusIx, MinusIx };

const char* regime_name(Regime r) noexcept;

struct SpectralProblem {
  Regime regime = Regime::Transmission;
  double kappa = 0.0;
  Sign sign = Sign::MinusIx;
};

struct KernelSample {
  double x = 0.0;
  double y = 0.0;
  cplx lambda{};
  cplx value{};
  Sign sign = Sign::MinusIx;
};

// All kernels below are for the -ix operator; use conjugation_map or
// kernel() for +ix.

// 2 pi Ai(e^{ia} w_<) Ai(e^{-ia} w_>) with w = ix + lambda.
cplx kernel_free_line(double x, double y, cplx lambda);

// Dirichlet, Neumann or Robin (coefficient problem.kappa) on x, y >= 0.
cplx kernel_half_line(const SpectralProblem& problem, double x, double y, cplx lambda);

// Whole-line kernel with transmission at 0 and permeability kappa.
cplx kernel_transmission(double x, double y, cplx lambda, double kappa);

// The rank-one-per-quadrant part G1 = G - G0 of the transmission kernel.
cplx kernel_transmission_correction(double x, double y, cplx lambda, double kappa);

// Resolvent kernel of the Laplacian with the barrier at 0, at mu < 0.
double kernel_laplacian_barrier(double x, double y, double mu, double kappa);

// Maps a -ix sample at lambda to the +ix sample at conj(lambda) and back.
KernelSample conjugation_map(const KernelSample& sample);

// Dispatch on problem.regime and problem.sign. FreeLaplacianBarrier takes
// mu = Re(lambda).
cplx kernel(const SpectralProblem& problem, double x, double y, cplx lambda);
KernelSample kernel_sample(const SpectralProblem& problem, double x, double y, cplx lambda);

// Raises AtPole when |den| <= 1e-14 (1 + |lambda|)^{1/2} * scale.
void check_pole(const Scaled& den, const Scaled& scale, cplx lambda, const char* where);

// Building blocks shared with spectra and norms.

// Boundary coefficient d in G = 2 pi Ai(e^{-ia} w_>) [d Ai(e^{-ia} w_<) - e^{-ia} Ai(w_<)].
Scaled half_line_coefficient(const SpectralProblem& problem, cplx lambda);

// f(lambda) = 2 pi Ai'(e^{-ia} lambda) Ai'(e^{ia} lambda).
Scaled characteristic_f(cplx lambda);

// Coefficients of G1 by quadrant:
//   x, y > 0:      pp * Ai(e^{-ia} w_x) Ai(e^{-ia} w_y)
//   x < 0 < y:     off * Ai(e^{ia} w_x) Ai(e^{-ia} w_y)   (and its transpose)
//   x, y < 0:      mm * Ai(e^{ia} w_x) Ai(e^{ia} w_y)
struct TransmissionCoeffs {
  Scaled f;
  Scaled pp;
  Scaled off;
  Scaled mm;
};
TransmissionCoeffs transmission_coefficients(cplx lambda, double kappa);

}  // namespace airyspec
