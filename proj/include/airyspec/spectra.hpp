#pragma once

#include <vector>

#include "airyspec/kernels.hpp"
#include "airyspec/types.hpp"

namespace airyspec {

// Plus: roots near e^{+ia} a'_n (Im < 0). Minus: their conjugates.
enum class Branch { Plus, Minus };
enum class Method { ExactNewton, Galerkin };

const char* branch_name(Branch b) noexcept;

struct EigenvalueRecord {
  int n = 0;
  Branch branch = Branch::Plus;
  cplx lambda{};
  double residual = 0.0;
  Method method = Method::ExactNewton;
  double kappa = 0.0;
  Regime regime = Regime::Transmission;
  // |lambda - lambda_n(0)| |lambda_n(0)| / kappa; 0 when kappa = 0.
  double delta = 0.0;
};

struct SolveOptions {
  // Raise OutsideBall for transmission roots with n >= this index that
  // leave B(lambda_n, 2 kappa / |lambda_n|). Zero disables the check.
  int ball_from = 0;
};

// f(lambda) = 2 pi Ai'(e^{-ia} lambda) Ai'(e^{ia} lambda) and its derivative.
cplx f_transmission(cplx lambda);
cplx f_transmission_prime(cplx lambda);

// Function whose zeros are the Plus-branch poles of the regime, and its
// lambda-derivative. Minus-branch poles are zeros of conj(F(conj lambda)).
//   Dirichlet:    Ai(e^{-ia} lambda)
//   Neumann:      Ai'(e^{-ia} lambda)
//   Robin:        i e^{-ia} Ai'(e^{-ia} lambda) - kappa Ai(e^{-ia} lambda)
//   Transmission: f(lambda) + kappa
cplx target_function(const SpectralProblem& problem, Branch branch, cplx lambda);
cplx target_derivative(const SpectralProblem& problem, Branch branch, cplx lambda);

// e^{+-ia} a_n and e^{+-ia} a'_n.
cplx dirichlet_pole(int n, Branch branch);
cplx neumann_pole(int n, Branch branch);

EigenvalueRecord solve_eigenvalue(const SpectralProblem& problem, int n, Branch branch,
                                  const SolveOptions& options = {});

// First-order expansion lambda_n - kappa / f'(lambda_n).
cplx perturbed_eigenvalue(int n, Branch branch, double kappa);

struct DeltaFit {
  double c = 0.0;
  int fit_from = 0;
  std::vector<double> delta;  // delta[n-1] for n = 1..n_max
};

// Least-squares fit of (1 - delta_n) / kappa = c n^{-1/3} over n in [fit_from, n_max].
DeltaFit delta_fit(double kappa, int n_max, int fit_from = 20);

// Smallest N such that every root with N <= n <= n_max lies in its ball.
int localization_threshold(double kappa, int n_max, Branch branch = Branch::Plus);

struct ProjectorEval {
  EigenvalueRecord record;
  double norm = 0.0;              // operator norm of the rank-one projector
  cplx eigfun_sq_integral{};      // integral of psi^2 with ||psi|| = 1
  double idempotence_residual = 0.0;
  double negative_side_norm = 0.0;  // HS norm of the blocks touching x < 0
  double cutoff = 0.0;              // quadrature window [-cutoff, cutoff]
};

// Throws JordanBlockSuspected if |f'(lambda)| < 1e-8.
void check_simple(const EigenvalueRecord& record);

// Riesz projector at a transmission eigenvalue lambda, for the -ix
// operator (kernel of G^-). The +ix projector at conj(lambda) is its
// complex conjugate.
ProjectorEval projector(const EigenvalueRecord& record);

// Sampled kernel of the projector.
cplx projector_kernel(const EigenvalueRecord& record, double x, double y);

// |d f^R / d lambda| at the n-th Robin pole.
double robin_pole_simplicity(double kappa, int n);

}  // namespace airyspec
