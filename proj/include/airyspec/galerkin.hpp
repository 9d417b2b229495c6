#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "airyspec/spectra.hpp"
#include "airyspec/types.hpp"

namespace airyspec {

// Laplacian eigenbasis on [-L, L] with Dirichlet walls at +-L and the
// transmission condition at 0. Index i of the basis is interleaved:
// even i -> symmetric v_{i/2,1}, odd i -> antisymmetric v_{i/2,2}.
struct GalerkinModel {
  double L = 0.0;
  double kappa = 0.0;
  int n_trunc = 0;
  std::vector<double> alphas;  // alpha_n, n = 0 .. n_trunc/2 - 1
  std::vector<double> betas;
  Eigen::MatrixXd matrix_b;       // position operator
  Eigen::VectorXd matrix_lambda;  // diagonal of the Laplacian
  Eigen::MatrixXcd operator_matrix() const;  // Lambda + i B
};

// Root of alpha cot(alpha) = -2 kappa L in (pi n + pi/2, pi n + pi).
double solve_alpha(int n, double kappa_L);

// Basis function v_{n,j}(x), j = 1 symmetric, j = 2 antisymmetric.
double basis_function(const GalerkinModel& m, int n, int j, double x);

GalerkinModel build_model(double L, double kappa, int n_trunc);

// Sorted by real part, ties broken by increasing imaginary part.
std::vector<EigenvalueRecord> eigenvalues(const GalerkinModel& model);

// Keeps records of the L2 run whose nearest L1 counterpart has a
// comparable imaginary part.
std::vector<EigenvalueRecord> filter_spurious(const std::vector<EigenvalueRecord>& at_l1,
                                              const std::vector<EigenvalueRecord>& at_l2,
                                              double l1, double l2);

struct GridSpec {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
  int nx = 1, ny = 1;
  double re(int i) const { return nx == 1 ? re_min : re_min + (re_max - re_min) * i / (nx - 1); }
  double im(int j) const { return ny == 1 ? im_min : im_min + (im_max - im_min) * j / (ny - 1); }
};

struct PseudospecGrid {
  GridSpec grid;
  Eigen::MatrixXd values;  // values(i, j) at re(i) + i im(j)
};

// Smallest singular value of (Lambda + iB) - lambda I over the grid.
PseudospecGrid pseudospectrum(const GalerkinModel& model, const GridSpec& grid, int threads = 1);

// Same quantity at one point, computed by a full SVD.
double smallest_singular_value(const GalerkinModel& model, cplx lambda);

struct SemigroupDecay {
  std::vector<std::pair<double, double>> norms;  // (t, ||exp(-tM)||_2)
  double rate = 0.0;  // least-squares slope of -log norm over the second half of t_grid
};

SemigroupDecay semigroup_decay(const GalerkinModel& model, const std::vector<double>& t_grid);

}  // namespace airyspec
