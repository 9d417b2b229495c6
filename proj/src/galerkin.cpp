#include "airyspec/galerkin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>

#include "airyspec/quadrature.hpp"

namespace airyspec {

namespace {

double alpha_fn(double a, double kl) { return a * std::cos(a) + 2.0 * kl * std::sin(a); }
double alpha_dfn(double a, double kl) {
  return std::cos(a) - a * std::sin(a) + 2.0 * kl * std::cos(a);
}

// 2 beta L \int_0^1 t cos(p t) sin(alpha (1 - t)) dt by quadrature.
double coupling_quadrature(double p, double a, double beta, double L) {
  const GaussRule rule = gauss_legendre(64);
  auto f = [&](double t) { return t * std::cos(p * t) * std::sin(a * (1.0 - t)); };
  double s = 0.0;
  const int panels = 4 + int((p + a) / 4.0);
  for (int k = 0; k < panels; ++k) s += gauss_panel(f, double(k) / panels, double(k + 1) / panels, rule);
  return 2.0 * beta * L * s;
}

}  // namespace

double solve_alpha(int n, double kappa_L) {
  const double lo0 = pi * n + pi / 2, hi0 = pi * n + pi;
  if (kappa_L == 0.0) return lo0;
  double lo = lo0, hi = hi0;
  double flo = alpha_fn(lo, kappa_L);
  const double fhi = alpha_fn(hi, kappa_L);
  if ((flo < 0) == (fhi < 0)) {
    throw Error(ErrorCode::AlphaBracketFailure, "solve_alpha: no sign change for n=" + std::to_string(n));
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double fm = alpha_fn(mid, kappa_L);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double step = alpha_fn(a, kappa_L) / alpha_dfn(a, kappa_L);
    double next = a - step;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double fn = alpha_fn(next, kappa_L);
    if ((fn < 0) == (flo < 0)) lo = next; else hi = next;
    const bool done = std::abs(next - a) < 1e-14 * a;
    a = next;
    if (done) break;
  }
  if (!(a > lo0 && a < hi0)) {
    throw Error(ErrorCode::AlphaBracketFailure, "solve_alpha: root left its interval, n=" + std::to_string(n));
  }
  return a;
}

double basis_function(const GalerkinModel& m, int n, int j, double x) {
  const double sl = std::sqrt(m.L);
  if (j == 1) return std::cos(pi * (n + 0.5) * x / m.L) / sl;
  const double a = m.alphas[n], b = m.betas[n];
  return x >= 0 ? b / sl * std::sin(a * (1.0 - x / m.L)) : -b / sl * std::sin(a * (1.0 + x / m.L));
}

Eigen::MatrixXcd GalerkinModel::operator_matrix() const {
  Eigen::MatrixXcd M = cplx(0.0, 1.0) * matrix_b.cast<cplx>();
  M.diagonal() += matrix_lambda.cast<cplx>();
  return M;
}

GalerkinModel build_model(double L, double kappa, int n_trunc) {
  if (!(L > 0)) throw Error(ErrorCode::Validation, "build_model: L must be > 0");
  if (kappa < 0) throw Error(ErrorCode::Validation, "build_model: kappa must be >= 0");
  if (n_trunc < 4 || n_trunc % 2) throw Error(ErrorCode::Validation, "build_model: n_trunc must be even and >= 4");
  GalerkinModel m;
  m.L = L;
  m.kappa = kappa;
  m.n_trunc = n_trunc;
  const int half = n_trunc / 2;
  const double kl = kappa * L;
  for (int n = 0; n < half; ++n) {
    const double a = solve_alpha(n, kl);
    m.alphas.push_back(a);
    m.betas.push_back(1.0 / std::sqrt(1.0 + 2.0 * kl / (a * a + 4.0 * kl * kl)));
  }
  m.matrix_lambda.resize(n_trunc);
  m.matrix_b = Eigen::MatrixXd::Zero(n_trunc, n_trunc);
  for (int n = 0; n < half; ++n) {
    const double p = pi * (n + 0.5);
    m.matrix_lambda(2 * n) = p * p / (L * L);
    m.matrix_lambda(2 * n + 1) = m.alphas[n] * m.alphas[n] / (L * L);
  }
  for (int n = 0; n < half; ++n) {
    const double p = pi * (n + 0.5);
    const double sgn = n % 2 ? -1.0 : 1.0;
    for (int k = 0; k < half; ++k) {
      const double a = m.alphas[k], b = m.betas[k];
      const double d = a * a - p * p;
      double v;
      if (std::abs(d) < 1e-6 * p * p) {
        v = coupling_quadrature(p, a, b, L);
      } else {
        v = -2.0 * L * b * (std::sin(a) * (a * a + p * p) - sgn * (2 * n + 1) * pi * a) / (d * d);
      }
      m.matrix_b(2 * n, 2 * k + 1) = v;
      m.matrix_b(2 * k + 1, 2 * n) = v;
    }
  }
  return m;
}

std::vector<EigenvalueRecord> eigenvalues(const GalerkinModel& model) {
  const Eigen::MatrixXcd M = model.operator_matrix();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "eigen decomposition failed");
  const double mnorm = M.norm();
  const Eigen::VectorXcd& ev = es.eigenvalues();
  const Eigen::MatrixXcd& V = es.eigenvectors();
  std::vector<EigenvalueRecord> out;
  for (int i = 0; i < ev.size(); ++i) {
    const Eigen::VectorXcd v = V.col(i).normalized();
    const double res = (M * v - ev(i) * v).norm();
    if (!(res <= 1e-8 * mnorm)) {
      throw Error(ErrorCode::EigensolverFailure, "eigenpair residual " + std::to_string(res));
    }
    EigenvalueRecord r;
    r.lambda = ev(i);
    r.residual = res;
    r.method = Method::Galerkin;
    r.kappa = model.kappa;
    r.branch = ev(i).imag() < 0 ? Branch::Plus : Branch::Minus;
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
    const double ra = a.lambda.real(), rb = b.lambda.real();
    if (std::abs(ra - rb) > 1e-9 * (1.0 + std::abs(ra))) return ra < rb;
    return a.lambda.imag() < b.lambda.imag();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].n = int(i) + 1;
  // Conjugate pairing.
  const double tol = 1e-8 * mnorm;
  for (const auto& r : out) {
    double best = 1e300;
    for (const auto& s : out) best = std::min(best, std::abs(s.lambda - std::conj(r.lambda)));
    if (best > tol) throw Error(ErrorCode::EigensolverFailure, "spectrum not conjugate-paired");
  }
  return out;
}

std::vector<EigenvalueRecord> filter_spurious(const std::vector<EigenvalueRecord>& at_l1,
                                              const std::vector<EigenvalueRecord>& at_l2,
                                              double l1, double l2) {
  if (!(l2 > l1)) throw Error(ErrorCode::Validation, "filter_spurious: need L2 > L1");
  const double threshold = 0.5 * (l2 - l1);
  std::vector<EigenvalueRecord> kept;
  for (const auto& r : at_l2) {
    double best = 1e300, second = 1e300;
    const EigenvalueRecord* match = nullptr;
    for (const auto& s : at_l1) {
      const double d = std::abs(s.lambda - r.lambda);
      if (d < best) {
        second = best;
        best = d;
        match = &s;
      } else if (d < second) {
        second = d;
      }
    }
    if (!match) continue;
    if (second - best < 1e-6 && second < threshold) {
      throw Error(ErrorCode::MatchingAmbiguous, "filter_spurious: two candidates tie");
    }
    if (std::abs(match->lambda.imag() - r.lambda.imag()) <= threshold) kept.push_back(r);
  }
  return kept;
}

double smallest_singular_value(const GalerkinModel& model, cplx lambda) {
  Eigen::MatrixXcd A = model.operator_matrix();
  A.diagonal().array() -= lambda;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues().minCoeff();
}

namespace {

// sigma_min(T - lambda I) for upper-triangular T by power iteration on
// (A^* A)^{-1}; falls back to an SVD if the iteration stalls.
double sigma_min_triangular(const Eigen::MatrixXcd& T, cplx lambda) {
  Eigen::MatrixXcd A = T;
  A.diagonal().array() -= lambda;
  const int n = int(A.rows());
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
  double est = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXcd y = A.triangularView<Eigen::Upper>().solve(x);
    const double ny = y.norm();
    if (!std::isfinite(ny)) return 0.0;
    Eigen::VectorXcd z = A.adjoint().triangularView<Eigen::Lower>().solve(y);
    const double nz = z.norm();
    if (!std::isfinite(nz) || nz == 0.0) return 0.0;
    const double next = std::sqrt(nz);  // ||(A^*A)^{-1} x|| -> sigma_min^{-2}
    x = z / nz;
    if (std::abs(next - est) <= 1e-12 * next) return 1.0 / next;
    est = next;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues().minCoeff();
}

}  // namespace

PseudospecGrid pseudospectrum(const GalerkinModel& model, const GridSpec& grid, int threads) {
  if (grid.nx < 1 || grid.ny < 1) throw Error(ErrorCode::Validation, "pseudospectrum: empty grid");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(model.operator_matrix());
  const Eigen::MatrixXcd T = schur.matrixT();
  PseudospecGrid out;
  out.grid = grid;
  out.values.resize(grid.nx, grid.ny);
  auto work = [&](int first, int stride) {
    for (int i = first; i < grid.nx; i += stride) {
      for (int j = 0; j < grid.ny; ++j) out.values(i, j) = sigma_min_triangular(T, {grid.re(i), grid.im(j)});
    }
  };
  threads = std::max(1, std::min(threads, grid.nx));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

SemigroupDecay semigroup_decay(const GalerkinModel& model, const std::vector<double>& t_grid) {
  const Eigen::MatrixXcd M = model.operator_matrix();
  SemigroupDecay out;
  for (double t : t_grid) {
    if (t < 0) throw Error(ErrorCode::Validation, "semigroup_decay: t must be >= 0");
    double norm = 1.0;
    if (t > 0) {
      const Eigen::MatrixXcd E = (-t * M).exp();
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(E);
      norm = svd.singularValues().maxCoeff();
    }
    out.norms.emplace_back(t, norm);
  }
  // Slope of -log||.|| against t over the second half of the grid.
  const std::size_t from = out.norms.size() / 2;
  double st = 0, sl = 0, stt = 0, stl = 0;
  int cnt = 0;
  for (std::size_t i = from; i < out.norms.size(); ++i) {
    const double t = out.norms[i].first, l = -std::log(out.norms[i].second);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++cnt;
  }
  if (cnt >= 2) out.rate = (cnt * stl - st * sl) / (cnt * stt - st * st);
  return out;
}

}  // namespace airyspec
