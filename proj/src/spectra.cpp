#include "airyspec/spectra.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "airyspec/airy.hpp"
#include "airyspec/quadrature.hpp"

namespace airyspec {

namespace {

constexpr double kTwoPi = 2.0 * pi;
const cplx kI{0.0, 1.0};

// F(lambda, k) with its partial derivatives.
struct Homotopy {
  std::function<void(cplx, double, cplx&, cplx&, cplx&)> eval;
};

double newton_tol(cplx lambda) { return 1e-12 * (1.0 + std::abs(lambda)); }

bool newton(const Homotopy& h, cplx& lambda, double k) {
  cplx F, Fl, Fk;
  h.eval(lambda, k, F, Fl, Fk);
  for (int it = 0; it < 50; ++it) {
    const cplx step = -F / Fl;
    double t = 1.0;
    cplx cand, Fc, Flc;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      cand = lambda + t * step;
      h.eval(cand, k, Fc, Flc, Fk);
      if (std::abs(Fc) < std::abs(F)) {
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) return std::abs(F) <= newton_tol(lambda);
    const bool was_converged = std::abs(F) <= newton_tol(lambda);
    lambda = cand;
    F = Fc;
    Fl = Flc;
    if (was_converged) return true;  // one polishing step past the tolerance
  }
  return std::abs(F) <= newton_tol(lambda);
}

// Follows the root from k = 0 (where it equals start) to k = target.
cplx continue_root(const Homotopy& h, cplx start, double target, double gap, const std::string& what) {
  cplx lambda = start;
  if (!newton(h, lambda, 0.0)) throw Error(ErrorCode::NoConvergence, what + ": seed did not converge");
  if (target == 0.0) return lambda;
  double k = 0.0, dk = target;
  int guard = 0;
  while (k < target) {
    if (++guard > 10000) throw Error(ErrorCode::NoConvergence, what + ": continuation stalled");
    const double kn = std::min(target, k + dk);
    cplx F, Fl, Fk;
    h.eval(lambda, k, F, Fl, Fk);
    const cplx pred = lambda - (kn - k) * Fk / Fl;
    bool ok = std::abs(pred - lambda) <= 0.25 * gap;
    cplx next = pred;
    if (ok) ok = newton(h, next, kn) && std::abs(next - pred) <= 0.1 * gap;
    if (ok) {
      lambda = next;
      k = kn;
      dk *= 2.0;
    } else {
      dk *= 0.5;
      if (dk < 1e-12 * target) {
        throw Error(ErrorCode::NoConvergence, what + ": continuation step underflow at kappa=" +
                                                  std::to_string(k));
      }
    }
  }
  return lambda;
}

Homotopy conjugated(Homotopy h) {
  return {[h](cplx l, double k, cplx& F, cplx& Fl, cplx& Fk) {
    h.eval(std::conj(l), k, F, Fl, Fk);
    F = std::conj(F);
    Fl = std::conj(Fl);
    Fk = std::conj(Fk);
  }};
}

Homotopy plus_homotopy(Regime regime) {
  switch (regime) {
    case Regime::Dirichlet:
      return {[](cplx l, double, cplx& F, cplx& Fl, cplx& Fk) {
        const cplx mu = rot_m * l;
        const AiryEval a = eval_airy(mu);
        F = a.value;
        Fl = rot_m * a.derivative;
        Fk = 0.0;
      }};
    case Regime::Neumann:
      return {[](cplx l, double, cplx& F, cplx& Fl, cplx& Fk) {
        const cplx mu = rot_m * l;
        const AiryEval a = eval_airy(mu);
        F = a.derivative;
        Fl = rot_m * mu * a.value;
        Fk = 0.0;
      }};
    case Regime::Robin:
      return {[](cplx l, double k, cplx& F, cplx& Fl, cplx& Fk) {
        const cplx mu = rot_m * l;
        const AiryEval a = eval_airy(mu);
        F = kI * rot_m * a.derivative - k * a.value;
        Fl = kI * rot_m * rot_m * mu * a.value - k * rot_m * a.derivative;
        Fk = -a.value;
      }};
    case Regime::Transmission:
      return {[](cplx l, double k, cplx& F, cplx& Fl, cplx& Fk) {
        F = f_transmission(l) + k;
        Fl = f_transmission_prime(l);
        Fk = 1.0;
      }};
    default:
      throw Error(ErrorCode::Validation,
                  std::string("no discrete spectrum for regime ") + regime_name(regime));
  }
}

Homotopy homotopy(Regime regime, Branch branch) {
  Homotopy h = plus_homotopy(regime);
  return branch == Branch::Plus ? h : conjugated(h);
}

cplx branch_rot(Branch b) { return b == Branch::Plus ? rot_p : rot_m; }

double neumann_gap(int n) {
  return airy_zero(n, ZeroKind::OfAiPrime).location - airy_zero(n + 1, ZeroKind::OfAiPrime).location;
}

}  // namespace

const char* branch_name(Branch b) noexcept { return b == Branch::Plus ? "plus" : "minus"; }

cplx f_transmission(cplx lambda) {
  return kTwoPi * eval_airy(rot_m * lambda).derivative * eval_airy(rot_p * lambda).derivative;
}

cplx f_transmission_prime(cplx lambda) {
  const AiryEval am = eval_airy(rot_m * lambda);
  const AiryEval ap = eval_airy(rot_p * lambda);
  return kTwoPi * lambda *
         (rot_p * am.value * ap.derivative + rot_m * ap.value * am.derivative);
}

cplx target_function(const SpectralProblem& problem, Branch branch, cplx lambda) {
  cplx F, Fl, Fk;
  homotopy(problem.regime, branch).eval(lambda, problem.kappa, F, Fl, Fk);
  return F;
}

cplx target_derivative(const SpectralProblem& problem, Branch branch, cplx lambda) {
  cplx F, Fl, Fk;
  homotopy(problem.regime, branch).eval(lambda, problem.kappa, F, Fl, Fk);
  return Fl;
}

cplx dirichlet_pole(int n, Branch branch) {
  return branch_rot(branch) * airy_zero(n, ZeroKind::OfAi).location;
}

cplx neumann_pole(int n, Branch branch) {
  return branch_rot(branch) * airy_zero(n, ZeroKind::OfAiPrime).location;
}

EigenvalueRecord solve_eigenvalue(const SpectralProblem& problem, int n, Branch branch,
                                  const SolveOptions& options) {
  if (n < 1) throw Error(ErrorCode::Validation, "solve_eigenvalue: n must be >= 1");
  if (problem.kappa < 0) throw Error(ErrorCode::Validation, "solve_eigenvalue: kappa must be >= 0");
  const Homotopy h = homotopy(problem.regime, branch);
  const std::string what = std::string("solve_eigenvalue(") + regime_name(problem.regime) +
                           ", n=" + std::to_string(n) + ", kappa=" + std::to_string(problem.kappa) + ")";
  EigenvalueRecord rec;
  rec.n = n;
  rec.branch = branch;
  rec.kappa = problem.kappa;
  rec.regime = problem.regime;
  rec.method = Method::ExactNewton;

  cplx lambda;
  if (problem.regime == Regime::Dirichlet) {
    lambda = dirichlet_pole(n, branch);
    if (!newton(h, lambda, 0.0)) throw Error(ErrorCode::NoConvergence, what);
  } else {
    const cplx start = neumann_pole(n, branch);
    const double k = problem.regime == Regime::Neumann ? 0.0 : problem.kappa;
    lambda = continue_root(h, start, k, neumann_gap(n), what);
    if (problem.regime == Regime::Transmission && k > 0) {
      rec.delta = std::abs(lambda - start) * std::abs(start) / k;
    }
  }
  rec.lambda = lambda;
  rec.residual = std::abs(target_function(problem, branch, lambda));
  if (options.ball_from > 0 && n >= options.ball_from && rec.delta > 2.0) {
    throw Error(ErrorCode::OutsideBall, what + ": root leaves the localization ball");
  }
  return rec;
}

cplx perturbed_eigenvalue(int n, Branch branch, double kappa) {
  const cplx l0 = neumann_pole(n, branch);
  // f'(lambda_n^+) = -i lambda_n^+, and conjugate on the other branch.
  const cplx fp = branch == Branch::Plus ? -kI * l0 : kI * l0;
  return l0 - kappa / fp;
}

DeltaFit delta_fit(double kappa, int n_max, int fit_from) {
  if (n_max < 20) throw Error(ErrorCode::Validation, "delta_fit: n_max must be >= 20");
  if (!(kappa > 0)) throw Error(ErrorCode::Validation, "delta_fit: kappa must be > 0");
  DeltaFit out;
  out.fit_from = fit_from;
  double sxy = 0.0, sxx = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const EigenvalueRecord r = solve_eigenvalue({Regime::Transmission, kappa}, n, Branch::Plus);
    out.delta.push_back(r.delta);
    if (n >= fit_from) {
      const double x = std::pow(double(n), -1.0 / 3.0);
      const double y = (1.0 - r.delta) / kappa;
      sxy += x * y;
      sxx += x * x;
    }
  }
  out.c = sxy / sxx;
  return out;
}

int localization_threshold(double kappa, int n_max, Branch branch) {
  int last_outside = 0;
  for (int n = 1; n <= n_max; ++n) {
    const EigenvalueRecord r = solve_eigenvalue({Regime::Transmission, kappa}, n, branch);
    if (r.delta > 2.0) last_outside = n;
  }
  return last_outside + 1;
}

void check_simple(const EigenvalueRecord& record) {
  const double d = std::abs(f_transmission_prime(record.lambda));
  if (d < 1e-8) {
    throw Error(ErrorCode::JordanBlockSuspected,
                "|f'(lambda)| = " + std::to_string(d) + " at n=" + std::to_string(record.n));
  }
}

namespace {

struct ProjectorCoeffs {
  cplx pp, off, mm;   // blocks of the projector kernel
  cplx psi_pos, psi_neg;  // psi = psi_pos q(x) (x > 0), psi_neg p(x) (x < 0)
};

ProjectorCoeffs projector_coeffs(const EigenvalueRecord& r) {
  const cplx l = r.lambda;
  const cplx fp = f_transmission_prime(l);
  const cplx aip_m = eval_airy(rot_m * l).derivative;
  const cplx aip_p = eval_airy(rot_p * l).derivative;
  ProjectorCoeffs c;
  // Riesz projector -(1/2 pi i) \oint G dlambda, i.e. minus the residue of G1.
  c.pp = 4.0 * pi * pi * rot_p * rot_p * aip_p * aip_p / fp;
  c.off = -kTwoPi * r.kappa / fp;
  c.mm = 4.0 * pi * pi * rot_m * rot_m * aip_m * aip_m / fp;
  c.psi_pos = rot_p * rot_p * aip_p;
  c.psi_neg = aip_m;
  return c;
}

cplx qv(double x, cplx l) { return eval_airy(rot_m * cplx{l.real(), l.imag() + x}).value; }
cplx pv(double x, cplx l) { return eval_airy(rot_p * cplx{l.real(), l.imag() + x}).value; }

}  // namespace

cplx projector_kernel(const EigenvalueRecord& r, double x, double y) {
  const ProjectorCoeffs c = projector_coeffs(r);
  const cplx l = r.lambda;
  const bool xp = x >= 0, yp = y >= 0;
  if (xp && yp) return c.pp * qv(x, l) * qv(y, l);
  if (!xp && !yp) return c.mm * pv(x, l) * pv(y, l);
  if (yp) return c.off * pv(x, l) * qv(y, l);
  return c.off * qv(x, l) * pv(y, l);
}

ProjectorEval projector(const EigenvalueRecord& record) {
  if (record.regime != Regime::Transmission) {
    throw Error(ErrorCode::Validation, "projector: transmission eigenvalues only");
  }
  if (record.residual > 1e-10 * (1.0 + std::abs(record.lambda))) {
    throw Error(ErrorCode::Validation, "projector: record residual too large");
  }
  check_simple(record);
  const cplx l = record.lambda;
  const ProjectorCoeffs c = projector_coeffs(record);

  // Window: both sides decay super-exponentially; widen until the
  // endpoint values are below 1e-9 of the peak modulus.
  double peak = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    peak = std::max(peak, std::abs(x >= 0 ? c.psi_pos * qv(x, l) : c.psi_neg * pv(x, l)));
  }
  double X = 6.0 + std::abs(l.imag());
  while (X < 200.0 && std::max(std::abs(c.psi_pos * qv(X, l)), std::abs(c.psi_neg * pv(-X, l))) >
                          1e-9 * peak) {
    X += 2.0;
  }
  const int panels = std::max(13, int(std::ceil(2.0 * X)));
  const GaussRule& g = gauss16();
  std::vector<double> xs, ws;
  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < panels; ++k) {
      const double a = X * k / panels, b = X * (k + 1) / panels;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i];
        xs.push_back(side == 0 ? -t : t);
        ws.push_back(0.5 * (b - a) * g.weights[i]);
      }
    }
  }
  const std::size_t N = xs.size();
  std::vector<cplx> a(N);  // q on x > 0, p on x < 0
  double qpos = 0.0, pneg = 0.0;
  cplx qsq = 0.0, psq = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    a[i] = xs[i] >= 0 ? qv(xs[i], l) : pv(xs[i], l);
    if (xs[i] >= 0) {
      qpos += ws[i] * std::norm(a[i]);
      qsq += ws[i] * a[i] * a[i];
    } else {
      pneg += ws[i] * std::norm(a[i]);
      psq += ws[i] * a[i] * a[i];
    }
  }

  ProjectorEval out;
  out.record = record;
  out.cutoff = X;
  const double neg2 = 2.0 * std::norm(c.off) * qpos * pneg + std::norm(c.mm) * pneg * pneg;
  out.norm = std::sqrt(std::norm(c.pp) * qpos * qpos + neg2);
  out.negative_side_norm = std::sqrt(neg2);
  const double psi_norm2 = std::norm(c.psi_pos) * qpos + std::norm(c.psi_neg) * pneg;
  out.eigfun_sq_integral = (c.psi_pos * c.psi_pos * qsq + c.psi_neg * c.psi_neg * psq) / psi_norm2;

  // Idempotence on a smooth test function.
  auto apply = [&](const std::vector<cplx>& u) {
    cplx sp = 0.0, sn = 0.0;  // weighted integrals of u against q (x>0) and p (x<0)
    for (std::size_t j = 0; j < N; ++j) (xs[j] >= 0 ? sp : sn) += ws[j] * a[j] * u[j];
    std::vector<cplx> v(N);
    for (std::size_t i = 0; i < N; ++i) {
      v[i] = xs[i] >= 0 ? a[i] * (c.pp * sp + c.off * sn) : a[i] * (c.off * sp + c.mm * sn);
    }
    return v;
  };
  std::vector<cplx> u(N);
  for (std::size_t i = 0; i < N; ++i) {
    u[i] = std::exp(-(xs[i] - 0.3) * (xs[i] - 0.3)) * cplx(1.0, 0.5 * xs[i]);
  }
  const std::vector<cplx> v1 = apply(u);
  const std::vector<cplx> v2 = apply(v1);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    num += ws[i] * std::norm(v2[i] - v1[i]);
    den += ws[i] * std::norm(v1[i]);
  }
  out.idempotence_residual = std::sqrt(num / den);
  return out;
}

double robin_pole_simplicity(double kappa, int n) {
  const SpectralProblem p{Regime::Robin, kappa};
  const EigenvalueRecord r = solve_eigenvalue(p, n, Branch::Plus);
  return std::abs(target_derivative(p, Branch::Plus, r.lambda));
}

}  // namespace airyspec
