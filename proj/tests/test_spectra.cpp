#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "airyspec/airy.hpp"
#include "airyspec/kernels.hpp"
#include "airyspec/spectra.hpp"
#include "support/winding.hpp"

using namespace airyspec;
using airyspec::testing::count_zeros;

namespace {

const SpectralProblem transmission(double kappa) { return {Regime::Transmission, kappa, Sign::PlusIx}; }

bool close4(cplx v, double re, double im) {
  return std::abs(v.real() - re) <= 5e-5 && std::abs(v.imag() - im) <= 5e-5;
}

}  // namespace

TEST_CASE("f is real and positive on the real axis") {
  const cplx f0 = f_transmission(0.0);
  CHECK(f0.real() > 0);
  CHECK(std::abs(f0.imag()) <= 1e-15 * f0.real());
  // Closed form at 0: 2 pi Ai'(0)^2.
  const double aip0 = -1.0 / (std::cbrt(3.0) * std::tgamma(1.0 / 3.0));
  CHECK(f0.real() == doctest::Approx(2 * pi * aip0 * aip0).epsilon(1e-13));
  for (double l : {0.5, 1.0, 2.0, 5.0}) {
    const cplx f = f_transmission(l);
    CHECK(f.real() > 0);
    CHECK(std::abs(f.imag()) <= 1e-12 * f.real());
  }
}

TEST_CASE("derivative of f") {
  const cplx l1 = neumann_pole(1, Branch::Plus);
  CHECK(std::abs(f_transmission_prime(l1) + cplx(0, 1) * l1) <= 1e-8);
  for (const cplx l : {cplx(0.3, 0.2), cplx(1.5, -2.0), cplx(4.0, 1.0)}) {
    const double h = 1e-4;
    const cplx fd = (f_transmission(l + h) - f_transmission(l - h)) / (2 * h);
    const cplx fdi = (f_transmission(l + cplx(0, h)) - f_transmission(l - cplx(0, h))) / cplx(0, 2 * h);
    CHECK(std::abs(fd - f_transmission_prime(l)) <= 1e-6 * std::max(1.0, std::abs(fd)));
    CHECK(std::abs(fdi - f_transmission_prime(l)) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("exact eigenvalues match the printed table") {
  CHECK(close4(solve_eigenvalue(transmission(0.0), 1, Branch::Plus).lambda, 0.5094, -0.8823));
  CHECK(close4(solve_eigenvalue(transmission(1.0), 1, Branch::Plus).lambda, 1.0029, -1.0363));
  CHECK(close4(solve_eigenvalue(transmission(1.0), 2, Branch::Plus).lambda, 1.8390, -2.8685));
  CHECK(close4(solve_eigenvalue(transmission(0.0), 2, Branch::Plus).lambda, 1.6241, -2.8130));
}

TEST_CASE("record invariants across n and kappa") {
  for (double kappa : {0.0, 0.1, 1.0, 10.0}) {
    double prev_re = 0.0;
    for (int n = 1; n <= 100; ++n) {
      CAPTURE(kappa);
      CAPTURE(n);
      const EigenvalueRecord p = solve_eigenvalue(transmission(kappa), n, Branch::Plus);
      const EigenvalueRecord m = solve_eigenvalue(transmission(kappa), n, Branch::Minus);
      CHECK(p.lambda.real() > 0);
      CHECK(p.lambda.imag() < 0);
      CHECK(p.residual <= 1e-10 * (1 + std::abs(p.lambda)));
      CHECK(std::abs(m.lambda - std::conj(p.lambda)) <= 1e-10 * (1 + std::abs(p.lambda)));
      // Re-verified through the kernel denominator.
      const Scaled den = characteristic_f(p.lambda) + Scaled(kappa);
      CHECK(den.abs() <= 1e-10 * (1 + std::abs(p.lambda)));
      CHECK(p.lambda.real() > prev_re);
      prev_re = p.lambda.real();
    }
  }
  for (int n = 1; n < 100; ++n) CHECK(neumann_pole(n + 1, Branch::Plus).real() > neumann_pole(n, Branch::Plus).real());
}

TEST_CASE("Dirichlet, Neumann and Robin poles") {
  const SpectralProblem dir{Regime::Dirichlet, 0.0, Sign::PlusIx}, neu{Regime::Neumann, 0.0, Sign::PlusIx};
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(solve_eigenvalue(dir, n, Branch::Plus).lambda - rot_p * airy_zero(n, ZeroKind::OfAi).location) <= 1e-10);
    CHECK(std::abs(solve_eigenvalue(neu, n, Branch::Minus).lambda -
                   rot_m * airy_zero(n, ZeroKind::OfAiPrime).location) <= 1e-10);
  }
  const EigenvalueRecord r0 = solve_eigenvalue({Regime::Robin, 0.0, Sign::PlusIx}, 1, Branch::Plus);
  CHECK(std::abs(r0.lambda - neumann_pole(1, Branch::Plus)) <= 1e-10);
  const EigenvalueRecord r1 = solve_eigenvalue({Regime::Robin, 1e3, Sign::PlusIx}, 1, Branch::Plus);
  CHECK(std::abs(r1.lambda - dirichlet_pole(1, Branch::Plus)) <= 1e-2);
  for (double kappa : {0.5, 1.0, 5.0})
    for (int n = 1; n <= 10; ++n) CHECK(robin_pole_simplicity(kappa, n) > 1e-8);
  CHECK_THROWS_AS(solve_eigenvalue(dir, 0, Branch::Plus), Error);
  CHECK_THROWS_AS(solve_eigenvalue(transmission(-1.0), 1, Branch::Plus), Error);
}

TEST_CASE("perturbation expansion") {
  for (int n = 1; n <= 5; ++n) CHECK(perturbed_eigenvalue(n, Branch::Plus, 0.0) == neumann_pole(n, Branch::Plus));
  const double kappa = 0.1;
  std::vector<double> ratio;
  for (int n = 5; n <= 50; ++n) {
    const cplx exact = solve_eigenvalue(transmission(kappa), n, Branch::Plus).lambda;
    const double ap = std::abs(airy_zero(n, ZeroKind::OfAiPrime).location);
    ratio.push_back(std::abs(exact - perturbed_eigenvalue(n, Branch::Plus, kappa)) * std::pow(ap, 1.5) / (kappa * kappa));
  }
  // One constant C serves every n: the scaled remainder is flat in n.
  const double C = *std::max_element(ratio.begin(), ratio.end());
  const double lo = *std::min_element(ratio.begin(), ratio.end());
  MESSAGE("scaled second-order remainder in [" << lo << ", " << C << "]");
  CHECK(C < 10.0);
  CHECK(lo > 0.5 * C);
  // The first-order term is the whole story at small kappa.
  const cplx e1 = solve_eigenvalue(transmission(1e-4), 3, Branch::Plus).lambda;
  CHECK(std::abs(e1 - perturbed_eigenvalue(3, Branch::Plus, 1e-4)) <= 1e-9);
}

TEST_CASE("delta stays below 1 and approaches it") {
  for (double kappa : {0.1, 1.0, 10.0}) {
    const DeltaFit fit = delta_fit(kappa, 100);
    REQUIRE(fit.delta.size() == 100);
    for (double d : fit.delta) {
      CHECK(d > 0);
      CHECK(d < 1);
    }
    if (kappa <= 1.0) {
      for (int n = 50; n < 100; ++n) CHECK(fit.delta[n] > fit.delta[n - 1]);
    }
  }
  const DeltaFit f1 = delta_fit(1.0, 100), f01 = delta_fit(0.1, 100);
  CHECK(std::abs(f1.c - 0.31) <= 0.05);
  CHECK(std::abs(f1.c - f01.c) <= 0.05);
  CHECK_THROWS_AS(delta_fit(1.0, 10), Error);
}

TEST_CASE("ball localization") {
  for (double kappa : {0.1, 1.0, 10.0}) {
    const int N = localization_threshold(kappa, 100);
    MESSAGE("kappa " << kappa << ": localization from n = " << N);
    CHECK(N >= 1);
    CHECK(N <= 100);
    for (int n = N; n <= 100; ++n) {
      const cplx l0 = neumann_pole(n, Branch::Plus);
      const cplx l = solve_eigenvalue(transmission(kappa), n, Branch::Plus).lambda;
      CHECK(std::abs(l - l0) <= 2 * kappa / std::abs(l0));
    }
  }
}

TEST_CASE("argument principle finds no spurious roots") {
  for (double kappa : {0.0, 1.0, 10.0})
    for (int n_max : {3, 8}) {
      CAPTURE(kappa);
      CAPTURE(n_max);
      CHECK(count_zeros(kappa, n_max) == 2 * n_max);
    }
}

TEST_CASE("projectors") {
  const EigenvalueRecord r11 = solve_eigenvalue(transmission(1.0), 1, Branch::Plus);
  const ProjectorEval p11 = projector(r11);
  CHECK(std::abs(p11.norm * std::abs(p11.eigfun_sq_integral) - 1.0) <= 1e-6);

  const ProjectorEval p12 = projector(solve_eigenvalue(transmission(1.0), 2, Branch::Plus));
  CHECK(p12.idempotence_residual <= 1e-6);

  const ProjectorEval p01 = projector(solve_eigenvalue(transmission(0.0), 1, Branch::Plus));
  CHECK(p01.negative_side_norm <= 1e-12);
  CHECK(std::abs(projector_kernel(p01.record, -0.5, 0.7)) <= 1e-14);
  CHECK(std::abs(projector_kernel(p01.record, 0.5, 0.7)) > 1e-3);

  CHECK_NOTHROW(check_simple(r11));
}

TEST_CASE("projector kernel equals the Riesz contour integral of the resolvent") {
  for (double kappa : {0.0, 1.0}) {
    for (int n : {1, 2}) {
      const EigenvalueRecord rec = solve_eigenvalue(transmission(kappa), n, Branch::Plus);
      const SpectralProblem minus{Regime::Transmission, kappa, Sign::MinusIx};
      const SpectralProblem plus{Regime::Transmission, kappa, Sign::PlusIx};
      const double r = 1e-2;
      const int m = 64;
      for (const auto& [x, y] : std::vector<std::pair<double, double>>{{0.3, 0.8}, {-0.4, 0.6}, {-1.0, -0.2}}) {
        // (1 / 2 pi i) closed integral of (lambda - A)^{-1} = -mean of G (lambda - lambda_n).
        cplx sm = 0, sp = 0;
        for (int k = 0; k < m; ++k) {
          const cplx e = std::polar(1.0, 2 * pi * k / m);
          sm += kernel(minus, x, y, rec.lambda + r * e) * r * e;
          sp += kernel(plus, x, y, std::conj(rec.lambda) + r * e) * r * e;
        }
        const cplx pk = projector_kernel(rec, x, y);
        CAPTURE(kappa);
        CAPTURE(n);
        CAPTURE(x);
        CAPTURE(y);
        CHECK(std::abs(-sm / double(m) - pk) <= 1e-8 * std::max(1.0, std::abs(pk)));
        CHECK(std::abs(-sp / double(m) - std::conj(pk)) <= 1e-8 * std::max(1.0, std::abs(pk)));
      }
    }
  }
}

TEST_CASE("projector has unit trace") {
  const EigenvalueRecord rec = solve_eigenvalue(transmission(1.0), 1, Branch::Plus);
  const ProjectorEval pe = projector(rec);
  const double X = pe.cutoff;
  const int m = 4000;
  const double h = X / m;
  // Composite Simpson on each side of the interface, which the diagonal jumps across.
  cplx tr = 0;
  for (double side : {-1.0, 1.0}) {
    for (int k = 0; k <= m; ++k) {
      const double x = k == 0 ? side * 1e-300 : side * k * h;
      const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      tr += w * projector_kernel(rec, x, x) * (h / 3);
    }
  }
  CHECK(std::abs(tr - 1.0) <= 1e-6);
}
