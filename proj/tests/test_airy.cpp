#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "airyspec/airy.hpp"
#include "airyspec/norms.hpp"
#include "support/mp_airy.hpp"

using namespace airyspec;
using airyspec::testing::MpAiry;

namespace {

constexpr double eps = 2.220446049250313e-16;

struct Ref {
  cplx z;
  double la, pa, ld, pd;
};

std::vector<Ref> load_refs() {
  std::ifstream in(AIRY_TEST_DATA "/airy_mpmath.txt");
  std::vector<Ref> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double re, im;
    Ref r;
    ss >> re >> im >> r.la >> r.pa >> r.ld >> r.pd;
    r.z = {re, im};
    out.push_back(r);
  }
  return out;
}

Scaled from_log(double l, double arg) { return Scaled(std::polar(1.0, arg), l); }

// Bisection in double precision on the series evaluator alone.
double series_root(double lo, double hi, bool deriv) {
  auto f = [&](double x) {
    const ScaledAiry a = airy_scaled_in(x, AiryRegime::Series);
    return (deriv ? a.derivative : a.value).value().real();
  };
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m = 0.5 * (lo + hi), fm = f(m);
    if ((fm < 0) == (flo < 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

double scaled_rel_diff(const ScaledAiry& a, const ScaledAiry& b, cplx z) {
  const double root = std::sqrt(std::max(1.0, std::abs(z)));
  const Scaled amp = b.value.abs_scaled() + b.derivative.abs_scaled() / Scaled(root);
  const Scaled dv = (a.value - b.value).abs_scaled() + (a.derivative - b.derivative).abs_scaled() / Scaled(root);
  return (dv / amp).abs();
}

}  // namespace

TEST_CASE("Ai(0) equals the closed form") {
  const double closed = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
  const AiryEval e = eval_airy(0.0);
  CHECK(e.value.real() == doctest::Approx(closed).epsilon(1e-15));
  CHECK(e.value.imag() == 0.0);
  CHECK(std::abs(e.value.real() - 0.3550280539) < 1e-10);
  CHECK(e.regime == AiryRegime::Series);
}

TEST_CASE("values agree with frozen high-precision references") {
  const auto refs = load_refs();
  REQUIRE(refs.size() >= 15);
  for (const auto& r : refs) {
    CAPTURE(r.z);
    const ScaledAiry a = airy_scaled(r.z);
    ScaledAiry ref{from_log(r.la, r.pa), from_log(r.ld, r.pd), a.regime, 0.0};
    const double tol = 60 * eps * std::max(1.0, std::pow(std::abs(r.z), 1.5));
    CHECK(scaled_rel_diff(a, ref, r.z) <= tol);
  }
}

TEST_CASE("Wronskian at 1+2i") {
  const cplx z{1.0, 2.0};
  const AiryEval a = eval_airy(rot_m * z), b = eval_airy(rot_p * z);
  // W(Ai(e^{-ia} z), Ai(e^{ia} z)) = 1 / (2 pi i)
  const cplx w = rot_p * a.value * b.derivative - rot_m * a.derivative * b.value;
  CHECK(std::abs(w - 1.0 / cplx(0.0, 2 * pi)) <= 1e-12);
  CHECK(airy_identity_residuals(z).wronskian <= 1e-12);
}

TEST_CASE("identity residuals at the listed points") {
  auto r0 = airy_identity_residuals(0.0);
  CHECK(r0.rotation <= 1e-13);
  CHECK(r0.wronskian <= 1e-13);
  auto r1 = airy_identity_residuals({5.0, -3.0});
  CHECK(r1.rotation <= 1e-10);
  CHECK(r1.wronskian <= 1e-10);
  auto r2 = airy_identity_residuals(-8.0);
  CHECK(r2.rotation <= 1e-9);
  CHECK(r2.wronskian <= 1e-9);
}

TEST_CASE("identity sweep over |z| in [1e-2, 1e3] and arg = k pi / 6") {
  double worst_rot = 0, worst_w = 0;
  for (int i = 0; i < 100; ++i) {
    const double r = std::pow(10.0, -2.0 + 5.0 * i / 99.0);
    for (int k = -5; k <= 6; ++k) {
      const auto res = airy_identity_residuals(std::polar(r, k * pi / 6));
      worst_rot = std::max(worst_rot, res.rotation);
      worst_w = std::max(worst_w, res.wronskian);
    }
  }
  CHECK(worst_w <= 1e-10);
  CHECK(worst_rot <= 1e-10);
}

TEST_CASE("regime is Series iff |z| <= switch_radius") {
  for (double r : {0.5, 1.99, 2.0, 2.01, 5.0, 20.0}) {
    for (double th : {0.0, 1.0, 2.5, -3.1}) {
      const AiryEval e = eval_airy(std::polar(r, th));
      CHECK((e.regime == AiryRegime::Series) == (r <= switch_radius));
    }
  }
}

TEST_CASE("adjacent evaluation strategies agree across their shared boundaries") {
  double worst = 0;
  for (int k = 0; k < 24; ++k) {
    const double th = -pi + 2 * pi * (k + 0.5) / 24;
    for (double r : {1.8, 1.9, 2.0, 2.1}) {
      const cplx z = std::polar(r, th);
      worst = std::max(worst, scaled_rel_diff(airy_scaled_in(z, AiryRegime::Series),
                                              airy_scaled_in(z, AiryRegime::Continuation), z));
    }
    for (double r : {8.5, 9.0, 9.5, 10.0}) {
      const cplx z = std::polar(r, th);
      const AiryRegime far = std::abs(th) <= 2 * pi / 3 ? AiryRegime::AsymptoticRight : AiryRegime::Rotated;
      worst = std::max(worst, scaled_rel_diff(airy_scaled_in(z, AiryRegime::Continuation), airy_scaled_in(z, far), z));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("error estimate stays below 1e-10 max(1, |Ai|)") {
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const double r = std::pow(10.0, -2.0 + 8.0 * i / 39.0);
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(r, -pi + 2 * pi * (k + 0.25) / 16);
      try {
        const AiryEval e = eval_airy(z);
        CHECK(e.err_estimate <= 1e-10 * std::max(1.0, std::abs(e.value)));
        ++checked;
      } catch (const Error& err) {
        // Only overflow of a representable double is allowed to fail.
        CHECK(err.code() == ErrorCode::AccuracyLoss);
        CHECK(airy_scaled(z).value.log_abs() > 700.0);
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("overflow is reported, not returned") {
  CHECK_THROWS_AS(eval_airy(std::polar(1000.0, 2.0)), Error);
  try {
    eval_airy(std::polar(1000.0, 2.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AccuracyLoss);
  }
  CHECK_THROWS_AS(eval_airy({NAN, 0.0}), Error);
}

TEST_CASE("first zeros match series bisection") {
  const double ap1 = series_root(-2.0, 0.0, true);
  const double a1 = series_root(-3.0, -2.0, false);
  CHECK(std::abs(airy_zero(1, ZeroKind::OfAiPrime).location - ap1) <= 1e-12);
  CHECK(std::abs(airy_zero(1, ZeroKind::OfAi).location - a1) <= 1e-12);
  CHECK(std::abs(ap1 + 1.018793) < 1e-6);
  CHECK(std::abs(a1 + 2.338107) < 1e-6);
  const AiryEval e = eval_airy(airy_zero(1, ZeroKind::OfAiPrime).location);
  CHECK(std::abs(e.derivative) <= 1e-12);
}

TEST_CASE("zeros n <= 20 match a 256-bit bisection oracle") {
  const MpAiry mp;
  for (int n = 1; n <= 20; ++n) {
    CAPTURE(n);
    const double seed_a = -std::pow(3 * pi / 8 * (4 * n - 1), 2.0 / 3.0);
    const double seed_ap = -std::pow(3 * pi / 8 * (4 * n - 3), 2.0 / 3.0);
    const double oa = mp.root(seed_a - 0.25, seed_a + 0.25, false);
    const double oap = mp.root(seed_ap - 0.25, seed_ap + 0.25, true);
    CHECK(std::abs(airy_zero(n, ZeroKind::OfAi).location - oa) <= 1e-12);
    CHECK(std::abs(airy_zero(n, ZeroKind::OfAiPrime).location - oap) <= 1e-12);
  }
}

TEST_CASE("zero residuals, ordering and interlacing") {
  double prev_a = 0.0, prev_ap = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const AiryZero a = airy_zero(n, ZeroKind::OfAi), ap = airy_zero(n, ZeroKind::OfAiPrime);
    CHECK(a.residual <= 1e-12);
    CHECK(ap.residual <= 1e-12);
    CHECK(a.location < prev_a);
    CHECK(ap.location < prev_ap);
    CHECK(ap.location > a.location);
    CHECK(a.location > airy_zero(n + 1, ZeroKind::OfAiPrime).location);
    prev_a = a.location;
    prev_ap = ap.location;
  }
  const double ap50 = airy_zero(50, ZeroKind::OfAiPrime).location;
  const double asym = -std::pow(3 * pi / 2 * (50 - 0.75), 2.0 / 3.0);
  CHECK(std::abs(ap50 / asym - 1) <= 1e-3);
  CHECK_THROWS_AS(airy_zero(0, ZeroKind::OfAi), Error);
}

TEST_CASE("modulus envelope along the rotated vertical line") {
  for (double lambda : {10.0, 20.0}) {
    for (int i = 0; i <= 100; ++i) {
      const double x = 5 * lambda * i / 100.0;
      const double l = airy_scaled(rot_m * cplx(lambda, x)).value.log_abs();
      const double ratio = std::exp(l - log_airy_envelope(x, lambda));
      CHECK(ratio >= 0.99);
      CHECK(ratio <= 1.01);
    }
  }
}
