#pragma once

#include <mpfr.h>

namespace airyspec::testing {

// Real-axis Maclaurin series of u'' = x u at 256 bits.
class MpAiry {
 public:
  MpAiry() {
    mpfr_inits2(prec, a0_, a1_, nullptr);
    mpfr_t g;
    mpfr_init2(g, prec);
    // Ai(0) = 3^{-2/3} / Gamma(2/3), Ai'(0) = -3^{-1/3} / Gamma(1/3)
    mpfr_set_ui(g, 2, MPFR_RNDN);
    mpfr_div_ui(g, g, 3, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    mpfr_set_ui(a0_, 3, MPFR_RNDN);
    mpfr_t e;
    mpfr_init2(e, prec);
    mpfr_set_si(e, -2, MPFR_RNDN);
    mpfr_div_ui(e, e, 3, MPFR_RNDN);
    mpfr_pow(a0_, a0_, e, MPFR_RNDN);
    mpfr_div(a0_, a0_, g, MPFR_RNDN);
    mpfr_set_ui(g, 1, MPFR_RNDN);
    mpfr_div_ui(g, g, 3, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    mpfr_set_ui(a1_, 3, MPFR_RNDN);
    mpfr_set_si(e, -1, MPFR_RNDN);
    mpfr_div_ui(e, e, 3, MPFR_RNDN);
    mpfr_pow(a1_, a1_, e, MPFR_RNDN);
    mpfr_div(a1_, a1_, g, MPFR_RNDN);
    mpfr_neg(a1_, a1_, MPFR_RNDN);
    mpfr_clears(g, e, nullptr);
  }
  ~MpAiry() { mpfr_clears(a0_, a1_, nullptr); }

  // Sets out to Ai(x) (deriv = false) or Ai'(x).
  void eval(mpfr_t out, const mpfr_t x, bool deriv) const {
    mpfr_t c0, c1, c2, xk, term, sum, tmp;
    mpfr_inits2(prec, c0, c1, c2, xk, term, sum, tmp, nullptr);
    // c_k for k = 0, 1, 2 and c_{k+3} = c_k / ((k+3)(k+2))
    mpfr_set(c0, a0_, MPFR_RNDN);
    mpfr_set(c1, a1_, MPFR_RNDN);
    mpfr_set_ui(c2, 0, MPFR_RNDN);
    mpfr_set_ui(sum, 0, MPFR_RNDN);
    mpfr_set_ui(xk, 1, MPFR_RNDN);  // x^{k} (or x^{k-1} for the derivative)
    mpfr_t* c[3] = {&c0, &c1, &c2};
    for (long k = 0; k < 3000; ++k) {
      mpfr_t& ck = *c[k % 3];
      if (deriv) {
        if (k > 0) {
          mpfr_mul_si(term, ck, k, MPFR_RNDN);
          mpfr_mul(term, term, xk, MPFR_RNDN);
          mpfr_add(sum, sum, term, MPFR_RNDN);
          mpfr_mul(xk, xk, x, MPFR_RNDN);
        }
      } else {
        mpfr_mul(term, ck, xk, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        mpfr_mul(xk, xk, x, MPFR_RNDN);
      }
      // advance ck -> c_{k+3}
      mpfr_div_si(ck, ck, (k + 3) * (k + 2), MPFR_RNDN);
      if (k > 400 && !mpfr_zero_p(term) && mpfr_get_exp(term) < mpfr_get_exp(sum) - 300) break;
    }
    mpfr_set(out, sum, MPFR_RNDN);
    mpfr_clears(c0, c1, c2, xk, term, sum, tmp, nullptr);
  }

  // Bisection for the sign change of Ai (or Ai') in [lo, hi].
  double root(double lo, double hi, bool deriv) const {
    mpfr_t a, b, m, fa, fm;
    mpfr_inits2(prec, a, b, m, fa, fm, nullptr);
    mpfr_set_d(a, lo, MPFR_RNDN);
    mpfr_set_d(b, hi, MPFR_RNDN);
    eval(fa, a, deriv);
    for (int it = 0; it < 160; ++it) {
      mpfr_add(m, a, b, MPFR_RNDN);
      mpfr_div_ui(m, m, 2, MPFR_RNDN);
      eval(fm, m, deriv);
      if (mpfr_sgn(fm) == mpfr_sgn(fa)) {
        mpfr_set(a, m, MPFR_RNDN);
        mpfr_set(fa, fm, MPFR_RNDN);
      } else {
        mpfr_set(b, m, MPFR_RNDN);
      }
    }
    const double r = mpfr_get_d(a, MPFR_RNDN);
    mpfr_clears(a, b, m, fa, fm, nullptr);
    return r;
  }

  static constexpr mpfr_prec_t prec = 256;

 private:
  mpfr_t a0_, a1_;
};

}  // namespace airyspec::testing
