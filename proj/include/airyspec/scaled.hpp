#pragma once

#include "airyspec/types.hpp"

namespace airyspec {

// A complex number stored as mant * exp(expo). Products and sums of Airy
// factors at large |z| overflow a double long before the final kernel
// value does, so intermediate arithmetic happens in this form.
class Scaled {
 public:
  Scaled() = default;
  Scaled(cplx value) : mant_(value) {}  // NOLINT(google-explicit-constructor)
  Scaled(cplx mant, double expo) : mant_(mant), expo_(expo) { normalize(); }

  // exp(w) for complex w, without evaluating it.
  static Scaled exp(cplx w);

  cplx mant() const noexcept { return mant_; }
  double expo() const noexcept { return expo_; }
  bool is_zero() const noexcept { return mant_ == cplx{}; }

  // log|value|; -inf for zero.
  double log_abs() const noexcept;
  double abs() const noexcept;
  // |value| as a Scaled real.
  Scaled abs_scaled() const noexcept { return {std::abs(mant_), expo_, raw_tag{}}; }

  // Throws AccuracyLoss when the value does not fit in a double.
  cplx value() const;
  // Same, but flushes underflow to zero and returns false on overflow.
  bool try_value(cplx& out) const noexcept;

  Scaled conj() const noexcept { return {std::conj(mant_), expo_, raw_tag{}}; }

  Scaled& operator*=(const Scaled& o) noexcept;
  Scaled& operator/=(const Scaled& o) noexcept;
  Scaled& operator+=(const Scaled& o) noexcept;
  Scaled& operator-=(const Scaled& o) noexcept;
  Scaled operator-() const noexcept { return {-mant_, expo_, raw_tag{}}; }

  friend Scaled operator*(Scaled a, const Scaled& b) noexcept { return a *= b; }
  friend Scaled operator/(Scaled a, const Scaled& b) noexcept { return a /= b; }
  friend Scaled operator+(Scaled a, const Scaled& b) noexcept { return a += b; }
  friend Scaled operator-(Scaled a, const Scaled& b) noexcept { return a -= b; }

 private:
  struct raw_tag {};
  Scaled(cplx mant, double expo, raw_tag) : mant_(mant), expo_(expo) {}
  void normalize() noexcept;

  cplx mant_{};
  double expo_ = 0.0;
};

}  // namespace airyspec
