#include "airyspec/scaled.hpp"

#include <cmath>
#include <limits>

namespace airyspec {

namespace {
constexpr double kRenormHi = 1e100;
constexpr double kRenormLo = 1e-100;
constexpr double kMaxExp = 709.0;
}  // namespace

Scaled Scaled::exp(cplx w) {
  return {std::polar(1.0, w.imag()), w.real(), raw_tag{}};
}

void Scaled::normalize() noexcept {
  const double r = std::abs(mant_);
  if (r == 0.0) {
    expo_ = 0.0;
    return;
  }
  if (r > kRenormHi || r < kRenormLo) {
    mant_ /= r;
    expo_ += std::log(r);
  }
}

double Scaled::log_abs() const noexcept {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mant_)) + expo_;
}

double Scaled::abs() const noexcept {
  if (is_zero()) return 0.0;
  return std::exp(log_abs());
}

bool Scaled::try_value(cplx& out) const noexcept {
  if (is_zero()) {
    out = {};
    return true;
  }
  const double la = log_abs();
  if (la > kMaxExp) return false;
  if (la < -745.0) {
    out = {};
    return true;
  }
  if (std::abs(expo_) < kMaxExp) {
    out = mant_ * std::exp(expo_);
  } else {
    const double r = std::abs(mant_);
    out = (mant_ / r) * std::exp(la);
  }
  return is_finite(out);
}

cplx Scaled::value() const {
  cplx out;
  if (!try_value(out)) {
    throw Error(ErrorCode::AccuracyLoss,
                "value exp(" + std::to_string(log_abs()) + ") exceeds double range");
  }
  return out;
}

Scaled& Scaled::operator*=(const Scaled& o) noexcept {
  mant_ *= o.mant_;
  expo_ += o.expo_;
  normalize();
  return *this;
}

Scaled& Scaled::operator/=(const Scaled& o) noexcept {
  mant_ /= o.mant_;
  expo_ -= o.expo_;
  normalize();
  return *this;
}

Scaled& Scaled::operator+=(const Scaled& o) noexcept {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const double d = o.expo_ - expo_;
  if (d <= 0.0) {
    if (d > -1400.0) mant_ += o.mant_ * std::exp(d);
  } else {
    mant_ = (d < 1400.0 ? mant_ * std::exp(-d) : cplx{}) + o.mant_;
    expo_ = o.expo_;
  }
  normalize();
  return *this;
}

Scaled& Scaled::operator-=(const Scaled& o) noexcept { return *this += -o; }

}  // namespace airyspec
