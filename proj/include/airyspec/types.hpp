#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace airyspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// alpha = 2*pi/3, the rotation angle of the complex Airy operator.
inline constexpr double alpha = 2.0 * pi / 3.0;

// e^{+i alpha} and e^{-i alpha}
inline const cplx rot_p{-0.5, 0.86602540378443864676};
inline const cplx rot_m{-0.5, -0.86602540378443864676};

enum class ErrorCode {
  Validation,
  AccuracyLoss,
  NoConvergence,
  AtPole,
  OutsideBall,
  JordanBlockSuspected,
  TailUncertified,
  AlphaBracketFailure,
  EigensolverFailure,
  MatchingAmbiguous,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool is_finite(cplx z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace airyspec
