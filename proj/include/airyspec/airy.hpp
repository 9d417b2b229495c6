#pragma once

#include "airyspec/scaled.hpp"
#include "airyspec/types.hpp"

namespace airyspec {

enum class AiryRegime {
  Series,           // Maclaurin series about the origin
  Continuation,     // Taylor stepping of u'' = z u from a neighbouring regime
  AsymptoticRight,  // Poincare expansion, |arg z| <= 2 pi / 3
  Rotated,          // Ai(z) = -e^{-ia} Ai(e^{-ia} z) - e^{ia} Ai(e^{ia} z)
};

const char* regime_name(AiryRegime r) noexcept;

// Radius of the series disk and of the asymptotic region.
inline constexpr double switch_radius = 2.0;
inline constexpr double asymptotic_radius = 9.0;

struct AiryEval {
  cplx value;
  cplx derivative;
  AiryRegime regime;
  double err_estimate;  // absolute, on the value
};

// Ai and Ai' as Scaled numbers; never overflows.
struct ScaledAiry {
  Scaled value;
  Scaled derivative;
  AiryRegime regime;
  // Error relative to the local amplitude |Ai| + |Ai'| / sqrt(max(1, |z|)).
  double rel_err;
};

ScaledAiry airy_scaled(cplx z);

// Forces one evaluation strategy. Used by the overlap checks; the
// caller is responsible for staying inside the strategy's domain.
ScaledAiry airy_scaled_in(cplx z, AiryRegime regime);

// Throws AccuracyLoss if Ai(z) is not representable or the error
// estimate exceeds 1e-8 max(1, |Ai(z)|).
AiryEval eval_airy(cplx z);

inline cplx airy_ai(cplx z) { return eval_airy(z).value; }
inline cplx airy_aip(cplx z) { return eval_airy(z).derivative; }

struct IdentityResiduals {
  double rotation;   // Ai(z) + e^{-ia} Ai(e^{-ia} z) + e^{ia} Ai(e^{ia} z)
  double wronskian;  // W(z) - i / (2 pi)
};

// Both residuals are divided by max(1, sum of |terms|), so they measure
// agreement to working precision even where the terms are exponentially
// large and cancel.
IdentityResiduals airy_identity_residuals(cplx z);

enum class ZeroKind { OfAi, OfAiPrime };

struct AiryZero {
  int index;
  ZeroKind kind;
  double location;
  double residual;
};

// n-th negative zero of Ai or Ai'. Throws NoConvergence.
AiryZero airy_zero(int n, ZeroKind kind);

}  // namespace airyspec
