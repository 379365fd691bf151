#pragma once
/**
 * @file engine.hpp
 * @brief Runtime selection between the three gradient engines.
 */

#include <string>
#include <string_view>

#include "pinn/errors.hpp"
#include "pinn/grad_adjoint.hpp"
#include "pinn/grad_findiff.hpp"
#include "pinn/grad_sensitivity.hpp"

namespace pinn {

enum class GradientEngine { Sensitivity, Adjoint, Findiff };

inline std::string_view to_string(GradientEngine e) {
  switch (e) {
    case GradientEngine::Sensitivity: return "sensitivity";
    case GradientEngine::Adjoint: return "adjoint";
    case GradientEngine::Findiff: return "findiff";
  }
  return "?";
}

inline GradientEngine engine_from_string(std::string_view s) {
  if (s == "sensitivity") return GradientEngine::Sensitivity;
  if (s == "adjoint") return GradientEngine::Adjoint;
  if (s == "findiff") return GradientEngine::Findiff;
  throw ConfigError("unknown gradient engine '" + std::string(s) + "'");
}

inline Gradients compute_gradient(GradientEngine e, const MlpParams& params, const Problem& problem) {
  switch (e) {
    case GradientEngine::Sensitivity: return gradient_full(params, problem);
    case GradientEngine::Adjoint: return gradient_adjoint(params, problem);
    case GradientEngine::Findiff: return gradient_findiff(params, problem);
  }
  throw ConfigError("unknown gradient engine");
}

}  // namespace pinn
