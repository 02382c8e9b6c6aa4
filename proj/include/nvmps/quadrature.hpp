#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "nvmps/errors.hpp"

namespace nvmps {

// Single-step averaging rule for a time-dependent Hamiltonian.
//
// Riemann freezes the integrand at the left endpoint of the step: the
// average is H(t0). Simpson uses the weighted three-point average
// (H(t0) + 4 H(t0 + dt/2) + H(t0 + dt)) / 6, which reproduces the exact
// mean (1/dt) * integral of H over the step for any integrand that is
// polynomial of degree <= 3 in t.
enum class StepperKind { Riemann, Simpson };

std::string_view to_string(StepperKind kind);
StepperKind stepper_kind_from(std::string_view name);  // ValidationError on unknown name

// Rule-weighted average of a matrix-valued function over [t0, t0 + dt].
// Test hook for the averaging rules on arbitrary integrands; the model
// applies the same weights to the full bond-term list in one shot.
Eigen::MatrixXcd averaged(StepperKind rule,
                          const std::function<Eigen::MatrixXcd(double)>& f,
                          double t0, double dt);

}  // namespace nvmps
