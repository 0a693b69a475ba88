#pragma once

#include <span>
#include <vector>

#include "qrl/qsim/statevector.hpp"

namespace qrl::qsim {

// rows: observed qubits in Observable order; columns: parameter slots
using GradMatrix = std::vector<std::vector<double>>;

// d<Z_q>/d theta_j via the two-point shift rule. Every gate occurrence of a
// slot is shifted by +-pi/2 on its realized angle separately and the halved
// differences are summed, so shared slots (re-uploading, sign-tied pooling
// rotations) come out exact. Columns cover trainable slots only.
GradMatrix parameter_shift_grad(const ParamCircuit& circuit, std::span<const double> inputs,
                                std::span<const double> theta, const Observable& obs);

// Same derivative by a reverse sweep over the gate list (one forward pass,
// one backward pass per observable). Exact, no sampling, no shifting.
GradMatrix analytic_grad(const ParamCircuit& circuit, std::span<const double> inputs,
                         std::span<const double> theta, const Observable& obs);

// Variants whose columns cover every slot, encoding angles included
// (columns [0, n_inputs) are input-angle derivatives). Training never uses
// the encoding columns; they exist for diagnostics and tests.
GradMatrix parameter_shift_grad_all_slots(const ParamCircuit& circuit, std::span<const double> inputs,
                                          std::span<const double> theta, const Observable& obs);
GradMatrix analytic_grad_all_slots(const ParamCircuit& circuit, std::span<const double> inputs,
                                   std::span<const double> theta, const Observable& obs);

} // namespace qrl::qsim
