#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qrl/qsim/circuit.hpp"
#include "qrl/rng.hpp"

namespace qrl::qsim {

// Dense amplitude vector over the computational basis. Qubit 0 is the least
// significant bit of the basis index, so |q0=1, q1=0> sits at index 1.
struct Statevector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    static Statevector zero_state(int n_qubits);

    double norm_sq() const;
};

// Applies one gate in place. For a slotted rotation the caller passes the
// realized angle; for a fixed-angle rotation and for entangling gates the
// angle argument must be empty.
void apply_gate_in_place(Statevector& state, const Gate& gate, std::optional<double> angle = std::nullopt);

Statevector apply_gate(Statevector state, const Gate& gate, std::optional<double> angle = std::nullopt);

// Resolves the angle a gate realizes under the given slot values.
double resolve_angle(const Gate& gate, std::span<const double> inputs, std::span<const double> theta, int n_inputs);

// |0...0> pushed through the whole gate list.
Statevector run_circuit(const ParamCircuit& circuit, std::span<const double> inputs, std::span<const double> theta);

// Exact <Z_q> for each observed qubit: sum of |a_k|^2 * (+1 or -1 by bit q of k).
std::vector<double> expectation_z(const Statevector& state, const Observable& obs);

// Monte Carlo estimate of expectation_z from `shots` basis-state samples.
// All observed qubits are read off the same samples. shots must be positive.
std::vector<double> sample_expectation_z(const Statevector& state, const Observable& obs, int shots, Rng& rng);

} // namespace qrl::qsim
