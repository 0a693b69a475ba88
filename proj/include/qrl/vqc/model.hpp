#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qrl/qsim/circuit.hpp"
#include "qrl/rng.hpp"
#include "qrl/vqc/encoding.hpp"

namespace qrl::vqc {

// Layer body of the ansatz.
//   A: CNOT chain (0->1, 1->2, ...) first, then RY(theta), RZ(theta) per qubit
//   B: RY(theta), RZ(theta) per qubit first, then a circular CZ ring
enum class Architecture { A, B };

// How Q-values are read off the measured expectations.
//   LocalScaling:         q_i = w_i * <Z_i>, one weight per action
//   GlobalScaling:        q_i = w  * <Z_i>, a single shared weight
//   GlobalScalingPooling: shared weight, but <Z> is taken on the sinks of a
//                         trainable two-pair pooling block (qubits 2 and 3)
enum class Extraction { LocalScaling, GlobalScaling, GlobalScalingPooling };

struct ExtractionSpec {
    Extraction mode = Extraction::GlobalScaling;
    std::vector<double> weights;        // size n_actions (local) or 1 (global)
    std::vector<double> pooling_params; // size 4, pooling mode only

    static ExtractionSpec local_scaling(int n_actions);
    static ExtractionSpec global_scaling();
    static ExtractionSpec global_scaling_pooling();
    void validate(int n_actions) const;
};

// Full Q-function model: data encoding, entangling ansatz, extraction.
// theta holds the raw rotation weights, 2 * n_qubits * n_layers of them.
// All weights start at the documented defaults: theta and pooling at zero,
// classical scaling weights at one.
struct VqcModel {
    Architecture architecture = Architecture::B;
    int n_layers = 5;
    EncodingSpec encoding;
    ExtractionSpec extraction;
    bool reuploading = false;
    bool reparameterized = false;
    std::vector<double> theta;

    int n_qubits() const { return static_cast<int>(encoding.size()); }
    int n_actions() const { return 2; }
    int n_theta() const { return 2 * n_qubits() * n_layers; }

    static VqcModel make(Architecture arch, int n_layers, EncodingSpec enc, ExtractionSpec ext,
                         bool reuploading, bool reparameterized);

    // built once per structure and shared by copies; parameters do not
    // affect structure, so mutation of theta never invalidates it
    const qsim::ParamCircuit& circuit() const;

private:
    mutable std::shared_ptr<const qsim::ParamCircuit> circuit_cache_;
};

// Ansatz without the pooling block. Slot layout: encoding angles in
// [0, n_qubits), rotation weights after them, layer by layer, RY before RZ
// per qubit. With re-uploading the encoding block recurs before every layer,
// reusing the same input slots.
qsim::ParamCircuit build_circuit(const VqcModel& model);

// Appends the pooling block for a 4-qubit circuit: pairs (0 -> 2), (1 -> 3),
// each RY(a) on the source, RY(b) on the sink, CNOT, RY(-b) on the sink.
// Adds 4 trainable slots; the sign-tied rotations share a slot.
qsim::ParamCircuit pool(const qsim::ParamCircuit& circuit);

// Z on qubits {0, 1}, or on the pooling sinks {2, 3} under pooling extraction.
qsim::Observable model_observable(const VqcModel& model);

// Angle squashing f(t) = 2*pi*sigmoid(t), applied to theta when the model is
// reparameterized, plus its elementwise derivative for the chain rule.
std::vector<double> reparameterize(std::span<const double> theta_raw);
std::vector<double> reparameterize_grad(std::span<const double> theta_raw);

// One value per action. shots == 0 evaluates exact expectations; a positive
// count estimates them from samples drawn with rng (required in that case).
std::vector<double> q_values(const VqcModel& model, std::span<const double> state,
                             int shots = 0, Rng* rng = nullptr);

// Exact-gradient bundle, one row per action.
struct QGradient {
    std::vector<std::vector<double>> d_theta;   // w.r.t. raw theta
    std::vector<std::vector<double>> d_pooling; // empty unless pooling
    std::vector<std::vector<double>> d_weights; // w.r.t. extraction weights
};
QGradient q_gradient(const VqcModel& model, std::span<const double> state);

} // namespace qrl::vqc
