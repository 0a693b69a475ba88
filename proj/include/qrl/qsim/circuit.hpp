#pragma once

#include <vector>

namespace qrl::qsim {

enum class GateKind { RX, RY, RZ, CNOT, CZ };

inline bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

// One gate in a parameterized circuit. Rotation gates take their angle either
// from a fixed literal or from a parameter slot; entangling gates take none.
// When a slot is used the realized angle is param_scale * slot_value, which
// lets two occurrences share one trainable parameter with opposite sign.
struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;         // CNOT control / second CZ qubit, -1 otherwise
    int param_slot = -1;      // -1 means the rotation uses fixed_angle
    double fixed_angle = 0.0;
    double param_scale = 1.0;

    static Gate rx(int target, double angle) { return {GateKind::RX, target, -1, -1, angle}; }
    static Gate ry(int target, double angle) { return {GateKind::RY, target, -1, -1, angle}; }
    static Gate rz(int target, double angle) { return {GateKind::RZ, target, -1, -1, angle}; }
    static Gate rx_slot(int target, int slot, double scale = 1.0) { return {GateKind::RX, target, -1, slot, 0.0, scale}; }
    static Gate ry_slot(int target, int slot, double scale = 1.0) { return {GateKind::RY, target, -1, slot, 0.0, scale}; }
    static Gate rz_slot(int target, int slot, double scale = 1.0) { return {GateKind::RZ, target, -1, slot, 0.0, scale}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, b, a}; }
};

// Gate list over a fixed slot layout: slots [0, n_inputs) hold encoding
// angles, slots [n_inputs, n_inputs + n_params) hold trainable parameters.
struct ParamCircuit {
    int n_qubits = 0;
    int n_inputs = 0;
    int n_params = 0;
    std::vector<Gate> gates;

    int n_slots() const { return n_inputs + n_params; }

    // throws std::invalid_argument on out-of-range qubits or slots,
    // control == target, or an unsupported qubit count
    void validate() const;
};

// Z measurement on a subset of qubits; one expectation value per entry.
struct Observable {
    std::vector<int> qubits;
};

} // namespace qrl::qsim
