#include "qrl/qsim/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl::qsim {

namespace {

using cd = std::complex<double>;

// u is row-major [[u00, u01], [u10, u11]] acting on qubit q
void apply_single_qubit(std::vector<cd>& amp, int q, const cd u[4]) {
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t dim = amp.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const cd a = amp[i];
        const cd b = amp[i | mask];
        amp[i] = u[0] * a + u[1] * b;
        amp[i | mask] = u[2] * a + u[3] * b;
    }
}

// half-angle convention: R_A(t) = exp(-i t A / 2)
void rotation_matrix(GateKind kind, double angle, cd out[4]) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::RX: // [[c, -is], [-is, c]]
        out[0] = cd(c, 0); out[1] = cd(0, -s);
        out[2] = cd(0, -s); out[3] = cd(c, 0);
        break;
    case GateKind::RY: // [[c, -s], [s, c]]
        out[0] = cd(c, 0); out[1] = cd(-s, 0);
        out[2] = cd(s, 0); out[3] = cd(c, 0);
        break;
    case GateKind::RZ: // diag(e^{-it/2}, e^{+it/2})
        out[0] = cd(c, -s); out[1] = cd(0, 0);
        out[2] = cd(0, 0); out[3] = cd(c, s);
        break;
    default:
        throw std::logic_error("rotation_matrix: not a rotation kind");
    }
}

} // namespace

Statevector Statevector::zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 12)
        throw std::invalid_argument("Statevector: n_qubits must be in [1, 12]");
    Statevector s;
    s.n_qubits = n_qubits;
    s.amplitudes.assign(std::size_t{1} << n_qubits, cd(0, 0));
    s.amplitudes[0] = cd(1, 0);
    return s;
}

double Statevector::norm_sq() const {
    double n = 0.0;
    for (const cd& a : amplitudes) n += std::norm(a);
    return n;
}

void apply_gate_in_place(Statevector& state, const Gate& gate, std::optional<double> angle) {
    const int n = state.n_qubits;
    if (gate.target < 0 || gate.target >= n)
        throw std::invalid_argument("apply_gate: target out of range");

    if (is_rotation(gate.kind)) {
        if (gate.param_slot >= 0) {
            if (!angle) throw std::invalid_argument("apply_gate: slotted rotation needs an angle");
        } else {
            if (angle) throw std::invalid_argument("apply_gate: fixed-angle rotation takes no angle");
        }
        cd u[4];
        rotation_matrix(gate.kind, angle ? *angle : gate.fixed_angle, u);
        apply_single_qubit(state.amplitudes, gate.target, u);
        return;
    }

    if (angle) throw std::invalid_argument("apply_gate: entangling gate takes no angle");
    if (gate.control < 0 || gate.control >= n)
        throw std::invalid_argument("apply_gate: control out of range");
    if (gate.control == gate.target)
        throw std::invalid_argument("apply_gate: control equals target");

    const std::size_t cm = std::size_t{1} << gate.control;
    const std::size_t tm = std::size_t{1} << gate.target;
    const std::size_t dim = state.amplitudes.size();
    if (gate.kind == GateKind::CNOT) {
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & cm) && !(i & tm)) std::swap(state.amplitudes[i], state.amplitudes[i | tm]);
    } else { // CZ
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & cm) && (i & tm)) state.amplitudes[i] = -state.amplitudes[i];
    }
}

Statevector apply_gate(Statevector state, const Gate& gate, std::optional<double> angle) {
    apply_gate_in_place(state, gate, angle);
    return state;
}

double resolve_angle(const Gate& gate, std::span<const double> inputs, std::span<const double> theta, int n_inputs) {
    if (gate.param_slot < 0) return gate.fixed_angle;
    const int slot = gate.param_slot;
    const double raw = slot < n_inputs ? inputs[slot] : theta[slot - n_inputs];
    return gate.param_scale * raw;
}

Statevector run_circuit(const ParamCircuit& circuit, std::span<const double> inputs, std::span<const double> theta) {
    if (static_cast<int>(inputs.size()) != circuit.n_inputs)
        throw std::invalid_argument("run_circuit: inputs size mismatch");
    if (static_cast<int>(theta.size()) != circuit.n_params)
        throw std::invalid_argument("run_circuit: theta size mismatch");

    Statevector state = Statevector::zero_state(circuit.n_qubits);
    for (const Gate& g : circuit.gates) {
        if (is_rotation(g.kind) && g.param_slot >= 0)
            apply_gate_in_place(state, g, resolve_angle(g, inputs, theta, circuit.n_inputs));
        else
            apply_gate_in_place(state, g);
    }
    return state;
}

std::vector<double> expectation_z(const Statevector& state, const Observable& obs) {
    const std::size_t dim = state.amplitudes.size();
    std::vector<double> out(obs.qubits.size(), 0.0);
    for (std::size_t j = 0; j < obs.qubits.size(); ++j) {
        const int q = obs.qubits[j];
        if (q < 0 || q >= state.n_qubits)
            throw std::invalid_argument("expectation_z: qubit out of range");
        const std::size_t mask = std::size_t{1} << q;
        double e = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double p = std::norm(state.amplitudes[k]);
            e += (k & mask) ? -p : p;
        }
        out[j] = e;
    }
    return out;
}

std::vector<double> sample_expectation_z(const Statevector& state, const Observable& obs, int shots, Rng& rng) {
    if (shots <= 0) throw std::invalid_argument("sample_expectation_z: shots must be positive");
    for (int q : obs.qubits)
        if (q < 0 || q >= state.n_qubits)
            throw std::invalid_argument("sample_expectation_z: qubit out of range");

    const std::size_t dim = state.amplitudes.size();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        acc += std::norm(state.amplitudes[k]);
        cdf[k] = acc;
    }
    // acc is 1 up to rounding; dividing u by it keeps the draw well-defined anyway
    std::vector<long long> sums(obs.qubits.size(), 0);
    for (int s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        std::size_t k = 0;
        while (k + 1 < dim && cdf[k] <= u) ++k;
        for (std::size_t j = 0; j < obs.qubits.size(); ++j) {
            const std::size_t mask = std::size_t{1} << obs.qubits[j];
            sums[j] += (k & mask) ? -1 : 1;
        }
    }
    std::vector<double> out(obs.qubits.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = static_cast<double>(sums[j]) / static_cast<double>(shots);
    return out;
}

} // namespace qrl::qsim
