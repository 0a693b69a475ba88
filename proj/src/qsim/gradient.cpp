#include "qrl/qsim/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl::qsim {

namespace {

using cd = std::complex<double>;

constexpr double kHalfPi = 1.5707963267948966;

// forward pass with the angle of exactly one gate occurrence replaced
std::vector<double> run_with_override(const ParamCircuit& circuit, std::span<const double> inputs,
                                      std::span<const double> theta, const Observable& obs,
                                      std::size_t gate_index, double override_angle) {
    Statevector state = Statevector::zero_state(circuit.n_qubits);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (is_rotation(g.kind) && g.param_slot >= 0) {
            const double a = (i == gate_index) ? override_angle
                                               : resolve_angle(g, inputs, theta, circuit.n_inputs);
            apply_gate_in_place(state, g, a);
        } else {
            apply_gate_in_place(state, g);
        }
    }
    return expectation_z(state, obs);
}

// multiplies by the rotation generator: X, Y or Z on the target qubit
void apply_pauli(std::vector<cd>& amp, GateKind kind, int target) {
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t dim = amp.size();
    switch (kind) {
    case GateKind::RX:
        for (std::size_t i = 0; i < dim; ++i)
            if (!(i & mask)) std::swap(amp[i], amp[i | mask]);
        break;
    case GateKind::RY: // Y|0> = i|1>, Y|1> = -i|0>
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mask) continue;
            const cd a = amp[i];
            const cd b = amp[i | mask];
            amp[i] = cd(0, -1) * b;
            amp[i | mask] = cd(0, 1) * a;
        }
        break;
    case GateKind::RZ:
        for (std::size_t i = 0; i < dim; ++i)
            if (i & mask) amp[i] = -amp[i];
        break;
    default:
        throw std::logic_error("apply_pauli: not a rotation kind");
    }
}

void apply_z(std::vector<cd>& amp, int qubit) {
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amp.size(); ++i)
        if (i & mask) amp[i] = -amp[i];
}

cd inner(const std::vector<cd>& a, const std::vector<cd>& b) {
    cd s(0, 0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void unapply(Statevector& state, const Gate& g, double angle) {
    if (is_rotation(g.kind)) {
        Gate inv = g;
        inv.param_slot = -1;
        inv.fixed_angle = -angle;
        apply_gate_in_place(state, inv);
    } else {
        apply_gate_in_place(state, g); // CNOT and CZ are involutions
    }
}

GradMatrix slice_theta_columns(const GradMatrix& all, int n_inputs, int n_params) {
    GradMatrix out(all.size(), std::vector<double>(n_params));
    for (std::size_t r = 0; r < all.size(); ++r)
        for (int j = 0; j < n_params; ++j)
            out[r][j] = all[r][n_inputs + j];
    return out;
}

} // namespace

GradMatrix parameter_shift_grad_all_slots(const ParamCircuit& circuit, std::span<const double> inputs,
                                          std::span<const double> theta, const Observable& obs) {
    const int n_slots = circuit.n_slots();
    GradMatrix grad(obs.qubits.size(), std::vector<double>(n_slots, 0.0));
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (!is_rotation(g.kind) || g.param_slot < 0) continue;
        const double a = resolve_angle(g, inputs, theta, circuit.n_inputs);
        const std::vector<double> plus = run_with_override(circuit, inputs, theta, obs, i, a + kHalfPi);
        const std::vector<double> minus = run_with_override(circuit, inputs, theta, obs, i, a - kHalfPi);
        for (std::size_t q = 0; q < obs.qubits.size(); ++q)
            grad[q][g.param_slot] += g.param_scale * 0.5 * (plus[q] - minus[q]);
    }
    return grad;
}

GradMatrix analytic_grad_all_slots(const ParamCircuit& circuit, std::span<const double> inputs,
                                   std::span<const double> theta, const Observable& obs) {
    const int n_slots = circuit.n_slots();
    const std::size_t n_obs = obs.qubits.size();
    GradMatrix grad(n_obs, std::vector<double>(n_slots, 0.0));

    std::vector<double> angles(circuit.gates.size(), 0.0);
    Statevector ket = Statevector::zero_state(circuit.n_qubits);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (is_rotation(g.kind) && g.param_slot >= 0) {
            angles[i] = resolve_angle(g, inputs, theta, circuit.n_inputs);
            apply_gate_in_place(ket, g, angles[i]);
        } else {
            angles[i] = g.fixed_angle;
            apply_gate_in_place(ket, g);
        }
    }

    // lam_q = Z_q |psi>; sweeping gates off both sides keeps
    // d<Z_q>/d theta = 2 Re <lam | dU/dtheta |pre-gate state>
    std::vector<Statevector> lams(n_obs, ket);
    for (std::size_t q = 0; q < n_obs; ++q) {
        const int qubit = obs.qubits[q];
        if (qubit < 0 || qubit >= circuit.n_qubits)
            throw std::invalid_argument("analytic_grad: observable qubit out of range");
        apply_z(lams[q].amplitudes, qubit);
    }

    std::vector<cd> mu;
    for (std::size_t i = circuit.gates.size(); i-- > 0;) {
        const Gate& g = circuit.gates[i];
        if (is_rotation(g.kind) && g.param_slot >= 0) {
            // dU/dtheta |pre> = (-i/2) A U |pre> = (-i/2) A |post>, and ket still holds |post>
            mu = ket.amplitudes;
            apply_pauli(mu, g.kind, g.target);
            for (cd& a : mu) a *= cd(0, -0.5);
            for (std::size_t q = 0; q < n_obs; ++q)
                grad[q][g.param_slot] += g.param_scale * 2.0 * inner(lams[q].amplitudes, mu).real();
        }
        unapply(ket, g, angles[i]);
        for (std::size_t q = 0; q < n_obs; ++q) unapply(lams[q], g, angles[i]);
    }
    return grad;
}

GradMatrix parameter_shift_grad(const ParamCircuit& circuit, std::span<const double> inputs,
                                std::span<const double> theta, const Observable& obs) {
    return slice_theta_columns(parameter_shift_grad_all_slots(circuit, inputs, theta, obs),
                               circuit.n_inputs, circuit.n_params);
}

GradMatrix analytic_grad(const ParamCircuit& circuit, std::span<const double> inputs,
                         std::span<const double> theta, const Observable& obs) {
    return slice_theta_columns(analytic_grad_all_slots(circuit, inputs, theta, obs),
                               circuit.n_inputs, circuit.n_params);
}

} // namespace qrl::qsim
