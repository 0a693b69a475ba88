#include "qrl/qsim/circuit.hpp"

#include <stdexcept>
#include <string>

namespace qrl::qsim {

void ParamCircuit::validate() const {
    // dense statevectors only; beyond ~12 qubits the 2^n vector stops being cheap
    if (n_qubits < 1 || n_qubits > 12)
        throw std::invalid_argument("ParamCircuit: n_qubits must be in [1, 12], got " + std::to_string(n_qubits));
    if (n_inputs < 0 || n_params < 0)
        throw std::invalid_argument("ParamCircuit: negative slot counts");
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        const std::string where = "ParamCircuit: gate " + std::to_string(i);
        if (g.target < 0 || g.target >= n_qubits)
            throw std::invalid_argument(where + ": target out of range");
        if (is_rotation(g.kind)) {
            if (g.control != -1)
                throw std::invalid_argument(where + ": rotation gate cannot have a control");
            if (g.param_slot != -1 && (g.param_slot < 0 || g.param_slot >= n_slots()))
                throw std::invalid_argument(where + ": parameter slot out of range");
        } else {
            if (g.control < 0 || g.control >= n_qubits)
                throw std::invalid_argument(where + ": control out of range");
            if (g.control == g.target)
                throw std::invalid_argument(where + ": control equals target");
            if (g.param_slot != -1)
                throw std::invalid_argument(where + ": entangling gate cannot take a parameter");
        }
    }
}

} // namespace qrl::qsim
