#include "qrl/vqc/model.hpp"

#include <cmath>
#include <stdexcept>

#include "qrl/qsim/gradient.hpp"
#include "qrl/qsim/statevector.hpp"

namespace qrl::vqc {

namespace {

void append_encoding_block(qsim::ParamCircuit& c, const EncodingSpec& spec) {
    // gate axis follows the rule kind: bounded or binary angles ride an RX,
    // the arctan encoding rides an RY
    for (int q = 0; q < static_cast<int>(spec.size()); ++q) {
        if (spec[q].kind == EncodingRule::Kind::Continuous)
            c.gates.push_back(qsim::Gate::ry_slot(q, q));
        else
            c.gates.push_back(qsim::Gate::rx_slot(q, q));
    }
}

std::vector<double> circuit_theta(const VqcModel& model) {
    std::vector<double> params = model.reparameterized
                                     ? reparameterize(model.theta)
                                     : std::vector<double>(model.theta.begin(), model.theta.end());
    if (model.extraction.mode == Extraction::GlobalScalingPooling)
        params.insert(params.end(), model.extraction.pooling_params.begin(),
                      model.extraction.pooling_params.end());
    return params;
}

std::vector<double> expectations(const VqcModel& model, std::span<const double> state,
                                 int shots, Rng* rng) {
    const std::vector<double> angles = encode(state, model.encoding);
    const std::vector<double> params = circuit_theta(model);
    const qsim::Statevector psi = qsim::run_circuit(model.circuit(), angles, params);
    const qsim::Observable obs = model_observable(model);
    if (shots == 0) return qsim::expectation_z(psi, obs);
    if (shots < 0) throw std::invalid_argument("q_values: shots must be >= 0");
    if (!rng) throw std::invalid_argument("q_values: sampled mode needs an rng");
    return qsim::sample_expectation_z(psi, obs, shots, *rng);
}

} // namespace

ExtractionSpec ExtractionSpec::local_scaling(int n_actions) {
    ExtractionSpec s;
    s.mode = Extraction::LocalScaling;
    s.weights.assign(static_cast<std::size_t>(n_actions), 1.0);
    return s;
}

ExtractionSpec ExtractionSpec::global_scaling() {
    ExtractionSpec s;
    s.mode = Extraction::GlobalScaling;
    s.weights.assign(1, 1.0);
    return s;
}

ExtractionSpec ExtractionSpec::global_scaling_pooling() {
    ExtractionSpec s;
    s.mode = Extraction::GlobalScalingPooling;
    s.weights.assign(1, 1.0);
    s.pooling_params.assign(4, 0.0);
    return s;
}

void ExtractionSpec::validate(int n_actions) const {
    const std::size_t want_w = mode == Extraction::LocalScaling ? static_cast<std::size_t>(n_actions) : 1;
    if (weights.size() != want_w)
        throw std::invalid_argument("ExtractionSpec: wrong weight count");
    const std::size_t want_p = mode == Extraction::GlobalScalingPooling ? 4 : 0;
    if (pooling_params.size() != want_p)
        throw std::invalid_argument("ExtractionSpec: wrong pooling parameter count");
}

VqcModel VqcModel::make(Architecture arch, int n_layers, EncodingSpec enc, ExtractionSpec ext,
                        bool reuploading, bool reparameterized) {
    if (n_layers < 1) throw std::invalid_argument("VqcModel: n_layers must be positive");
    if (enc.empty() || enc.size() > 12) throw std::invalid_argument("VqcModel: bad encoding size");
    VqcModel m;
    m.architecture = arch;
    m.n_layers = n_layers;
    m.encoding = std::move(enc);
    m.extraction = std::move(ext);
    m.reuploading = reuploading;
    m.reparameterized = reparameterized;
    m.extraction.validate(m.n_actions());
    if (m.extraction.mode == Extraction::GlobalScalingPooling && m.n_qubits() != 4)
        throw std::invalid_argument("VqcModel: pooling extraction needs exactly 4 qubits");
    if (m.n_qubits() < 2)
        throw std::invalid_argument("VqcModel: need at least 2 qubits for 2 actions");
    m.theta.assign(static_cast<std::size_t>(m.n_theta()), 0.0);
    return m;
}

const qsim::ParamCircuit& VqcModel::circuit() const {
    if (!circuit_cache_) {
        qsim::ParamCircuit c = build_circuit(*this);
        if (extraction.mode == Extraction::GlobalScalingPooling) c = pool(c);
        circuit_cache_ = std::make_shared<const qsim::ParamCircuit>(std::move(c));
    }
    return *circuit_cache_;
}

qsim::ParamCircuit build_circuit(const VqcModel& model) {
    const int n = model.n_qubits();
    qsim::ParamCircuit c;
    c.n_qubits = n;
    c.n_inputs = n;
    c.n_params = model.n_theta();

    if (!model.reuploading) append_encoding_block(c, model.encoding);
    for (int layer = 0; layer < model.n_layers; ++layer) {
        if (model.reuploading) append_encoding_block(c, model.encoding);
        const int base = c.n_inputs + 2 * n * layer;
        if (model.architecture == Architecture::A) {
            for (int q = 0; q + 1 < n; ++q) c.gates.push_back(qsim::Gate::cnot(q, q + 1));
            for (int q = 0; q < n; ++q) {
                c.gates.push_back(qsim::Gate::ry_slot(q, base + 2 * q));
                c.gates.push_back(qsim::Gate::rz_slot(q, base + 2 * q + 1));
            }
        } else {
            for (int q = 0; q < n; ++q) {
                c.gates.push_back(qsim::Gate::ry_slot(q, base + 2 * q));
                c.gates.push_back(qsim::Gate::rz_slot(q, base + 2 * q + 1));
            }
            for (int q = 0; q < n; ++q) c.gates.push_back(qsim::Gate::cz(q, (q + 1) % n));
        }
    }
    c.validate();
    return c;
}

qsim::ParamCircuit pool(const qsim::ParamCircuit& circuit) {
    if (circuit.n_qubits != 4)
        throw std::invalid_argument("pool: defined for 4-qubit circuits");
    qsim::ParamCircuit c = circuit;
    const int base = c.n_slots();
    c.n_params += 4;
    const int pairs[2][2] = {{0, 2}, {1, 3}};
    for (int p = 0; p < 2; ++p) {
        const int src = pairs[p][0];
        const int snk = pairs[p][1];
        const int a = base + 2 * p;
        const int b = base + 2 * p + 1;
        c.gates.push_back(qsim::Gate::ry_slot(src, a));
        c.gates.push_back(qsim::Gate::ry_slot(snk, b));
        c.gates.push_back(qsim::Gate::cnot(src, snk));
        c.gates.push_back(qsim::Gate::ry_slot(snk, b, -1.0));
    }
    c.validate();
    return c;
}

qsim::Observable model_observable(const VqcModel& model) {
    if (model.extraction.mode == Extraction::GlobalScalingPooling) return {{2, 3}};
    return {{0, 1}};
}

std::vector<double> reparameterize(std::span<const double> theta_raw) {
    std::vector<double> out(theta_raw.size());
    for (std::size_t i = 0; i < theta_raw.size(); ++i)
        out[i] = 6.283185307179586 / (1.0 + std::exp(-theta_raw[i]));
    return out;
}

std::vector<double> reparameterize_grad(std::span<const double> theta_raw) {
    std::vector<double> out(theta_raw.size());
    for (std::size_t i = 0; i < theta_raw.size(); ++i) {
        const double s = 1.0 / (1.0 + std::exp(-theta_raw[i]));
        out[i] = 6.283185307179586 * s * (1.0 - s);
    }
    return out;
}

std::vector<double> q_values(const VqcModel& model, std::span<const double> state, int shots, Rng* rng) {
    const std::vector<double> z = expectations(model, state, shots, rng);
    std::vector<double> q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double w = model.extraction.mode == Extraction::LocalScaling
                             ? model.extraction.weights[i]
                             : model.extraction.weights[0];
        q[i] = w * z[i];
    }
    return q;
}

QGradient q_gradient(const VqcModel& model, std::span<const double> state) {
    const std::vector<double> angles = encode(state, model.encoding);
    const std::vector<double> params = circuit_theta(model);
    const qsim::Observable obs = model_observable(model);
    const qsim::ParamCircuit& circ = model.circuit();

    const qsim::GradMatrix g = qsim::analytic_grad(circ, angles, params, obs);
    const std::vector<double> z = qsim::expectation_z(qsim::run_circuit(circ, angles, params), obs);

    const int n_theta = model.n_theta();
    const bool pooled = model.extraction.mode == Extraction::GlobalScalingPooling;
    const bool local = model.extraction.mode == Extraction::LocalScaling;
    const std::size_t n_actions = z.size();

    std::vector<double> chain(static_cast<std::size_t>(n_theta), 1.0);
    if (model.reparameterized) chain = reparameterize_grad(model.theta);

    QGradient out;
    out.d_theta.assign(n_actions, std::vector<double>(static_cast<std::size_t>(n_theta), 0.0));
    out.d_pooling.assign(n_actions, std::vector<double>(pooled ? 4 : 0, 0.0));
    out.d_weights.assign(n_actions, std::vector<double>(model.extraction.weights.size(), 0.0));

    for (std::size_t i = 0; i < n_actions; ++i) {
        const double w = local ? model.extraction.weights[i] : model.extraction.weights[0];
        for (int j = 0; j < n_theta; ++j)
            out.d_theta[i][j] = w * g[i][j] * chain[j];
        if (pooled)
            for (int k = 0; k < 4; ++k)
                out.d_pooling[i][k] = w * g[i][n_theta + k];
        if (local)
            out.d_weights[i][i] = z[i];
        else
            out.d_weights[i][0] = z[i];
    }
    return out;
}

} // namespace qrl::vqc
