#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qrl::agent {

// Adam with bias correction. The learning rate is passed per update so the
// caller can drive it from a schedule; moment estimates persist across calls.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<double> m;
    std::vector<double> v;
    long long t = 0;

    explicit AdamState(std::size_t n_params)
        : m(n_params, 0.0), v(n_params, 0.0) {}

    void update(std::vector<double>& params, std::span<const double> grad, double lr) {
        if (params.size() != m.size() || grad.size() != m.size())
            throw std::invalid_argument("AdamState::update: size mismatch");
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
        }
    }
};

} // namespace qrl::agent
