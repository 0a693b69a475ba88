#include "qrl/agent/qfunction.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl::agent {

std::vector<double> QFunction::q_values_sampled(const Obs& s, int /*shots*/, Rng& /*rng*/) const {
    return q_values(s);
}

VqcQFunction::VqcQFunction(vqc::VqcModel model) : model_(std::move(model)) {}

std::size_t VqcQFunction::n_params() const {
    return model_.theta.size() + model_.extraction.pooling_params.size() +
           model_.extraction.weights.size();
}

std::vector<double> VqcQFunction::get_params() const {
    std::vector<double> p;
    p.reserve(n_params());
    p.insert(p.end(), model_.theta.begin(), model_.theta.end());
    p.insert(p.end(), model_.extraction.pooling_params.begin(), model_.extraction.pooling_params.end());
    p.insert(p.end(), model_.extraction.weights.begin(), model_.extraction.weights.end());
    return p;
}

void VqcQFunction::set_params(std::span<const double> p) {
    if (p.size() != n_params())
        throw std::invalid_argument("VqcQFunction::set_params: size mismatch");
    std::size_t k = 0;
    for (double& x : model_.theta) x = p[k++];
    for (double& x : model_.extraction.pooling_params) x = p[k++];
    for (double& x : model_.extraction.weights) x = p[k++];
}

std::vector<double> VqcQFunction::q_values(const Obs& s) const {
    return vqc::q_values(model_, s);
}

std::vector<double> VqcQFunction::q_values_sampled(const Obs& s, int shots, Rng& rng) const {
    return vqc::q_values(model_, s, shots, &rng);
}

std::vector<std::vector<double>> VqcQFunction::q_gradient(const Obs& s) const {
    const vqc::QGradient g = vqc::q_gradient(model_, s);
    const std::size_t n = n_params();
    std::vector<std::vector<double>> rows(g.d_theta.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        rows[a].reserve(n);
        rows[a].insert(rows[a].end(), g.d_theta[a].begin(), g.d_theta[a].end());
        rows[a].insert(rows[a].end(), g.d_pooling[a].begin(), g.d_pooling[a].end());
        rows[a].insert(rows[a].end(), g.d_weights[a].begin(), g.d_weights[a].end());
    }
    return rows;
}

std::unique_ptr<QFunction> VqcQFunction::clone() const {
    return std::make_unique<VqcQFunction>(*this);
}

namespace {

double softplus(double x) {
    // overflow-safe: softplus(x) = max(x, 0) + log1p(exp(-|x|))
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

ClassicalNet::ClassicalNet() : params_(kParamCount, 0.0) {}

ClassicalNet ClassicalNet::init(Rng& rng) {
    ClassicalNet net;
    // uniform Glorot-style ranges; biases stay zero
    const double lim1 = std::sqrt(6.0 / (kIn + kHidden));
    const double lim2 = std::sqrt(6.0 / (kHidden + kOut));
    std::size_t k = 0;
    for (int i = 0; i < kIn * kHidden; ++i) net.params_[k++] = rng.uniform(-lim1, lim1);
    k += kHidden;
    for (int i = 0; i < kHidden * kOut; ++i) net.params_[k++] = rng.uniform(-lim2, lim2);
    return net;
}

void ClassicalNet::set_params(std::span<const double> p) {
    if (p.size() != kParamCount)
        throw std::invalid_argument("ClassicalNet::set_params: size mismatch");
    params_.assign(p.begin(), p.end());
}

std::vector<double> ClassicalNet::q_values(const Obs& s) const {
    const double* w1 = params_.data();                       // kHidden x kIn
    const double* b1 = w1 + kIn * kHidden;                   // kHidden
    const double* w2 = b1 + kHidden;                         // kOut x kHidden
    const double* b2 = w2 + kHidden * kOut;                  // kOut

    std::array<double, kHidden> h{};
    for (int j = 0; j < kHidden; ++j) {
        double z = b1[j];
        for (int i = 0; i < kIn; ++i) z += w1[j * kIn + i] * s[i];
        h[j] = softplus(z);
    }
    std::vector<double> q(kOut);
    for (int a = 0; a < kOut; ++a) {
        double z = b2[a];
        for (int j = 0; j < kHidden; ++j) z += w2[a * kHidden + j] * h[j];
        q[a] = z;
    }
    return q;
}

std::vector<std::vector<double>> ClassicalNet::q_gradient(const Obs& s) const {
    const double* w1 = params_.data();
    const double* b1 = w1 + kIn * kHidden;
    const double* w2 = b1 + kHidden;

    std::array<double, kHidden> pre{};
    std::array<double, kHidden> h{};
    for (int j = 0; j < kHidden; ++j) {
        double z = b1[j];
        for (int i = 0; i < kIn; ++i) z += w1[j * kIn + i] * s[i];
        pre[j] = z;
        h[j] = softplus(z);
    }

    std::vector<std::vector<double>> rows(kOut, std::vector<double>(kParamCount, 0.0));
    for (int a = 0; a < kOut; ++a) {
        std::vector<double>& g = rows[a];
        const std::size_t off_b1 = kIn * kHidden;
        const std::size_t off_w2 = off_b1 + kHidden;
        const std::size_t off_b2 = off_w2 + kHidden * kOut;
        for (int j = 0; j < kHidden; ++j) {
            const double up = w2[a * kHidden + j] * logistic(pre[j]); // d q_a / d pre_j
            for (int i = 0; i < kIn; ++i) g[j * kIn + i] = up * s[i];
            g[off_b1 + j] = up;
            g[off_w2 + a * kHidden + j] = h[j];
        }
        g[off_b2 + a] = 1.0;
    }
    return rows;
}

std::unique_ptr<QFunction> ClassicalNet::clone() const {
    return std::make_unique<ClassicalNet>(*this);
}

} // namespace qrl::agent
