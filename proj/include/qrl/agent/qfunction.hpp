#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "qrl/rng.hpp"
#include "qrl/vqc/model.hpp"

namespace qrl::agent {

using Obs = std::array<double, 4>;

// Trainable state-action value function over a flat parameter vector. The
// flat layout is whatever the implementation documents; the trainer only
// needs get/set round-trips and gradients in the same order.
class QFunction {
public:
    virtual ~QFunction() = default;

    virtual int n_actions() const = 0;
    virtual std::size_t n_params() const = 0;
    virtual std::vector<double> get_params() const = 0;
    virtual void set_params(std::span<const double> p) = 0;

    // exact evaluation
    virtual std::vector<double> q_values(const Obs& s) const = 0;

    // shot-sampled evaluation; defaults to exact for models without a
    // measurement step
    virtual std::vector<double> q_values_sampled(const Obs& s, int shots, Rng& rng) const;

    // one row per action, d q_a / d params, exact
    virtual std::vector<std::vector<double>> q_gradient(const Obs& s) const = 0;

    virtual std::unique_ptr<QFunction> clone() const = 0;
};

// Quantum-circuit Q-function. Flat parameter layout:
// [theta | pooling params (if any) | extraction weights].
class VqcQFunction : public QFunction {
public:
    explicit VqcQFunction(vqc::VqcModel model);

    int n_actions() const override { return model_.n_actions(); }
    std::size_t n_params() const override;
    std::vector<double> get_params() const override;
    void set_params(std::span<const double> p) override;
    std::vector<double> q_values(const Obs& s) const override;
    std::vector<double> q_values_sampled(const Obs& s, int shots, Rng& rng) const override;
    std::vector<std::vector<double>> q_gradient(const Obs& s) const override;
    std::unique_ptr<QFunction> clone() const override;

    const vqc::VqcModel& model() const { return model_; }

private:
    vqc::VqcModel model_;
};

// Dense 4 -> 8 -> 2 net with biases: 58 parameters, the size budget the
// quantum models are compared against. Hidden units use softplus, a smooth
// stand-in for a rectifier that keeps every gradient check clean; the output
// layer is linear. Flat layout: [W1 row-major | b1 | W2 row-major | b2].
class ClassicalNet : public QFunction {
public:
    static constexpr int kIn = 4;
    static constexpr int kHidden = 8;
    static constexpr int kOut = 2;
    static constexpr std::size_t kParamCount =
        static_cast<std::size_t>(kIn * kHidden + kHidden + kHidden * kOut + kOut);

    ClassicalNet();                      // all weights zero
    static ClassicalNet init(Rng& rng);  // uniform fan-in/fan-out scaled weights, zero biases

    int n_actions() const override { return kOut; }
    std::size_t n_params() const override { return kParamCount; }
    std::vector<double> get_params() const override { return params_; }
    void set_params(std::span<const double> p) override;
    std::vector<double> q_values(const Obs& s) const override;
    std::vector<std::vector<double>> q_gradient(const Obs& s) const override;
    std::unique_ptr<QFunction> clone() const override;

private:
    std::vector<double> params_;
};

} // namespace qrl::agent
