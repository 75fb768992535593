#include "dualaqd/adam.hpp"

#include <cmath>

namespace dualaqd {

AdamState make_adam(const MlpModel& model, const AdamConfig& config) {
    AdamState state;
    state.config = config;
    for (std::size_t k = 0; k < model.num_layers(); ++k) {
        state.m_weights.emplace_back(model.weights[k].rows(), model.weights[k].cols());
        state.v_weights.emplace_back(model.weights[k].rows(), model.weights[k].cols());
        state.m_biases.emplace_back(model.biases[k].size(), 0.0);
        state.v_biases.emplace_back(model.biases[k].size(), 0.0);
    }
    return state;
}

namespace {

void update_span(double* params, double* m, double* v, const double* g, std::size_t n,
                 const AdamConfig& cfg, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(g[i])) throw NumericError("adam_step: non-finite gradient");
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

}  // namespace

void adam_step(AdamState& state, MlpModel& model, const Gradients& grads) {
    if (grads.weights.size() != model.num_layers() ||
        grads.biases.size() != model.num_layers())
        throw ContractViolation("adam_step: gradient layer count mismatch");
    for (std::size_t k = 0; k < model.num_layers(); ++k) {
        if (!grads.weights[k].same_shape(model.weights[k]) ||
            grads.biases[k].size() != model.biases[k].size())
            throw ContractViolation("adam_step: gradient shape mismatch at layer " +
                                    std::to_string(k));
    }

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.config.beta2, static_cast<double>(state.step));

    for (std::size_t k = 0; k < model.num_layers(); ++k) {
        update_span(model.weights[k].data().data(), state.m_weights[k].data().data(),
                    state.v_weights[k].data().data(), grads.weights[k].data().data(),
                    model.weights[k].data().size(), state.config, bc1, bc2);
        update_span(model.biases[k].data(), state.m_biases[k].data(),
                    state.v_biases[k].data(), grads.biases[k].data(),
                    model.biases[k].size(), state.config, bc1, bc2);
    }
}

}  // namespace dualaqd
