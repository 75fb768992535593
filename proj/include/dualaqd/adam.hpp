#pragma once

#include "dualaqd/mlp.hpp"

namespace dualaqd {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    std::vector<Matrix> m_weights, v_weights;
    std::vector<std::vector<double>> m_biases, v_biases;
    long step = 0;
};

AdamState make_adam(const MlpModel& model, const AdamConfig& config = {});

// Standard bias-corrected Adam update, applied in place. Throws NumericError
// on non-finite gradients; callers add epoch/batch context.
void adam_step(AdamState& state, MlpModel& model, const Gradients& grads);

}  // namespace dualaqd
