#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dualaqd/matrix.hpp"

namespace dualaqd {

enum class Activation { relu, linear };

// Dense feed-forward network: linear output layer, configurable hidden
// nonlinearity, inverted dropout on hidden layers.
struct MlpModel {
    std::vector<std::size_t> layer_dims;  // input, hidden..., output
    std::vector<Matrix> weights;          // weights[k]: layer_dims[k] x layer_dims[k+1]
    std::vector<std::vector<double>> biases;
    Activation hidden_activation = Activation::relu;
    double dropout_rate = 0.0;

    std::size_t num_layers() const { return weights.size(); }
    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
};

// He-uniform initialization (fan-in scaled), biases zero.
MlpModel make_mlp(const std::vector<std::size_t>& layer_dims, double dropout_rate,
                  std::uint64_t seed, Activation hidden_activation = Activation::relu);

// Everything the backward pass needs from a forward pass.
struct ForwardTrace {
    Matrix input;
    std::vector<Matrix> pre_activations;  // z_k per layer
    std::vector<Matrix> layer_inputs;     // input fed to layer k (post act+dropout of k-1)
    std::vector<Matrix> dropout_masks;    // one per hidden layer; all-ones when inactive
    bool dropout_active = false;
    std::size_t batch_size = 0;
};

// Runs the network on a batch (rows = samples). `rng` is only consumed when
// dropout is active with a nonzero rate; masks are Bernoulli(1 - rate)
// scaled by 1/(1 - rate).
Matrix forward(const MlpModel& model, const Matrix& x, bool dropout_active,
               std::mt19937_64* rng = nullptr, ForwardTrace* trace = nullptr);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Exact reverse-mode gradients for every weight and bias; reuses the dropout
// masks recorded in the trace.
Gradients backward(const MlpModel& model, const ForwardTrace& trace,
                   const Matrix& output_grad);

// Copies all non-output layers of `source` into `target`; the output layer of
// `target` keeps its own initialization. Hidden dims must match.
void transfer_weights(const MlpModel& source, MlpModel& target);

}  // namespace dualaqd
