#include "dualaqd/mlp.hpp"

#include <cmath>
#include <sstream>

namespace dualaqd {

namespace {

void check_model(const MlpModel& model) {
    if (model.layer_dims.size() < 2)
        throw ConfigError("MlpModel needs at least an input and an output layer");
    if (model.weights.size() != model.layer_dims.size() - 1 ||
        model.biases.size() != model.weights.size())
        throw ConfigError("MlpModel: weight/bias count does not match layer_dims");
    if (!(model.dropout_rate >= 0.0 && model.dropout_rate < 1.0))
        throw ConfigError("MlpModel: dropout_rate must lie in [0, 1)");
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        if (model.weights[k].rows() != model.layer_dims[k] ||
            model.weights[k].cols() != model.layer_dims[k + 1] ||
            model.biases[k].size() != model.layer_dims[k + 1]) {
            std::ostringstream oss;
            oss << "MlpModel: layer " << k << " shapes do not chain ("
                << model.weights[k].rows() << "x" << model.weights[k].cols()
                << " for " << model.layer_dims[k] << "->" << model.layer_dims[k + 1] << ")";
            throw ConfigError(oss.str());
        }
    }
}

}  // namespace

MlpModel make_mlp(const std::vector<std::size_t>& layer_dims, double dropout_rate,
                  std::uint64_t seed, Activation hidden_activation) {
    MlpModel model;
    model.layer_dims = layer_dims;
    model.hidden_activation = hidden_activation;
    model.dropout_rate = dropout_rate;
    if (layer_dims.size() < 2) throw ConfigError("make_mlp: need at least two layer dims");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw ConfigError("make_mlp: dropout_rate must lie in [0, 1)");

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
        const std::size_t fan_in = layer_dims[k];
        const std::size_t fan_out = layer_dims[k + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Matrix w(fan_in, fan_out);
        for (auto& v : w.data()) v = dist(rng);
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(fan_out, 0.0);
    }
    check_model(model);
    return model;
}

Matrix forward(const MlpModel& model, const Matrix& x, bool dropout_active,
               std::mt19937_64* rng, ForwardTrace* trace) {
    check_model(model);
    if (x.cols() != model.input_dim()) {
        std::ostringstream oss;
        oss << "forward: input width " << x.cols() << " does not match layer width "
            << model.input_dim();
        throw ConfigError(oss.str());
    }
    const bool use_dropout = dropout_active && model.dropout_rate > 0.0;
    if (use_dropout && rng == nullptr)
        throw ContractViolation("forward: dropout active but no RNG stream supplied");

    const std::size_t num_layers = model.num_layers();
    if (trace) {
        *trace = ForwardTrace{};
        trace->input = x;
        trace->dropout_active = dropout_active;
        trace->batch_size = x.rows();
        trace->pre_activations.reserve(num_layers);
        trace->layer_inputs.reserve(num_layers);
        trace->dropout_masks.reserve(num_layers - 1);
    }

    const double keep = 1.0 - model.dropout_rate;
    std::bernoulli_distribution keep_dist(keep);

    Matrix h = x;
    for (std::size_t k = 0; k < num_layers; ++k) {
        if (trace) trace->layer_inputs.push_back(h);
        Matrix z;
        matmul(h, model.weights[k], z);
        for (std::size_t i = 0; i < z.rows(); ++i) {
            double* row = z.row_ptr(i);
            for (std::size_t j = 0; j < z.cols(); ++j) row[j] += model.biases[k][j];
        }
        if (trace) trace->pre_activations.push_back(z);

        const bool is_hidden = (k + 1 < num_layers);
        if (!is_hidden) {
            h = std::move(z);  // linear output layer
            break;
        }

        Matrix a = std::move(z);
        if (model.hidden_activation == Activation::relu) {
            for (auto& v : a.data()) v = v > 0.0 ? v : 0.0;
        }
        Matrix mask(a.rows(), a.cols(), 1.0);
        if (use_dropout) {
            const double scale = 1.0 / keep;
            for (auto& m : mask.data()) m = keep_dist(*rng) ? scale : 0.0;
            for (std::size_t idx = 0; idx < a.data().size(); ++idx)
                a.data()[idx] *= mask.data()[idx];
        }
        if (trace) trace->dropout_masks.push_back(std::move(mask));
        h = std::move(a);
    }
    return h;
}

Gradients backward(const MlpModel& model, const ForwardTrace& trace,
                   const Matrix& output_grad) {
    check_model(model);
    const std::size_t num_layers = model.num_layers();
    if (trace.pre_activations.size() != num_layers ||
        trace.layer_inputs.size() != num_layers ||
        trace.dropout_masks.size() != num_layers - 1)
        throw ContractViolation("backward: trace does not match model layer count");
    if (output_grad.rows() != trace.batch_size || output_grad.cols() != model.output_dim())
        throw ContractViolation("backward: output gradient shape mismatch");

    Gradients grads;
    grads.weights.resize(num_layers);
    grads.biases.resize(num_layers);

    Matrix delta = output_grad;
    for (std::size_t k = num_layers; k-- > 0;) {
        matmul_at_b(trace.layer_inputs[k], delta, grads.weights[k]);
        std::vector<double> db(model.layer_dims[k + 1], 0.0);
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            const double* row = delta.row_ptr(i);
            for (std::size_t j = 0; j < delta.cols(); ++j) db[j] += row[j];
        }
        grads.biases[k] = std::move(db);

        if (k == 0) break;
        Matrix prev;
        matmul_a_bt(delta, model.weights[k], prev);
        // back through dropout and the hidden nonlinearity of layer k-1
        const Matrix& mask = trace.dropout_masks[k - 1];
        const Matrix& z = trace.pre_activations[k - 1];
        for (std::size_t idx = 0; idx < prev.data().size(); ++idx) {
            double g = prev.data()[idx] * mask.data()[idx];
            if (model.hidden_activation == Activation::relu && z.data()[idx] <= 0.0) g = 0.0;
            prev.data()[idx] = g;
        }
        delta = std::move(prev);
    }
    return grads;
}

void transfer_weights(const MlpModel& source, MlpModel& target) {
    if (source.layer_dims.size() != target.layer_dims.size())
        throw ConfigError("transfer_weights: layer counts differ");
    for (std::size_t k = 0; k + 1 < source.layer_dims.size(); ++k) {
        if (source.layer_dims[k] != target.layer_dims[k])
            throw ConfigError("transfer_weights: hidden architecture differs at layer " +
                              std::to_string(k));
    }
    const std::size_t last = source.num_layers() - 1;
    for (std::size_t k = 0; k < last; ++k) {
        target.weights[k] = source.weights[k];
        target.biases[k] = source.biases[k];
    }
}

}  // namespace dualaqd
