#pragma once

#include <cstdint>
#include <stdexcept>

#include "textdet/nn/layers.hpp"

namespace textdet {

struct TrainConfig {
    float learning_rate = 0.01f;
    float momentum = 0.9f;
    float weight_decay = 5e-4f;
    int batch_size = 8;
    std::uint64_t seed = 1;

    void validate() const {
        if (learning_rate <= 0.f) throw std::invalid_argument("learning_rate must be > 0");
        if (momentum < 0.f || momentum >= 1.f)
            throw std::invalid_argument("momentum must be in [0,1)");
        if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    }
};

/// Momentum SGD with L2 weight decay:
///   v <- momentum*v - lr*(g + decay*w);  w <- w + v
inline void sgd_step(LayerParams& p, const TrainConfig& cfg, float lr_override = -1.f) {
    const float lr = lr_override > 0.f ? lr_override : cfg.learning_rate;
    auto update = [&](Tensor& w, Tensor& g, Tensor& v, float decay) {
        for (std::size_t i = 0; i < w.data.size(); ++i) {
            v.data[i] = cfg.momentum * v.data[i] - lr * (g.data[i] + decay * w.data[i]);
            w.data[i] += v.data[i];
        }
    };
    update(p.weights, p.grad_weights, p.vel_weights, cfg.weight_decay);
    update(p.biases, p.grad_biases, p.vel_biases, 0.f);  // biases are not decayed
}

}  // namespace textdet
