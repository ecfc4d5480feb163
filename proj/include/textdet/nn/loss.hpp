#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "textdet/nn/tensor.hpp"

namespace textdet {

struct LossResult {
    double loss = 0.0;   // mean over contributing samples
    Tensor grad;         // d loss / d input, zero for non-contributing samples
    int contributing = 0;
};

/// Softmax cross-entropy over logits (n, classes). Labels of -1 mark samples
/// without a label for this task; they contribute no loss and no gradient.
/// Loss is the mean over contributing samples.
inline LossResult softmax_xent(const Tensor& logits, std::span<const int> labels) {
    const int n = logits.n, classes = logits.features();
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("softmax_xent: label count does not match batch");
    LossResult r;
    r.grad = Tensor::matrix(n, classes);
    int valid = 0;
    for (int s = 0; s < n; ++s)
        if (labels[s] >= 0) ++valid;
    if (valid == 0) return r;

    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        int label = labels[s];
        if (label < 0) continue;
        if (label >= classes)
            throw std::invalid_argument("softmax_xent: label " + std::to_string(label) +
                                        " out of range for " + std::to_string(classes) +
                                        " classes");
        const float* z = logits.data.data() + static_cast<std::size_t>(s) * classes;
        float zmax = z[0];
        for (int c = 1; c < classes; ++c) zmax = std::max(zmax, z[c]);
        double sum = 0.0;
        for (int c = 0; c < classes; ++c) sum += std::exp(static_cast<double>(z[c]) - zmax);
        double log_sum = std::log(sum) + zmax;
        total += log_sum - z[label];
        float* g = r.grad.data.data() + static_cast<std::size_t>(s) * classes;
        for (int c = 0; c < classes; ++c) {
            double p = std::exp(static_cast<double>(z[c]) - log_sum);
            g[c] = static_cast<float>((p - (c == label ? 1.0 : 0.0)) / valid);
        }
    }
    r.loss = total / valid;
    r.contributing = valid;
    return r;
}

inline std::vector<double> softmax_probs(const Tensor& logits, int sample) {
    const int classes = logits.features();
    const float* z = logits.data.data() + static_cast<std::size_t>(sample) * classes;
    float zmax = z[0];
    for (int c = 1; c < classes; ++c) zmax = std::max(zmax, z[c]);
    double sum = 0.0;
    std::vector<double> p(classes);
    for (int c = 0; c < classes; ++c) sum += p[c] = std::exp(static_cast<double>(z[c]) - zmax);
    for (double& v : p) v /= sum;
    return p;
}

/// Sum-of-squared-differences mask loss. `valid` marks samples carrying a
/// mask target (empty span means all valid). Loss is the mean per-sample sum
/// over contributing samples, gradient 2*(pred-target)/contributing.
inline LossResult l2_mask_loss(const Tensor& pred, const Tensor& target,
                               std::span<const char> valid = {}) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("l2_mask_loss: shape mismatch, pred " + pred.shape_str() +
                                    " vs target " + target.shape_str());
    LossResult r;
    r.grad = Tensor(pred.n, pred.c, pred.h, pred.w);
    const int per = pred.features();
    int contributing = 0;
    for (int s = 0; s < pred.n; ++s)
        if (valid.empty() || valid[s]) ++contributing;
    if (contributing == 0) return r;

    double total = 0.0;
    for (int s = 0; s < pred.n; ++s) {
        if (!valid.empty() && !valid[s]) continue;
        const float* p = pred.sample(s);
        const float* t = target.sample(s);
        float* g = r.grad.sample(s);
        for (int i = 0; i < per; ++i) {
            double d = static_cast<double>(p[i]) - t[i];
            total += d * d;
            g[i] = static_cast<float>(2.0 * d / contributing);
        }
    }
    r.loss = total / contributing;
    r.contributing = contributing;
    return r;
}

}  // namespace textdet
