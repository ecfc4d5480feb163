#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "textdet/nn/optimizer.hpp"
#include "textdet/textcnn/model.hpp"
#include "textdet/textcnn/sample.hpp"

namespace textdet {

/// Per-stage loss weights and iteration budget. Stage one trains the label
/// and mask tasks jointly on synthetic data; the mask task is then stopped
/// and stage two trains the main text/non-text task with the label task
/// continued at reduced weight.
struct StageSchedule {
    int stage1_iters = 3000;
    int stage2_iters = 7000;
    float lambda_label_stage1 = 1.f;
    float lambda_mask_stage1 = 0.3f;
    float lambda_label_stage2 = 0.3f;

    void validate() const {
        if (stage1_iters < 1) throw std::invalid_argument("stage 1 required: stage1_iters >= 1");
        if (stage2_iters < 0) throw std::invalid_argument("stage2_iters must be >= 0");
        if (lambda_label_stage1 < 0 || lambda_mask_stage1 < 0 || lambda_label_stage2 < 0)
            throw std::invalid_argument("loss weights must be >= 0");
    }
};

struct MultiTaskLosses {
    double total = 0.0;
    double binary = 0.0;
    double label = 0.0;
    double mask = 0.0;
};

namespace detail {

struct BatchTargets {
    std::vector<int> binary_labels;  // -1 where absent
    std::vector<int> char_labels;
    Tensor masks;                    // (n,1,32,32)
    std::vector<char> mask_valid;
    int with_mask = 0;

    BatchTargets(const std::vector<MultiTaskSample>& set, std::span<const int> idx)
        : masks(static_cast<int>(idx.size()), 1, 32, 32) {
        binary_labels.reserve(idx.size());
        char_labels.reserve(idx.size());
        mask_valid.reserve(idx.size());
        for (std::size_t s = 0; s < idx.size(); ++s) {
            const MultiTaskSample& sample = set[idx[s]];
            binary_labels.push_back(sample.binary_label);
            char_labels.push_back(sample.char_label);
            mask_valid.push_back(sample.has_mask() ? 1 : 0);
            if (sample.has_mask()) {
                std::copy(sample.mask.begin(), sample.mask.end(),
                          masks.sample(static_cast<int>(s)));
                ++with_mask;
            }
        }
    }
};

inline void scale(Tensor& t, float f) {
    for (float& v : t.data) v *= f;
}

}  // namespace detail

/// Weighted multi-task loss for one batch; optionally accumulates gradients
/// into the model. Stage 1 trains label+mask (no main task); stage 2 trains
/// binary+label (mask stopped). Samples lacking an optional label contribute
/// zero to that task; a stage-2 sample without a binary label is an error.
inline MultiTaskLosses multitask_loss(TextCnnModel& model,
                                      const std::vector<MultiTaskSample>& set,
                                      std::span<const int> idx, int stage,
                                      const StageSchedule& schedule, bool with_grad) {
    if (stage != 1 && stage != 2) throw std::invalid_argument("stage must be 1 or 2");
    detail::BatchTargets targets(set, idx);
    if (stage == 2)
        for (int b : targets.binary_labels)
            if (b < 0)
                throw std::invalid_argument("stage-2 sample lacks a binary label");

    Tensor patches = make_patch_batch(set, idx);
    MainForward f = forward_main(model, patches);

    const float lambda_label =
        stage == 1 ? schedule.lambda_label_stage1 : schedule.lambda_label_stage2;
    const float lambda_mask = stage == 1 ? schedule.lambda_mask_stage1 : 0.f;

    MultiTaskLosses losses;

    LossResult label_loss = softmax_xent(f.label_logits, targets.char_labels);
    losses.label = label_loss.loss;
    losses.total += lambda_label * label_loss.loss;

    LossResult binary_loss;
    if (stage == 2) {
        binary_loss = softmax_xent(f.binary_logits, targets.binary_labels);
        losses.binary = binary_loss.loss;
        losses.total += binary_loss.loss;  // the main task carries no lambda
    }

    MaskForward mf;
    LossResult mask_loss;
    const bool mask_active = stage == 1 && lambda_mask > 0.f && targets.with_mask > 0;
    if (mask_active) {
        mf = forward_mask_branch(model, f.r2);
        mask_loss = l2_mask_loss(mf.mask, targets.masks, targets.mask_valid);
        losses.mask = mask_loss.loss;
        losses.total += lambda_mask * mask_loss.loss;
    }

    if (!with_grad) return losses;

    // Heads down to the shared trunk.
    Tensor g_rf2(f.rf2.n, f.rf2.c, f.rf2.h, f.rf2.w);
    if (label_loss.contributing > 0 && lambda_label > 0.f) {
        detail::scale(label_loss.grad, lambda_label);
        g_rf2 = model.head_label.backward(f.rf2, label_loss.grad);
    }
    if (stage == 2) {
        Tensor g = model.head_binary.backward(f.rf2, binary_loss.grad);
        for (std::size_t i = 0; i < g_rf2.data.size(); ++i) g_rf2.data[i] += g.data[i];
    }
    Tensor g_f2 = relu_backward(f.rf2, g_rf2);
    Tensor g_rf1 = model.fc2.backward(f.rf1, g_f2);
    Tensor g_f1 = relu_backward(f.rf1, g_rf1);
    Tensor g_flat = model.fc1.backward(f.flat, g_f1);
    Tensor g_r3 = g_flat;
    g_r3.c = f.r3.c;
    g_r3.h = f.r3.h;
    g_r3.w = f.r3.w;
    Tensor g_conv3 = relu_backward(f.r3, g_r3);
    Tensor g_pool = model.conv3.backward(f.pool.out, g_conv3);
    Tensor g_r2 = maxpool_backward(f.pool, f.r2, g_pool);

    // Mask branch joins the trunk gradient at r2.
    if (mask_active) {
        detail::scale(mask_loss.grad, lambda_mask);
        Tensor g_d2 = sigmoid_backward(mf.mask, mask_loss.grad);
        Tensor g_rd1 = model.deconv2.backward(mf.rd1, g_d2);
        Tensor g_d1 = relu_backward(mf.rd1, g_rd1);
        Tensor g_branch = model.deconv1.backward(f.r2, g_d1);
        for (std::size_t i = 0; i < g_r2.data.size(); ++i) g_r2.data[i] += g_branch.data[i];
    }

    Tensor g_conv2 = relu_backward(f.r2, g_r2);
    Tensor g_r1 = model.conv2.backward(f.r1, g_conv2);
    Tensor g_conv1 = relu_backward(f.r1, g_r1);
    model.conv1.backward(f.input, g_conv1);
    return losses;
}

struct CurveRecord {
    int iteration = 0;   // global across both stages
    std::string task;    // "binary" | "label" | "mask" | "total"
    double loss = 0.0;
};

struct TrainResult {
    std::vector<CurveRecord> curves;
    int diverged_at = -1;  // global iteration where a non-finite loss stopped training
};

/// Called at every epoch boundary of either stage.
using EpochHook = std::function<void(int stage, int epoch, int iteration, const TextCnnModel&)>;

namespace detail {

inline void shuffle_indices(std::vector<int>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_below(i)]);
}

}  // namespace detail

/// Two-stage schedule: stage 1 on the synthetic (mask+label) set, stage 2 on
/// the binary set with the label task continued where labels exist. The
/// learning rate decays by 10x at two thirds of the combined budget. A
/// non-finite batch loss stops training before the offending update so the
/// returned model is always finite.
inline TrainResult train_staged(TextCnnModel& model,
                                const std::vector<MultiTaskSample>& synthetic_set,
                                const std::vector<MultiTaskSample>& binary_set,
                                const StageSchedule& schedule, const TrainConfig& cfg,
                                const EpochHook& epoch_hook = {}) {
    schedule.validate();
    cfg.validate();
    if (synthetic_set.empty()) throw std::invalid_argument("train_staged: empty synthetic set");
    if (schedule.stage2_iters > 0 && binary_set.empty())
        throw std::invalid_argument("train_staged: empty binary set");

    TrainResult result;
    const int total_iters = schedule.stage1_iters + schedule.stage2_iters;
    const int decay_at = total_iters * 2 / 3;
    Rng shuffle_rng(cfg.seed ^ 0x51A9F7ull);
    int global_iter = 0;

    for (int stage = 1; stage <= 2; ++stage) {
        const std::vector<MultiTaskSample>& set = stage == 1 ? synthetic_set : binary_set;
        const int iters = stage == 1 ? schedule.stage1_iters : schedule.stage2_iters;
        if (iters == 0) continue;

        std::vector<int> order(set.size());
        std::iota(order.begin(), order.end(), 0);
        detail::shuffle_indices(order, shuffle_rng);
        std::size_t cursor = 0;
        int epoch = 0;

        for (int it = 0; it < iters; ++it, ++global_iter) {
            if (cursor > 0 && cursor + cfg.batch_size > order.size()) {
                ++epoch;
                if (epoch_hook) epoch_hook(stage, epoch, global_iter, model);
                detail::shuffle_indices(order, shuffle_rng);
                cursor = 0;
            }
            std::span<const int> batch(
                order.data() + cursor,
                std::min<std::size_t>(cfg.batch_size, order.size() - cursor));
            cursor += batch.size();

            model.zero_grad();
            MultiTaskLosses losses =
                multitask_loss(model, set, batch, stage, schedule, /*with_grad=*/true);

            result.curves.push_back({global_iter, "total", losses.total});
            result.curves.push_back({global_iter, "label", losses.label});
            if (stage == 1) result.curves.push_back({global_iter, "mask", losses.mask});
            if (stage == 2) result.curves.push_back({global_iter, "binary", losses.binary});

            if (!std::isfinite(losses.total)) {
                result.diverged_at = global_iter;
                return result;  // parameters were not touched by this batch
            }

            float lr = global_iter >= decay_at ? cfg.learning_rate * 0.1f : cfg.learning_rate;
            model.for_each_layer([&](LayerParams& p) { sgd_step(p, cfg, lr); });
        }
        if (epoch_hook) epoch_hook(stage, epoch + 1, global_iter, model);
    }
    return result;
}

enum class EvalTask { binary, label, mask };

/// Error rate (binary/label) or mean per-sample L2 mask distance over the
/// samples that carry the task's supervision.
inline double evaluate(const TextCnnModel& model, const std::vector<MultiTaskSample>& set,
                       EvalTask task, int batch_size = 64) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const MultiTaskSample& s = set[i];
        bool has = task == EvalTask::binary ? s.binary_label >= 0
                   : task == EvalTask::label ? s.char_label >= 0
                                             : s.has_mask();
        if (has) idx.push_back(static_cast<int>(i));
    }
    if (idx.empty()) throw std::invalid_argument("evaluate: no sample carries the requested task");

    double total = 0.0;
    for (std::size_t start = 0; start < idx.size(); start += batch_size) {
        std::span<const int> chunk(idx.data() + start,
                                   std::min<std::size_t>(batch_size, idx.size() - start));
        Tensor patches = make_patch_batch(set, chunk);
        if (task == EvalTask::mask) {
            Tensor pred = forward_mask(model, patches);
            for (std::size_t s = 0; s < chunk.size(); ++s) {
                const MultiTaskSample& sample = set[chunk[s]];
                const float* p = pred.sample(static_cast<int>(s));
                double acc = 0.0;
                for (int i = 0; i < 32 * 32; ++i) {
                    double d = static_cast<double>(p[i]) - sample.mask[i];
                    acc += d * d;
                }
                total += acc;
            }
        } else {
            MainForward f = forward_main(model, patches);
            const Tensor& logits = task == EvalTask::binary ? f.binary_logits : f.label_logits;
            const int classes = logits.features();
            for (std::size_t s = 0; s < chunk.size(); ++s) {
                const float* z = logits.data.data() + s * classes;
                int argmax = 0;
                for (int c = 1; c < classes; ++c)
                    if (z[c] > z[argmax]) argmax = c;
                const MultiTaskSample& sample = set[chunk[s]];
                int truth = task == EvalTask::binary ? sample.binary_label : sample.char_label;
                total += argmax != truth ? 1.0 : 0.0;
            }
        }
    }
    return total / idx.size();
}

}  // namespace textdet
