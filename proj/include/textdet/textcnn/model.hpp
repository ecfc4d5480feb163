#pragma once

#include <cstdint>

#include "textdet/nn/layers.hpp"
#include "textdet/nn/loss.hpp"

namespace textdet {

/// The multi-task text classifier. Main branch: three convolutions with one
/// 3x3/3 pool after the second, two 1024-d fully connected layers, and the
/// text/non-text and character-label heads. The mask branch leaves the main
/// network after the second convolution's relu (before pooling) and upsamples
/// back to a 32x32 probability map through two transposed convolutions.
///
/// Geometry: 32 -> 24 (9x9) -> 18 (7x7) -> 6 (pool) -> 2 (5x5); mask branch
/// 18 -> 24 (7x7) -> 32 (9x9).
struct TextCnnModel {
    static constexpr int kPatchSide = 32;
    static constexpr int kConv1Ch = 32;
    static constexpr int kConv2Ch = 48;
    static constexpr int kConv3Ch = 64;
    static constexpr int kFcWidth = 1024;

    Conv2d conv1{3, kConv1Ch, 9};
    Conv2d conv2{kConv1Ch, kConv2Ch, 7};
    Conv2d conv3{kConv2Ch, kConv3Ch, 5};
    Linear fc1{kConv3Ch * 2 * 2, kFcWidth};
    Linear fc2{kFcWidth, kFcWidth};
    Linear head_binary{kFcWidth, 2};
    Linear head_label;
    Deconv2d deconv1{kConv2Ch, kConv1Ch, 7};
    Deconv2d deconv2{kConv1Ch, 1, 9};
    int class_count = 62;

    explicit TextCnnModel(int classes = 62)
        : head_label(kFcWidth, classes), class_count(classes) {}

    /// He-initialized weights, zero biases; the deconvolution kernels start
    /// from the corresponding convolution kernels (conv2 directly, conv1
    /// averaged over its three input channels) and are then trained further.
    void init(std::uint64_t seed) {
        Rng rng(seed);
        conv1.init(rng);
        conv2.init(rng);
        conv3.init(rng);
        fc1.init(rng);
        fc2.init(rng);
        head_binary.init(rng);
        head_label.init(rng);
        deconv1.p.weights = conv2.p.weights;  // (48,32,7,7) either way
        for (int oc = 0; oc < kConv1Ch; ++oc)
            for (int y = 0; y < 9; ++y)
                for (int x = 0; x < 9; ++x)
                    deconv2.p.weights.at(oc, 0, y, x) =
                        (conv1.p.weights.at(oc, 0, y, x) + conv1.p.weights.at(oc, 1, y, x) +
                         conv1.p.weights.at(oc, 2, y, x)) /
                        3.f;
    }

    template <typename Fn>
    void for_each_layer(Fn&& fn) {
        fn(conv1.p);
        fn(conv2.p);
        fn(conv3.p);
        fn(fc1.p);
        fn(fc2.p);
        fn(head_binary.p);
        fn(head_label.p);
        fn(deconv1.p);
        fn(deconv2.p);
    }

    void zero_grad() {
        for_each_layer([](LayerParams& p) { p.zero_grad(); });
    }
};

/// All intermediate activations of the main branch, kept for backprop.
struct MainForward {
    Tensor input;
    Tensor r1;            // relu(conv1), (n,32,24,24)
    Tensor r2;            // relu(conv2), (n,48,18,18) -- mask branch input
    MaxPoolResult pool;   // (n,48,6,6)
    Tensor r3;            // relu(conv3), (n,64,2,2)
    Tensor flat;          // (n,256)
    Tensor rf1, rf2;      // relu(fc1), relu(fc2)
    Tensor binary_logits; // (n,2)
    Tensor label_logits;  // (n,classes)
};

inline MainForward forward_main(const TextCnnModel& model, const Tensor& patches) {
    require_shape(patches, patches.n, 3, TextCnnModel::kPatchSide, TextCnnModel::kPatchSide,
                  "forward_main");
    MainForward f;
    f.input = patches;
    f.r1 = relu(model.conv1.forward(f.input));
    f.r2 = relu(model.conv2.forward(f.r1));
    f.pool = maxpool_forward(f.r2, 3, 3);
    f.r3 = relu(model.conv3.forward(f.pool.out));
    f.flat = f.r3;
    f.flat.c = f.flat.features();
    f.flat.h = f.flat.w = 1;
    f.rf1 = relu(model.fc1.forward(f.flat));
    f.rf2 = relu(model.fc2.forward(f.rf1));
    f.binary_logits = model.head_binary.forward(f.rf2);
    f.label_logits = model.head_label.forward(f.rf2);
    return f;
}

struct MaskForward {
    Tensor rd1;   // relu(deconv1), (n,32,24,24)
    Tensor d2;    // deconv2 pre-activation, (n,1,32,32)
    Tensor mask;  // sigmoid(d2)
};

/// Mask branch from the cached conv2 activation.
inline MaskForward forward_mask_branch(const TextCnnModel& model, const Tensor& r2) {
    MaskForward f;
    f.rd1 = relu(model.deconv1.forward(r2));
    f.d2 = model.deconv2.forward(f.rd1);
    f.mask = sigmoid(f.d2);
    return f;
}

/// Full mask inference for a patch batch: 32x32 probability maps in (0,1).
inline Tensor forward_mask(const TextCnnModel& model, const Tensor& patches) {
    require_shape(patches, patches.n, 3, TextCnnModel::kPatchSide, TextCnnModel::kPatchSide,
                  "forward_mask");
    Tensor r1 = relu(model.conv1.forward(patches));
    Tensor r2 = relu(model.conv2.forward(r1));
    return forward_mask_branch(model, r2).mask;
}

/// Probability that each patch in the batch is text (softmax of the binary
/// head's second logit).
inline std::vector<double> text_probabilities(const TextCnnModel& model, const Tensor& patches) {
    MainForward f = forward_main(model, patches);
    std::vector<double> probs(patches.n);
    for (int s = 0; s < patches.n; ++s) probs[s] = softmax_probs(f.binary_logits, s)[1];
    return probs;
}

}  // namespace textdet
