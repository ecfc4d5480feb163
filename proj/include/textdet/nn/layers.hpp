#pragma once

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "textdet/core/rng.hpp"
#include "textdet/nn/tensor.hpp"

namespace textdet {

/// Weights plus gradient and momentum accumulators of identical shapes.
struct LayerParams {
    Tensor weights, biases;
    Tensor grad_weights, grad_biases;
    Tensor vel_weights, vel_biases;

    void zero_grad() {
        grad_weights.fill(0.f);
        grad_biases.fill(0.f);
    }
};

namespace detail {

inline void init_layer(LayerParams& p, Tensor w, Tensor b) {
    p.grad_weights = p.vel_weights = w;
    p.grad_weights.fill(0.f);
    p.vel_weights.fill(0.f);
    p.grad_biases = p.vel_biases = b;
    p.grad_biases.fill(0.f);
    p.vel_biases.fill(0.f);
    p.weights = std::move(w);
    p.biases = std::move(b);
}

/// He-style fan-in scaled init, zero biases.
inline void he_init(Tensor& w, int fan_in, Rng& rng) {
    float scale = std::sqrt(2.f / static_cast<float>(fan_in));
    for (float& v : w.data) v = static_cast<float>(rng.next_normal()) * scale;
}

inline void sgemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a,
                  int lda, const float* b, int ldb, float beta, float* c, int ldc) {
    cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

// cols has shape (channels*k*k, out_h*out_w): row (c,dy,dx), column (y,x).
inline void im2col(const float* img, int channels, int height, int width, int k, float* cols) {
    const int oh = height - k + 1, ow = width - k + 1;
    for (int c = 0; c < channels; ++c)
        for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx) {
                float* dst = cols + ((static_cast<std::size_t>(c) * k + dy) * k + dx) *
                                        (static_cast<std::size_t>(oh) * ow);
                const float* src = img + (static_cast<std::size_t>(c) * height + dy) * width + dx;
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) *dst++ = src[y * width + x];
            }
}

// Adjoint of im2col: scatters columns back into the image, accumulating.
inline void col2im_add(const float* cols, int channels, int height, int width, int k, float* img) {
    const int oh = height - k + 1, ow = width - k + 1;
    for (int c = 0; c < channels; ++c)
        for (int dy = 0; dy < k; ++dy)
            for (int dx = 0; dx < k; ++dx) {
                const float* src = cols + ((static_cast<std::size_t>(c) * k + dy) * k + dx) *
                                              (static_cast<std::size_t>(oh) * ow);
                float* dst = img + (static_cast<std::size_t>(c) * height + dy) * width + dx;
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) dst[y * width + x] += *src++;
            }
}

}  // namespace detail

/// Valid (unpadded) stride-1 cross-correlation, weights (out_ch, in_ch, k, k).
struct Conv2d {
    int in_ch = 0, out_ch = 0, k = 0;
    LayerParams p;

    Conv2d() = default;
    Conv2d(int in_channels, int out_channels, int kernel)
        : in_ch(in_channels), out_ch(out_channels), k(kernel) {
        detail::init_layer(p, Tensor(out_channels, in_channels, kernel, kernel),
                           Tensor::vec(out_channels));
    }

    void init(Rng& rng) { detail::he_init(p.weights, in_ch * k * k, rng); }

    Tensor forward(const Tensor& in) const {
        if (in.c != in_ch || in.h < k || in.w < k)
            throw std::invalid_argument("conv forward: expected (*, " + std::to_string(in_ch) +
                                        ", >=" + std::to_string(k) + ", >=" + std::to_string(k) +
                                        "), got " + in.shape_str());
        const int oh = in.h - k + 1, ow = in.w - k + 1;
        Tensor out(in.n, out_ch, oh, ow);
        std::vector<float> cols(static_cast<std::size_t>(in_ch) * k * k * oh * ow);
        for (int s = 0; s < in.n; ++s) {
            detail::im2col(in.sample(s), in_ch, in.h, in.w, k, cols.data());
            detail::sgemm(false, false, out_ch, oh * ow, in_ch * k * k, 1.f, p.weights.data.data(),
                          in_ch * k * k, cols.data(), oh * ow, 0.f, out.sample(s), oh * ow);
        }
        for (int s = 0; s < in.n; ++s)
            for (int oc = 0; oc < out_ch; ++oc) {
                float b = p.biases.data[oc];
                float* dst = out.sample(s) + static_cast<std::size_t>(oc) * oh * ow;
                for (int i = 0; i < oh * ow; ++i) dst[i] += b;
            }
        return out;
    }

    /// Accumulates parameter gradients, returns the input gradient.
    Tensor backward(const Tensor& in, const Tensor& gout) {
        const int oh = in.h - k + 1, ow = in.w - k + 1;
        Tensor gin(in.n, in.c, in.h, in.w);
        std::vector<float> cols(static_cast<std::size_t>(in_ch) * k * k * oh * ow);
        for (int s = 0; s < in.n; ++s) {
            detail::im2col(in.sample(s), in_ch, in.h, in.w, k, cols.data());
            // dW += gout_s * cols^T
            detail::sgemm(false, true, out_ch, in_ch * k * k, oh * ow, 1.f, gout.sample(s), oh * ow,
                          cols.data(), oh * ow, 1.f, p.grad_weights.data.data(), in_ch * k * k);
            // dIn = col2im(W^T * gout_s)
            detail::sgemm(true, false, in_ch * k * k, oh * ow, out_ch, 1.f, p.weights.data.data(),
                          in_ch * k * k, gout.sample(s), oh * ow, 0.f, cols.data(), oh * ow);
            detail::col2im_add(cols.data(), in_ch, in.h, in.w, k, gin.sample(s));
            for (int oc = 0; oc < out_ch; ++oc) {
                const float* g = gout.sample(s) + static_cast<std::size_t>(oc) * oh * ow;
                float acc = 0.f;
                for (int i = 0; i < oh * ow; ++i) acc += g[i];
                p.grad_biases.data[oc] += acc;
            }
        }
        return gin;
    }
};

/// Transposed convolution, weights (in_ch, out_ch, k, k); the adjoint of
/// Conv2d with the same kernel buffer.
struct Deconv2d {
    int in_ch = 0, out_ch = 0, k = 0;
    LayerParams p;

    Deconv2d() = default;
    Deconv2d(int in_channels, int out_channels, int kernel)
        : in_ch(in_channels), out_ch(out_channels), k(kernel) {
        detail::init_layer(p, Tensor(in_channels, out_channels, kernel, kernel),
                           Tensor::vec(out_channels));
    }

    void init(Rng& rng) { detail::he_init(p.weights, in_ch * k * k, rng); }

    Tensor forward(const Tensor& in) const {
        if (in.c != in_ch)
            throw std::invalid_argument("deconv forward: expected " + std::to_string(in_ch) +
                                        " channels, got " + in.shape_str());
        const int oh = in.h + k - 1, ow = in.w + k - 1;
        Tensor out(in.n, out_ch, oh, ow);
        std::vector<float> cols(static_cast<std::size_t>(out_ch) * k * k * in.h * in.w);
        for (int s = 0; s < in.n; ++s) {
            // cols = W^T * in_s, then scatter into the enlarged output
            detail::sgemm(true, false, out_ch * k * k, in.h * in.w, in_ch, 1.f,
                          p.weights.data.data(), out_ch * k * k, in.sample(s), in.h * in.w, 0.f,
                          cols.data(), in.h * in.w);
            detail::col2im_add(cols.data(), out_ch, oh, ow, k, out.sample(s));
        }
        for (int s = 0; s < in.n; ++s)
            for (int oc = 0; oc < out_ch; ++oc) {
                float b = p.biases.data[oc];
                float* dst = out.sample(s) + static_cast<std::size_t>(oc) * oh * ow;
                for (int i = 0; i < oh * ow; ++i) dst[i] += b;
            }
        return out;
    }

    Tensor backward(const Tensor& in, const Tensor& gout) {
        const int oh = in.h + k - 1, ow = in.w + k - 1;
        Tensor gin(in.n, in.c, in.h, in.w);
        std::vector<float> cols(static_cast<std::size_t>(out_ch) * k * k * in.h * in.w);
        for (int s = 0; s < in.n; ++s) {
            detail::im2col(gout.sample(s), out_ch, oh, ow, k, cols.data());
            // dIn = W * im2col(gout)
            detail::sgemm(false, false, in_ch, in.h * in.w, out_ch * k * k, 1.f,
                          p.weights.data.data(), out_ch * k * k, cols.data(), in.h * in.w, 0.f,
                          gin.sample(s), in.h * in.w);
            // dW += in_s * im2col(gout)^T
            detail::sgemm(false, true, in_ch, out_ch * k * k, in.h * in.w, 1.f, in.sample(s),
                          in.h * in.w, cols.data(), in.h * in.w, 1.f, p.grad_weights.data.data(),
                          out_ch * k * k);
            for (int oc = 0; oc < out_ch; ++oc) {
                const float* g = gout.sample(s) + static_cast<std::size_t>(oc) * oh * ow;
                float acc = 0.f;
                for (int i = 0; i < oh * ow; ++i) acc += g[i];
                p.grad_biases.data[oc] += acc;
            }
        }
        return gin;
    }
};

/// Fully connected layer over flattened samples, weights (out, in).
struct Linear {
    int in_features = 0, out_features = 0;
    LayerParams p;

    Linear() = default;
    Linear(int in_f, int out_f) : in_features(in_f), out_features(out_f) {
        detail::init_layer(p, Tensor::matrix(out_f, in_f), Tensor::vec(out_f));
    }

    void init(Rng& rng) { detail::he_init(p.weights, in_features, rng); }

    Tensor forward(const Tensor& in) const {
        if (in.features() != in_features)
            throw std::invalid_argument("linear forward: expected " + std::to_string(in_features) +
                                        " features, got " + in.shape_str());
        Tensor out = Tensor::matrix(in.n, out_features);
        detail::sgemm(false, true, in.n, out_features, in_features, 1.f, in.data.data(),
                      in_features, p.weights.data.data(), in_features, 0.f, out.data.data(),
                      out_features);
        for (int s = 0; s < in.n; ++s)
            for (int o = 0; o < out_features; ++o) out.data[s * out_features + o] += p.biases.data[o];
        return out;
    }

    Tensor backward(const Tensor& in, const Tensor& gout) {
        Tensor gin(in.n, in.c, in.h, in.w);
        // dW += gout^T * in
        detail::sgemm(true, false, out_features, in_features, in.n, 1.f, gout.data.data(),
                      out_features, in.data.data(), in_features, 1.f, p.grad_weights.data.data(),
                      in_features);
        // dIn = gout * W
        detail::sgemm(false, false, in.n, in_features, out_features, 1.f, gout.data.data(),
                      out_features, p.weights.data.data(), in_features, 0.f, gin.data.data(),
                      in_features);
        for (int s = 0; s < in.n; ++s)
            for (int o = 0; o < out_features; ++o)
                p.grad_biases.data[o] += gout.data[s * out_features + o];
        return gin;
    }
};

// ---------------------------------------------------------------------------
// Stateless activations and pooling.
// ---------------------------------------------------------------------------

inline Tensor relu(const Tensor& in) {
    Tensor out = in;
    for (float& v : out.data) v = std::max(0.f, v);
    return out;
}

/// Gradient through relu given the forward output.
inline Tensor relu_backward(const Tensor& out, const Tensor& gout) {
    Tensor gin = gout;
    for (std::size_t i = 0; i < gin.data.size(); ++i)
        if (out.data[i] <= 0.f) gin.data[i] = 0.f;
    return gin;
}

inline Tensor sigmoid(const Tensor& in) {
    Tensor out = in;
    for (float& v : out.data) {
        if (v >= 0.f)
            v = 1.f / (1.f + std::exp(-v));
        else {
            float e = std::exp(v);
            v = e / (1.f + e);
        }
    }
    return out;
}

inline Tensor sigmoid_backward(const Tensor& out, const Tensor& gout) {
    Tensor gin = gout;
    for (std::size_t i = 0; i < gin.data.size(); ++i)
        gin.data[i] *= out.data[i] * (1.f - out.data[i]);
    return gin;
}

struct MaxPoolResult {
    Tensor out;
    std::vector<int> argmax;  // flat input index per output element
};

/// Window/stride pooling; trailing rows and columns that do not fill a
/// window are truncated.
inline MaxPoolResult maxpool_forward(const Tensor& in, int window = 3, int stride = 3) {
    const int oh = (in.h - window) / stride + 1;
    const int ow = (in.w - window) / stride + 1;
    MaxPoolResult r{Tensor(in.n, in.c, oh, ow), {}};
    r.argmax.assign(r.out.count(), -1);
    std::size_t oi = 0;
    for (int s = 0; s < in.n; ++s)
        for (int c = 0; c < in.c; ++c)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox, ++oi) {
                    float best = -std::numeric_limits<float>::infinity();
                    int best_idx = -1;
                    for (int dy = 0; dy < window; ++dy)
                        for (int dx = 0; dx < window; ++dx) {
                            int iy = oy * stride + dy, ix = ox * stride + dx;
                            std::size_t idx =
                                ((static_cast<std::size_t>(s) * in.c + c) * in.h + iy) * in.w + ix;
                            if (in.data[idx] > best) {
                                best = in.data[idx];
                                best_idx = static_cast<int>(idx);
                            }
                        }
                    r.out.data[oi] = best;
                    r.argmax[oi] = best_idx;
                }
    return r;
}

/// Routes gradient only to the argmax positions.
inline Tensor maxpool_backward(const MaxPoolResult& cache, const Tensor& in_shape,
                               const Tensor& gout) {
    Tensor gin(in_shape.n, in_shape.c, in_shape.h, in_shape.w);
    for (std::size_t i = 0; i < gout.data.size(); ++i) gin.data[cache.argmax[i]] += gout.data[i];
    return gin;
}

}  // namespace textdet
