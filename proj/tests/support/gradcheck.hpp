#pragma once

// Central finite-difference gradient checking against a scalar projection of
// a layer's output. The projection weights are fixed per check so the
// analytic gradient is obtained by one backward pass with the projection as
// upstream gradient.

#include <cmath>
#include <functional>
#include <vector>

#include "textdet/core/rng.hpp"
#include "textdet/nn/tensor.hpp"

namespace gradcheck {

using textdet::Rng;
using textdet::Tensor;

inline void randomize(Tensor& t, Rng& rng, double lo = -1.0, double hi = 1.0) {
    for (float& v : t.data) v = static_cast<float>(rng.uniform(lo, hi));
}

inline Tensor random_projection(const Tensor& shape, Rng& rng) {
    Tensor r = shape;
    for (float& v : r.data) v = rng.next_below(2) ? 1.f : -1.f;
    return r;
}

inline double project(const Tensor& out, const Tensor& proj) {
    double acc = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        acc += static_cast<double>(out.data[i]) * proj.data[i];
    return acc;
}

/// Normwise relative error between the analytic gradient and central finite
/// differences over (a deterministic subset of) the tensor's elements:
/// ||g_a - g_fd|| / max(||g_a||, ||g_fd||). The vector norm is the right
/// yardstick in float32, where individual finite differences carry rounding
/// noise proportional to 1/eps. `loss` must recompute the projected scalar
/// from current parameter values.
inline double fd_rel_error(Tensor& params, const Tensor& analytic,
                           const std::function<double()>& loss, double eps = 1e-3,
                           int max_elements = 200, std::uint64_t pick_seed = 17) {
    std::vector<std::size_t> picks;
    const std::size_t total = params.data.size();
    if (static_cast<int>(total) <= max_elements) {
        for (std::size_t i = 0; i < total; ++i) picks.push_back(i);
    } else {
        Rng rng(pick_seed);
        for (int i = 0; i < max_elements; ++i) picks.push_back(rng.next_below(total));
    }
    double num = 0.0, norm_a = 0.0, norm_fd = 0.0;
    for (std::size_t i : picks) {
        float orig = params.data[i];
        params.data[i] = orig + static_cast<float>(eps);
        double lp = loss();
        params.data[i] = orig - static_cast<float>(eps);
        double lm = loss();
        params.data[i] = orig;
        double fd = (lp - lm) / (2 * eps);
        double a = analytic.data[i];
        num += (a - fd) * (a - fd);
        norm_a += a * a;
        norm_fd += fd * fd;
    }
    double denom = std::max({std::sqrt(norm_a), std::sqrt(norm_fd), 1e-8});
    return std::sqrt(num) / denom;
}

}  // namespace gradcheck
