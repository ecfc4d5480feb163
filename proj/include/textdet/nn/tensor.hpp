#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace textdet {

/// Dense float32 tensor, at most 4-d (count x channels x height x width),
/// row-major. Lower-rank data keeps trailing dims at 1.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<float> data;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, float fill = 0.f)
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {
        if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0)
            throw std::invalid_argument("Tensor: negative dimension");
    }

    static Tensor vec(int len, float fill = 0.f) { return Tensor(1, len, 1, 1, fill); }
    static Tensor matrix(int rows, int cols, float fill = 0.f) {
        return Tensor(rows, cols, 1, 1, fill);
    }

    std::size_t count() const { return data.size(); }
    int features() const { return c * h * w; }  // per-sample size

    float& at(int in, int ic, int iy, int ix) {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    float at(int in, int ic, int iy, int ix) const {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    float* sample(int in) { return data.data() + static_cast<std::size_t>(in) * features(); }
    const float* sample(int in) const {
        return data.data() + static_cast<std::size_t>(in) * features();
    }

    void fill(float v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
    std::string shape_str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
               std::to_string(w) + ")";
    }

    bool all_finite() const {
        for (float v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
    void assert_finite(const char* context) const {
        if (!all_finite())
            throw std::runtime_error(std::string("non-finite value after ") + context);
    }
};

inline void require_shape(const Tensor& t, int n, int c, int h, int w, const char* context) {
    if (t.n != n || t.c != c || t.h != h || t.w != w)
        throw std::invalid_argument(std::string(context) + ": expected shape (" +
                                    std::to_string(n) + "," + std::to_string(c) + "," +
                                    std::to_string(h) + "," + std::to_string(w) + "), got " +
                                    t.shape_str());
}

}  // namespace textdet
