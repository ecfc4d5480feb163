#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "textdet/nn/tensor.hpp"

namespace textdet {

/// One training record: a 32x32x3 patch plus whichever supervision it
/// carries (pixel mask, character class, text/non-text bit).
struct MultiTaskSample {
    std::vector<float> patch;  // 3*32*32, channel-major, values in [0,1]
    std::vector<float> mask;   // 32*32 binary, or empty
    int char_label = -1;       // 0..classes-1, or -1
    int binary_label = -1;     // 0/1, or -1

    bool has_mask() const { return !mask.empty(); }

    void validate() const {
        if (patch.size() != 3u * 32 * 32)
            throw std::invalid_argument("MultiTaskSample: patch must be 3x32x32");
        if (!mask.empty() && mask.size() != 32u * 32)
            throw std::invalid_argument("MultiTaskSample: mask must be 32x32");
        for (float v : mask)
            if (v != 0.f && v != 1.f)
                throw std::invalid_argument("MultiTaskSample: mask values must be binary");
        if (mask.empty() && char_label < 0 && binary_label < 0)
            throw std::invalid_argument("MultiTaskSample: at least one label required");
    }
};

/// Assembles a patch batch (n,3,32,32) from dataset indices.
inline Tensor make_patch_batch(const std::vector<MultiTaskSample>& set, std::span<const int> idx) {
    Tensor batch(static_cast<int>(idx.size()), 3, 32, 32);
    for (std::size_t s = 0; s < idx.size(); ++s)
        std::copy(set[idx[s]].patch.begin(), set[idx[s]].patch.end(),
                  batch.sample(static_cast<int>(s)));
    return batch;
}

}  // namespace textdet
