#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "textdet/cemser/kmeans.hpp"
#include "textdet/cemser/mser.hpp"
#include "textdet/core/image.hpp"

namespace textdet {

/// Size-weighted color separation per cluster, C_k = sum_{j!=k} (n_j/N) *
/// ||mu_k - mu_j||, min-max normalized to [0,1]. A single cluster gets 0.
inline std::vector<double> contrast_cue(const ClusterSet& clusters) {
    const std::size_t k = clusters.centers.size();
    std::vector<double> cue(k, 0.0);
    if (k < 2) return cue;
    double total = 0.0;
    for (int c : clusters.counts) total += c;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j)
                cue[i] += clusters.counts[j] / total *
                          lab_distance(clusters.centers[i], clusters.centers[j]);
    auto [lo, hi] = std::minmax_element(cue.begin(), cue.end());
    double span = *hi - *lo;
    if (span <= 0.0) {
        std::fill(cue.begin(), cue.end(), 0.0);
        return cue;
    }
    double min = *lo;
    for (double& v : cue) v = (v - min) / span;
    return cue;
}

/// Center prior per cluster: one minus the mean normalized distance of the
/// cluster's pixels to the image center, clamped to [0,1].
inline std::vector<double> spatial_cue(const ClusterSet& clusters) {
    const std::size_t k = clusters.centers.size();
    std::vector<double> acc(k, 0.0);
    const double cx = (clusters.width - 1) / 2.0;
    const double cy = (clusters.height - 1) / 2.0;
    const double half_diag = std::sqrt(cx * cx + cy * cy);
    const int n = static_cast<int>(clusters.assignment.size());
    for (int i = 0; i < n; ++i) {
        double dx = i % clusters.width - cx;
        double dy = i / clusters.width - cy;
        acc[clusters.assignment[i]] += half_diag > 0 ? std::sqrt(dx * dx + dy * dy) / half_diag : 0.0;
    }
    std::vector<double> cue(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
        if (clusters.counts[c] > 0)
            cue[c] = std::clamp(1.0 - acc[c] / clusters.counts[c], 0.0, 1.0);
    return cue;
}

namespace detail {

inline GrayMap rescale_unit(std::vector<float> values, int w, int h) {
    GrayMap map(w, h);
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    float span = *hi - *lo;
    if (span > 0) {
        float min = *lo;
        for (std::size_t i = 0; i < values.size(); ++i) map.values[i] = (values[i] - min) / span;
    }
    return map;
}

}  // namespace detail

/// Stage-one contrast region map: cluster all pixels in Lab, multiply the
/// contrast and spatial cues of each pixel's cluster, rescale to [0,1].
inline GrayMap contrast_map_stage1(const LabImage& lab, const CeMserConfig& cfg) {
    ClusterSet clusters = kmeans_lab(lab, cfg.cluster_count, cfg.kmeans_seed);
    std::vector<double> contrast = contrast_cue(clusters);
    std::vector<double> spatial = spatial_cue(clusters);
    std::vector<float> values(lab.pixel_count());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int c = clusters.assignment[i];
        values[i] = static_cast<float>(contrast[c] * spatial[c]);
    }
    return detail::rescale_unit(std::move(values), lab.width, lab.height);
}

/// Value smoothing over the m nearest bins in color space (self included).
/// Weights are 1 minus the color distance normalized by the farthest of the
/// m neighbors; m <= 1 or coincident bins leave values unchanged.
inline std::vector<double> smooth_bin_values(const std::vector<std::array<float, 3>>& bin_labs,
                                             const std::vector<double>& values, int m) {
    const int k = static_cast<int>(bin_labs.size());
    m = std::clamp(m, 1, k);
    std::vector<double> out(values);
    if (m < 2) return out;
    std::vector<int> idx(k);
    for (int b = 0; b < k; ++b) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
            return lab_distance(bin_labs[b], bin_labs[i]) < lab_distance(bin_labs[b], bin_labs[j]);
        });
        double dmax = lab_distance(bin_labs[b], bin_labs[idx[m - 1]]);
        if (dmax <= 0.0) continue;
        double wsum = 0.0, vsum = 0.0;
        for (int t = 0; t < m; ++t) {
            double w = 1.0 - lab_distance(bin_labs[b], bin_labs[idx[t]]) / dmax;
            wsum += w;
            vsum += w * values[idx[t]];
        }
        if (wsum > 0.0) out[b] = vsum / wsum;
    }
    return out;
}

/// Stage-two contrast map over the regions stage one left dark (< 0.5):
/// quantize their colors to 12 bins per channel, keep the dominant bins,
/// score each kept bin by size-weighted Lab separation, smooth the scores
/// across nearby bins, and write the normalized values back per pixel.
inline GrayMap contrast_map_stage2(const RasterImage& img, const LabImage& lab,
                                   const GrayMap& stage1, const CeMserConfig& cfg) {
    const int n = static_cast<int>(img.pixel_count());
    GrayMap map(img.width, img.height, 0.f);

    std::vector<int> remaining;
    for (int i = 0; i < n; ++i)
        if (stage1.values[i] < 0.5f) remaining.push_back(i);
    if (remaining.empty()) return map;

    // 12^3 color quantization of the remaining pixels.
    auto bin_of = [](const RasterImage& im, int i) {
        int r = im.data[i * 3] * 12 / 256;
        int g = im.data[i * 3 + 1] * 12 / 256;
        int b = im.data[i * 3 + 2] * 12 / 256;
        return (r * 12 + g) * 12 + b;
    };
    std::vector<int> count(12 * 12 * 12, 0);
    std::vector<std::array<double, 3>> rgb_sum(12 * 12 * 12, {0, 0, 0});
    for (int i : remaining) {
        int b = bin_of(img, i);
        ++count[b];
        for (int c = 0; c < 3; ++c) rgb_sum[b][c] += img.data[i * 3 + c];
    }

    // Dominant bins: the most frequent covering >= dominant_coverage.
    std::vector<int> bins;
    for (int b = 0; b < 12 * 12 * 12; ++b)
        if (count[b] > 0) bins.push_back(b);
    std::stable_sort(bins.begin(), bins.end(), [&](int a, int b) { return count[a] > count[b]; });
    std::size_t kept_count = bins.size();
    {
        long long covered = 0;
        long long need = static_cast<long long>(std::ceil(cfg.dominant_coverage * remaining.size()));
        for (std::size_t i = 0; i < bins.size(); ++i) {
            covered += count[bins[i]];
            if (covered >= need) {
                kept_count = i + 1;
                break;
            }
        }
    }

    auto bin_lab = [&](int b) {
        auto mean = rgb_sum[b];
        double c = count[b];
        return rgb_to_lab(static_cast<std::uint8_t>(std::lround(mean[0] / c)),
                          static_cast<std::uint8_t>(std::lround(mean[1] / c)),
                          static_cast<std::uint8_t>(std::lround(mean[2] / c)));
    };
    std::vector<std::array<float, 3>> kept_lab(kept_count);
    for (std::size_t i = 0; i < kept_count; ++i) kept_lab[i] = bin_lab(bins[i]);

    // Relabel dropped bins to the nearest kept bin and fold their mass in.
    std::vector<int> kept_index(12 * 12 * 12, -1);
    for (std::size_t i = 0; i < kept_count; ++i) kept_index[bins[i]] = static_cast<int>(i);
    std::vector<int> kept_counts(kept_count, 0);
    for (std::size_t i = 0; i < kept_count; ++i) kept_counts[i] = count[bins[i]];
    for (std::size_t i = kept_count; i < bins.size(); ++i) {
        auto dropped = bin_lab(bins[i]);
        int best = 0;
        double bd = lab_distance(dropped, kept_lab[0]);
        for (std::size_t j = 1; j < kept_count; ++j) {
            double d = lab_distance(dropped, kept_lab[j]);
            if (d < bd) {
                bd = d;
                best = static_cast<int>(j);
            }
        }
        kept_index[bins[i]] = best;
        kept_counts[best] += count[bins[i]];
    }

    // Size-weighted separation, then neighborhood smoothing.
    std::vector<double> value(kept_count, 0.0);
    const double total = static_cast<double>(remaining.size());
    for (std::size_t i = 0; i < kept_count; ++i)
        for (std::size_t j = 0; j < kept_count; ++j)
            if (i != j) value[i] += kept_counts[j] / total * lab_distance(kept_lab[i], kept_lab[j]);
    int m = static_cast<int>((kept_count + 3) / 4);
    value = smooth_bin_values(kept_lab, value, m);

    auto [lo, hi] = std::minmax_element(value.begin(), value.end());
    double span = *hi - *lo;
    for (int i : remaining) {
        int b = kept_index[bin_of(img, i)];
        map.values[static_cast<std::size_t>(i)] =
            span > 0 ? static_cast<float>((value[b] - *lo) / span) : 0.f;
    }
    return map;
}

}  // namespace textdet
