#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "textdet/core/image.hpp"
#include "textdet/core/rng.hpp"

namespace textdet {

/// K-means clustering of an image's pixels in Lab space.
struct ClusterSet {
    int width = 0;
    int height = 0;
    std::vector<std::array<float, 3>> centers;  // Lab
    std::vector<int> assignment;                // per pixel, into centers
    std::vector<int> counts;                    // per cluster
};

namespace detail {

inline double lab_dist2(const std::array<float, 3>& a, const std::array<float, 3>& b) {
    double dl = a[0] - b[0], da = a[1] - b[1], db = a[2] - b[2];
    return dl * dl + da * da + db * db;
}

}  // namespace detail

inline double lab_distance(const std::array<float, 3>& a, const std::array<float, 3>& b) {
    return std::sqrt(detail::lab_dist2(a, b));
}

/// Lloyd iterations from k-means++ seeding until the assignment stops
/// changing or 100 iterations pass. Deterministic given the seed. Requesting
/// more clusters than distinct colors yields fewer effective clusters.
inline ClusterSet kmeans_lab(const LabImage& lab, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("kmeans_lab: k must be >= 1");
    const int n = static_cast<int>(lab.pixel_count());
    auto point = [&](int i) {
        return std::array<float, 3>{lab.L[i], lab.a[i], lab.b[i]};
    };

    Rng rng(seed);
    std::vector<std::array<float, 3>> centers;
    centers.push_back(point(static_cast<int>(rng.next_below(n))));

    // k-means++ seeding; stops early once every point sits on a center.
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = detail::lab_dist2(point(i), centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c)
                best = std::min(best, detail::lab_dist2(point(i), centers[c]));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) break;
        double r = rng.next_double() * total;
        int pick = n - 1;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= r) {
                pick = i;
                break;
            }
        }
        centers.push_back(point(pick));
    }

    std::vector<int> assign(n, 0);
    std::vector<int> counts;
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = detail::lab_dist2(point(i), centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c) {
                double d = detail::lab_dist2(point(i), centers[c]);
                if (d < bd) {
                    bd = d;
                    best = static_cast<int>(c);
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        // Recompute means; empty clusters drop out.
        std::vector<std::array<double, 3>> sum(centers.size(), {0, 0, 0});
        counts.assign(centers.size(), 0);
        for (int i = 0; i < n; ++i) {
            auto p = point(i);
            for (int d = 0; d < 3; ++d) sum[assign[i]][d] += p[d];
            ++counts[assign[i]];
        }
        std::vector<std::array<float, 3>> next;
        std::vector<int> remap(centers.size(), -1);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (counts[c] == 0) continue;
            remap[c] = static_cast<int>(next.size());
            next.push_back({static_cast<float>(sum[c][0] / counts[c]),
                            static_cast<float>(sum[c][1] / counts[c]),
                            static_cast<float>(sum[c][2] / counts[c])});
        }
        if (next.size() != centers.size()) {
            for (int i = 0; i < n; ++i) assign[i] = remap[assign[i]];
            changed = true;
        }
        centers = std::move(next);
        if (!changed && iter > 0) break;
    }

    ClusterSet cs;
    cs.width = lab.width;
    cs.height = lab.height;
    cs.centers = std::move(centers);
    cs.assignment = std::move(assign);
    cs.counts.assign(cs.centers.size(), 0);
    for (int i = 0; i < n; ++i) ++cs.counts[cs.assignment[i]];
    return cs;
}

}  // namespace textdet
