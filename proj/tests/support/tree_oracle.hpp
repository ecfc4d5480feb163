#pragma once

// Brute-force component-tree oracle: per-level thresholding plus BFS
// connected-component labeling. Deliberately independent of the union-find
// construction it checks.

#include <algorithm>
#include <map>
#include <vector>

#include "textdet/core/image.hpp"
#include "textdet/cemser/component_tree.hpp"

namespace oracle {

// Every distinct connected component of {p : level(p) <= t} over all t,
// keyed by its sorted pixel set, mapped to the smallest such t (birth level).
inline std::map<std::vector<int>, int> threshold_components(const textdet::GrayMap& gray) {
    const int w = gray.width, h = gray.height, n = w * h;
    std::vector<int> level(n);
    for (int i = 0; i < n; ++i) level[i] = textdet::quantize_level(gray.values[i]);

    std::map<std::vector<int>, int> components;
    for (int t = 0; t < 256; ++t) {
        std::vector<char> in(n), seen(n, 0);
        bool any = false;
        for (int i = 0; i < n; ++i) {
            in[i] = level[i] <= t;
            any |= in[i];
        }
        if (!any) continue;
        for (int start = 0; start < n; ++start) {
            if (!in[start] || seen[start]) continue;
            std::vector<int> comp, queue{start};
            seen[start] = 1;
            while (!queue.empty()) {
                int p = queue.back();
                queue.pop_back();
                comp.push_back(p);
                int x = p % w, y = p / w;
                const int nb[4] = {x > 0 ? p - 1 : -1, x < w - 1 ? p + 1 : -1,
                                   y > 0 ? p - w : -1, y < h - 1 ? p + w : -1};
                for (int q : nb)
                    if (q >= 0 && in[q] && !seen[q]) {
                        seen[q] = 1;
                        queue.push_back(q);
                    }
            }
            std::sort(comp.begin(), comp.end());
            components.emplace(std::move(comp), t);  // first t wins
        }
    }
    return components;
}

inline std::map<std::vector<int>, int> tree_components(const textdet::ComponentTree& tree) {
    std::map<std::vector<int>, int> components;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        std::vector<int> pixels = tree.component_pixels(static_cast<int>(i));
        std::sort(pixels.begin(), pixels.end());
        components.emplace(std::move(pixels), tree.nodes[i].level);
    }
    return components;
}

}  // namespace oracle
