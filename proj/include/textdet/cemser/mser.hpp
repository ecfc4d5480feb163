#pragma once

#include <cstdint>
#include <vector>

#include "textdet/cemser/component_tree.hpp"
#include "textdet/core/image.hpp"

namespace textdet {

enum class ComponentSource : std::uint8_t { original = 0, contrast_map_1 = 1, contrast_map_2 = 2 };
enum class Polarity : std::uint8_t { dark_on_light = 0, light_on_dark = 1 };

inline const char* to_string(ComponentSource s) {
    switch (s) {
        case ComponentSource::original: return "original";
        case ComponentSource::contrast_map_1: return "contrast_map_1";
        default: return "contrast_map_2";
    }
}
inline const char* to_string(Polarity p) {
    return p == Polarity::dark_on_light ? "dark_on_light" : "light_on_dark";
}

/// A maximally stable extremal region: one connected component of a
/// threshold level, tagged with the map and polarity it was detected on.
struct ExtremalComponent {
    std::vector<int> pixels;  // row-major indices into the detection map
    int width = 0;            // map geometry, for decoding pixel indices
    int height = 0;
    int level = 0;            // threshold level in the processed map
    int area = 0;
    double variation = 0.0;
    BoundingBox bbox;
    ComponentSource source = ComponentSource::original;
    Polarity polarity = Polarity::dark_on_light;
};

struct CeMserConfig {
    int delta = 5;                    // stability window, in levels
    double min_area = 0.00005;        // fraction of image area
    double max_area = 0.25;           // fraction of image area
    double max_variation = 0.5;
    int cluster_count = 6;            // K for the stage-1 k-means
    double dominant_coverage = 0.95;  // stage-2 dominant-bin mass
    double dedupe_iou = 0.7;
    std::uint64_t kmeans_seed = 0x7ec5u;  // fixed so detection stays pure
};

namespace detail {

// Area of the enclosing component delta levels up; clamps at the root.
inline int area_above(const ComponentTree& tree, int node, int delta) {
    int limit = tree.nodes[node].level + delta;
    int cur = node;
    while (tree.nodes[cur].parent != cur && tree.nodes[tree.nodes[cur].parent].level <= limit)
        cur = tree.nodes[cur].parent;
    return tree.nodes[cur].area;
}

inline int largest_child(const ComponentTree& tree, int node) {
    int best = -1;
    for (int c = tree.nodes[node].first_child; c != -1; c = tree.nodes[c].next_sibling)
        if (best == -1 || tree.nodes[c].area > tree.nodes[best].area) best = c;
    return best;
}

// Area of the component delta levels down along the largest-child path;
// clamps at the node's own birth (its leaf) when nothing exists that deep.
inline int area_below(const ComponentTree& tree, int node, int delta) {
    int limit = tree.nodes[node].level - delta;
    int cur = node;
    for (;;) {
        int child = largest_child(tree, cur);
        if (child == -1) return tree.nodes[cur].area;
        if (tree.nodes[child].level <= limit) return tree.nodes[child].area;
        cur = child;
    }
}

}  // namespace detail

/// Relative area growth across the stability window,
/// (|R_{l+delta}| - |R_{l-delta}|) / |R_l|.
inline double component_variation(const ComponentTree& tree, int node, int delta) {
    double up = detail::area_above(tree, node, delta);
    double down = detail::area_below(tree, node, delta);
    return (up - down) / tree.nodes[node].area;
}

/// Components whose variation is a local minimum along the tree path (vs the
/// parent and the largest child) and passes the variation/area gates.
inline std::vector<ExtremalComponent> select_msers(const ComponentTree& tree,
                                                   const CeMserConfig& cfg) {
    std::vector<ExtremalComponent> out;
    const int m = static_cast<int>(tree.nodes.size());
    if (m == 0) return out;
    const double total = static_cast<double>(tree.width) * tree.height;

    std::vector<double> q(m);
    for (int i = 0; i < m; ++i) q[i] = component_variation(tree, i, cfg.delta);

    for (int i = 0; i < m; ++i) {
        const ComponentTree::Node& node = tree.nodes[i];
        if (q[i] > cfg.max_variation) continue;
        double frac = node.area / total;
        if (frac < cfg.min_area || frac > cfg.max_area) continue;
        if (node.parent != i && q[node.parent] < q[i]) continue;
        // ties along a plateau go to the deeper node
        int child = detail::largest_child(tree, i);
        if (child != -1 && q[child] <= q[i]) continue;

        ExtremalComponent comp;
        comp.pixels = tree.component_pixels(i);
        comp.width = tree.width;
        comp.height = tree.height;
        comp.level = node.level;
        comp.area = node.area;
        comp.variation = q[i];
        comp.bbox = node.bbox;
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace textdet
