#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "textdet/core/image.hpp"

namespace textdet {

/// Tree of nested connected components over all 256 threshold levels of a
/// quantized gray map. A node is a component of {p : level(p) <= t} born at
/// the smallest t where that exact pixel set is connected; the root covers
/// the whole image. Children always have lower levels than their parent.
struct ComponentTree {
    struct Node {
        std::uint8_t level = 0;
        int parent = -1;        // node index; root points to itself
        int area = 0;           // full component size including descendants
        BoundingBox bbox;       // tight over the full component
        int first_child = -1;
        int next_sibling = -1;
        int euler_begin = 0;    // component pixels = euler span [begin, end)
        int euler_end = 0;
    };

    int width = 0;
    int height = 0;
    int root = -1;
    std::vector<Node> nodes;        // topological: children precede parents
    std::vector<int> euler_pixels;  // row-major pixel indices

    std::vector<int> component_pixels(int node) const {
        return {euler_pixels.begin() + nodes[node].euler_begin,
                euler_pixels.begin() + nodes[node].euler_end};
    }
};

inline std::uint8_t quantize_level(float v) {
    int q = static_cast<int>(std::lround(std::clamp(v, 0.f, 1.f) * 255.f));
    return static_cast<std::uint8_t>(q);
}

/// Union-find construction over level-sorted pixels, 4-connectivity.
inline ComponentTree build_component_tree(const GrayMap& gray) {
    const int w = gray.width, h = gray.height;
    const int n = w * h;

    std::vector<std::uint8_t> level(n);
    for (int i = 0; i < n; ++i) level[i] = quantize_level(gray.values[i]);

    // Counting sort by (level asc, index asc).
    std::vector<int> order(n);
    {
        int hist[257] = {0};
        for (int i = 0; i < n; ++i) ++hist[level[i] + 1];
        for (int l = 0; l < 256; ++l) hist[l + 1] += hist[l];
        for (int i = 0; i < n; ++i) order[hist[level[i]]++] = i;
    }

    std::vector<int> parent(n);   // pixel-level tree
    std::vector<int> zpar(n, -1); // union-find; -1 = unprocessed
    auto find = [&](int p) {
        int r = p;
        while (zpar[r] != r) r = zpar[r];
        while (zpar[p] != r) {
            int next = zpar[p];
            zpar[p] = r;
            p = next;
        }
        return r;
    };

    for (int idx = 0; idx < n; ++idx) {
        int p = order[idx];
        parent[p] = p;
        zpar[p] = p;
        const int px = p % w, py = p / w;
        const int neigh[4] = {px > 0 ? p - 1 : -1, px < w - 1 ? p + 1 : -1,
                              py > 0 ? p - w : -1, py < h - 1 ? p + w : -1};
        for (int q : neigh) {
            if (q < 0 || zpar[q] < 0) continue;
            int r = find(q);
            if (r != p) {
                parent[r] = p;
                zpar[r] = p;
            }
        }
    }

    // Canonicalize: every pixel points at its node's canonical element (or at
    // the parent node's canonical element if the pixel is itself canonical).
    for (int idx = n - 1; idx >= 0; --idx) {
        int p = order[idx];
        int q = parent[p];
        if (level[parent[q]] == level[q]) parent[p] = parent[q];
    }

    auto canonical = [&](int p) {
        return (parent[p] == p || level[parent[p]] != level[p]) ? p : parent[p];
    };

    // Node ids in processing order: children (lower levels) get smaller ids.
    std::vector<int> node_of_pixel(n, -1);
    ComponentTree tree;
    tree.width = w;
    tree.height = h;
    std::vector<int> canon_pixel;
    for (int idx = 0; idx < n; ++idx) {
        int p = order[idx];
        if (canonical(p) == p) {
            node_of_pixel[p] = static_cast<int>(canon_pixel.size());
            canon_pixel.push_back(p);
        }
    }
    const int m = static_cast<int>(canon_pixel.size());
    tree.nodes.resize(m);
    for (int i = 0; i < m; ++i) {
        int c = canon_pixel[i];
        ComponentTree::Node& node = tree.nodes[i];
        node.level = level[c];
        node.parent = (parent[c] == c) ? i : node_of_pixel[canonical(parent[c])];
        if (node.parent == i) tree.root = i;
        node.bbox = {c % w, c / w, 1, 1};
    }

    // Direct pixel groups per node, then areas and boxes bottom-up
    // (children have smaller ids, so an ascending pass completes subtrees).
    std::vector<int> direct_count(m, 0);
    for (int p = 0; p < n; ++p) {
        int node = node_of_pixel[canonical(p)];
        node_of_pixel[p] = node;
        ++direct_count[node];
        ComponentTree::Node& nd = tree.nodes[node];
        int px = p % w, py = p / w;
        int x0 = std::min(nd.bbox.x, px), y0 = std::min(nd.bbox.y, py);
        int x1 = std::max(nd.bbox.right(), px + 1), y1 = std::max(nd.bbox.bottom(), py + 1);
        nd.bbox = {x0, y0, x1 - x0, y1 - y0};
        nd.area += 1;
    }
    for (int i = 0; i < m; ++i) {
        if (i == tree.root) continue;
        ComponentTree::Node& nd = tree.nodes[i];
        ComponentTree::Node& pa = tree.nodes[nd.parent];
        pa.area += nd.area;
        int x0 = std::min(pa.bbox.x, nd.bbox.x), y0 = std::min(pa.bbox.y, nd.bbox.y);
        int x1 = std::max(pa.bbox.right(), nd.bbox.right());
        int y1 = std::max(pa.bbox.bottom(), nd.bbox.bottom());
        pa.bbox = {x0, y0, x1 - x0, y1 - y0};
    }

    // Child lists in ascending id order.
    for (int i = m - 1; i >= 0; --i) {
        if (i == tree.root) continue;
        int pa = tree.nodes[i].parent;
        tree.nodes[i].next_sibling = tree.nodes[pa].first_child;
        tree.nodes[pa].first_child = i;
    }

    // Group pixels by node, then lay them out in DFS pre-order so every
    // component is one contiguous euler span.
    std::vector<int> group_offset(m + 1, 0);
    for (int i = 0; i < m; ++i) group_offset[i + 1] = group_offset[i] + direct_count[i];
    std::vector<int> grouped(n);
    {
        std::vector<int> cursor(group_offset.begin(), group_offset.end() - 1);
        for (int p = 0; p < n; ++p) grouped[cursor[node_of_pixel[p]]++] = p;
    }
    tree.euler_pixels.resize(n);
    {
        int out = 0;
        std::vector<std::pair<int, bool>> stack;  // (node, entered)
        stack.emplace_back(tree.root, false);
        while (!stack.empty()) {
            auto [node, entered] = stack.back();
            if (entered) {
                tree.nodes[node].euler_end = out;
                stack.pop_back();
                continue;
            }
            stack.back().second = true;
            tree.nodes[node].euler_begin = out;
            for (int g = group_offset[node]; g < group_offset[node + 1]; ++g)
                tree.euler_pixels[out++] = grouped[g];
            // push children in reverse so DFS visits them ascending
            std::vector<int> kids;
            for (int c = tree.nodes[node].first_child; c != -1; c = tree.nodes[c].next_sibling)
                kids.push_back(c);
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, false);
        }
    }
    return tree;
}

}  // namespace textdet
