#pragma once

#include <algorithm>
#include <numeric>
#include <ostream>
#include <vector>

#include "textdet/cemser/component_tree.hpp"
#include "textdet/cemser/contrast_map.hpp"
#include "textdet/cemser/mser.hpp"
#include "textdet/core/image.hpp"

namespace textdet {

namespace detail {

inline void detect_on_map(const GrayMap& map, const CeMserConfig& cfg, ComponentSource source,
                          std::vector<ExtremalComponent>& out) {
    for (Polarity pol : {Polarity::dark_on_light, Polarity::light_on_dark}) {
        const GrayMap* work = &map;
        GrayMap inverted;
        if (pol == Polarity::light_on_dark) {
            inverted = invert(map);
            work = &inverted;
        }
        ComponentTree tree = build_component_tree(*work);
        for (ExtremalComponent& c : select_msers(tree, cfg)) {
            c.source = source;
            c.polarity = pol;
            out.push_back(std::move(c));
        }
    }
}

}  // namespace detail

/// Keeps one component per IoU cluster, preferring lower variation.
inline std::vector<ExtremalComponent> dedupe_components(std::vector<ExtremalComponent> comps,
                                                        double iou_threshold) {
    std::vector<int> order(comps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (comps[a].variation != comps[b].variation)
            return comps[a].variation < comps[b].variation;
        return comps[a].area > comps[b].area;
    });
    std::vector<int> kept;
    for (int i : order) {
        bool duplicate = false;
        for (int j : kept)
            if (box_iou(comps[i].bbox, comps[j].bbox) > iou_threshold) {
                duplicate = true;
                break;
            }
        if (!duplicate) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());  // back to detection order
    std::vector<ExtremalComponent> out;
    out.reserve(kept.size());
    for (int i : kept) out.push_back(std::move(comps[i]));
    return out;
}

/// MSER detection on the plain gray map only, both polarities.
inline std::vector<ExtremalComponent> mser_detect(const RasterImage& img,
                                                  const CeMserConfig& cfg) {
    std::vector<ExtremalComponent> comps;
    detail::detect_on_map(to_gray(img), cfg, ComponentSource::original, comps);
    return dedupe_components(std::move(comps), cfg.dedupe_iou);
}

/// Contrast-enhanced MSER detection: MSER on the original gray map plus the
/// two contrast region maps, both polarities each, merged and deduplicated.
inline std::vector<ExtremalComponent> ce_mser_detect(const RasterImage& img,
                                                     const CeMserConfig& cfg) {
    LabImage lab = to_lab(img);
    GrayMap stage1 = contrast_map_stage1(lab, cfg);
    GrayMap stage2 = contrast_map_stage2(img, lab, stage1, cfg);

    std::vector<ExtremalComponent> comps;
    detail::detect_on_map(to_gray(img), cfg, ComponentSource::original, comps);
    detail::detect_on_map(stage1, cfg, ComponentSource::contrast_map_1, comps);
    detail::detect_on_map(stage2, cfg, ComponentSource::contrast_map_2, comps);
    return dedupe_components(std::move(comps), cfg.dedupe_iou);
}

/// Line-delimited debug dump, one component per line.
inline void dump_components(const std::vector<ExtremalComponent>& comps, std::ostream& os) {
    os << "#source\tpolarity\tlevel\tarea\tvariation\tx\ty\tw\th\n";
    for (const ExtremalComponent& c : comps)
        os << to_string(c.source) << '\t' << to_string(c.polarity) << '\t' << c.level << '\t'
           << c.area << '\t' << c.variation << '\t' << c.bbox.x << '\t' << c.bbox.y << '\t'
           << c.bbox.w << '\t' << c.bbox.h << '\n';
}

}  // namespace textdet
