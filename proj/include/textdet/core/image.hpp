#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace textdet {

/// Dense 8-bit RGB image, row-major, channel-interleaved.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width*height*3

    RasterImage() = default;
    RasterImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("RasterImage: width and height must be >= 1");
    }

    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// Single-channel real-valued map, values in [0,1].
struct GrayMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;  // width*height

    GrayMap() = default;
    GrayMap(int w, int h, float fill = 0.f)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// CIELAB planes. L in [0,100], a/b roughly in [-128,128].
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<float> L, a, b;

    LabImage() = default;
    LabImage(int w, int h)
        : width(w), height(h),
          L(static_cast<std::size_t>(w) * h, 0.f),
          a(static_cast<std::size_t>(w) * h, 0.f),
          b(static_cast<std::size_t>(w) * h, 0.f) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// Axis-aligned pixel rectangle, top-left anchored.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }    // exclusive
    int bottom() const { return y + h; }   // exclusive
    long long area() const { return static_cast<long long>(w) * h; }

    bool operator==(const BoundingBox&) const = default;
};

inline BoundingBox clamp_box(const BoundingBox& box, int width, int height) {
    int x0 = std::clamp(box.x, 0, width);
    int y0 = std::clamp(box.y, 0, height);
    int x1 = std::clamp(box.x + box.w, 0, width);
    int y1 = std::clamp(box.y + box.h, 0, height);
    return {x0, y0, x1 - x0, y1 - y0};
}

inline long long box_intersection_area(const BoundingBox& a, const BoundingBox& b) {
    long long iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    long long ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (iw <= 0 || ih <= 0) return 0;
    return iw * ih;
}

inline double box_iou(const BoundingBox& a, const BoundingBox& b) {
    long long inter = box_intersection_area(a, b);
    long long uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

// ---------------------------------------------------------------------------
// Color-space conversion. sRGB with D65 white point, 2-degree observer.
// ---------------------------------------------------------------------------

namespace detail {

inline double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double c) {
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) {
    constexpr double kCube = 216.0 / 24389.0;   // (6/29)^3
    constexpr double kSlope = 841.0 / 108.0;    // (29/6)^2 / 3
    return t > kCube ? std::cbrt(t) : kSlope * t + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
    constexpr double kLin = 6.0 / 29.0;
    constexpr double kSlope = 108.0 / 841.0;
    return t > kLin ? t * t * t : (t - 4.0 / 29.0) * kSlope;
}

constexpr double kD65_X = 0.95047;
constexpr double kD65_Y = 1.0;
constexpr double kD65_Z = 1.08883;

}  // namespace detail

inline std::array<float, 3> rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    using namespace detail;
    double r = srgb_to_linear(r8 / 255.0);
    double g = srgb_to_linear(g8 / 255.0);
    double b = srgb_to_linear(b8 / 255.0);
    double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    double fx = lab_f(x / kD65_X);
    double fy = lab_f(y / kD65_Y);
    double fz = lab_f(z / kD65_Z);
    return {static_cast<float>(116.0 * fy - 16.0),
            static_cast<float>(500.0 * (fx - fy)),
            static_cast<float>(200.0 * (fy - fz))};
}

inline std::array<std::uint8_t, 3> lab_to_rgb(float L, float a, float b) {
    using namespace detail;
    double fy = (L + 16.0) / 116.0;
    double fx = fy + a / 500.0;
    double fz = fy - b / 200.0;
    double x = kD65_X * lab_f_inv(fx);
    double y = kD65_Y * lab_f_inv(fy);
    double z = kD65_Z * lab_f_inv(fz);
    double rl = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    double gl = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    double bl = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    auto to8 = [](double c) {
        double s = linear_to_srgb(std::clamp(c, 0.0, 1.0));
        return static_cast<std::uint8_t>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
    };
    return {to8(rl), to8(gl), to8(bl)};
}

/// Per-pixel sRGB -> CIELAB.
inline LabImage to_lab(const RasterImage& img) {
    LabImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        auto lab = rgb_to_lab(img.data[i * 3], img.data[i * 3 + 1], img.data[i * 3 + 2]);
        out.L[i] = lab[0];
        out.a[i] = lab[1];
        out.b[i] = lab[2];
    }
    return out;
}

/// Rec.601 luma, normalized to [0,1].
inline GrayMap to_gray(const RasterImage& img) {
    GrayMap out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        out.values[i] = static_cast<float>(
            (0.299 * img.data[i * 3] + 0.587 * img.data[i * 3 + 1] + 0.114 * img.data[i * 3 + 2]) /
            255.0);
    }
    return out;
}

inline GrayMap invert(const GrayMap& g) {
    GrayMap out(g.width, g.height);
    for (std::size_t i = 0; i < g.values.size(); ++i) out.values[i] = 1.f - g.values[i];
    return out;
}

// ---------------------------------------------------------------------------
// Geometric patch extraction.
// ---------------------------------------------------------------------------

/// Crops `box` (clamped to the image) and bilinearly resamples it to side x side.
/// A box that degenerates to zero width or height after clamping is an error.
inline RasterImage crop_resize(const RasterImage& img, const BoundingBox& box, int side) {
    if (side < 1) throw std::invalid_argument("crop_resize: side must be >= 1");
    BoundingBox c = clamp_box(box, img.width, img.height);
    if (c.w < 1 || c.h < 1)
        throw std::invalid_argument("crop_resize: box is empty after clamping to image bounds");

    RasterImage out(side, side);
    double sx = static_cast<double>(c.w) / side;
    double sy = static_cast<double>(c.h) / side;
    for (int y = 0; y < side; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int ya = std::clamp(y0, 0, c.h - 1) + c.y;
        int yb = std::clamp(y0 + 1, 0, c.h - 1) + c.y;
        for (int x = 0; x < side; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int xa = std::clamp(x0, 0, c.w - 1) + c.x;
            int xb = std::clamp(x0 + 1, 0, c.w - 1) + c.x;
            for (int ch = 0; ch < 3; ++ch) {
                double top = (1.0 - wx) * img.at(xa, ya, ch) + wx * img.at(xb, ya, ch);
                double bot = (1.0 - wx) * img.at(xa, yb, ch) + wx * img.at(xb, yb, ch);
                out.at(x, y, ch) =
                    static_cast<std::uint8_t>(std::lround(std::clamp((1.0 - wy) * top + wy * bot, 0.0, 255.0)));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Overlay rendering.
// ---------------------------------------------------------------------------

namespace detail {

// 3x5 digit strip for burned-in scores: '0'-'9' then '.'.
inline const char* score_glyph(char c) {
    static constexpr const char* kGlyphs[11] = {
        "###"
        "#.#"
        "#.#"
        "#.#"
        "###",  // 0
        ".#."
        "##."
        ".#."
        ".#."
        "###",  // 1
        "###"
        "..#"
        "###"
        "#.."
        "###",  // 2
        "###"
        "..#"
        "###"
        "..#"
        "###",  // 3
        "#.#"
        "#.#"
        "###"
        "..#"
        "..#",  // 4
        "###"
        "#.."
        "###"
        "..#"
        "###",  // 5
        "###"
        "#.."
        "###"
        "#.#"
        "###",  // 6
        "###"
        "..#"
        "..#"
        "..#"
        "..#",  // 7
        "###"
        "#.#"
        "###"
        "#.#"
        "###",  // 8
        "###"
        "#.#"
        "###"
        "..#"
        "###",  // 9
        "..."
        "..."
        "..."
        "..."
        ".#.",  // .
    };
    if (c >= '0' && c <= '9') return kGlyphs[c - '0'];
    if (c == '.') return kGlyphs[10];
    return nullptr;
}

inline void burn_text(RasterImage& img, int x, int y, const std::string& text,
                      const std::array<std::uint8_t, 3>& color) {
    for (char c : text) {
        const char* glyph = score_glyph(c);
        if (glyph) {
            for (int gy = 0; gy < 5; ++gy)
                for (int gx = 0; gx < 3; ++gx)
                    if (glyph[gy * 3 + gx] == '#') {
                        int px = x + gx, py = y + gy;
                        if (px >= 0 && px < img.width && py >= 0 && py < img.height)
                            for (int ch = 0; ch < 3; ++ch) img.at(px, py, ch) = color[ch];
                    }
        }
        x += 4;
    }
}

}  // namespace detail

/// Copy of `img` with box outlines drawn in order; scores, when given, are
/// burned in above each box. Later boxes overwrite earlier ones.
inline RasterImage draw_overlay(const RasterImage& img, const std::vector<BoundingBox>& boxes,
                                const std::vector<double>& scores = {},
                                std::array<std::uint8_t, 3> color = {255, 32, 32}) {
    RasterImage out = img;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        BoundingBox b = clamp_box(boxes[i], img.width, img.height);
        if (b.w < 1 || b.h < 1) continue;
        for (int x = b.x; x < b.right(); ++x) {
            for (int ch = 0; ch < 3; ++ch) {
                out.at(x, b.y, ch) = color[ch];
                out.at(x, b.bottom() - 1, ch) = color[ch];
            }
        }
        for (int y = b.y; y < b.bottom(); ++y) {
            for (int ch = 0; ch < 3; ++ch) {
                out.at(b.x, y, ch) = color[ch];
                out.at(b.right() - 1, y, ch) = color[ch];
            }
        }
        if (i < scores.size()) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%.2f", scores[i]);
            detail::burn_text(out, b.x, std::max(0, b.y - 6), buf, color);
        }
    }
    return out;
}

}  // namespace textdet
