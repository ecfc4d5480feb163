#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace textdet {

// Embedded bitmap font for the synthetic character generator: 62 glyphs
// (0-9, A-Z, a-z) drawn on an 8x12 grid, doubled to 16x24 at load. Drawn for
// this project; no external font is involved.

namespace glyphdata {

// clang-format off
inline constexpr const char* kGlyphRows[62] = {
    // '0'
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##...###"
    "##..####"
    "####..##"
    "###...##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // '1'
    "...##..."
    "..###..."
    ".####..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    ".######.",
    // '2'
    "..####.."
    ".##..##."
    "##....##"
    "......##"
    ".....##."
    "....##.."
    "...##..."
    "..##...."
    ".##....."
    "##......"
    "##......"
    "########",
    // '3'
    "..####.."
    ".##..##."
    "##....##"
    "......##"
    ".....##."
    "...###.."
    ".....##."
    "......##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // '4'
    ".....##."
    "....###."
    "...####."
    "..##.##."
    ".##..##."
    "##...##."
    "##...##."
    "########"
    ".....##."
    ".....##."
    ".....##."
    ".....##.",
    // '5'
    "########"
    "##......"
    "##......"
    "##......"
    "######.."
    ".....##."
    "......##"
    "......##"
    "......##"
    "##....##"
    ".##..##."
    "..####..",
    // '6'
    "..####.."
    ".##..##."
    "##......"
    "##......"
    "##......"
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // '7'
    "########"
    "......##"
    ".....##."
    ".....##."
    "....##.."
    "....##.."
    "...##..."
    "...##..."
    "..##...."
    "..##...."
    "..##...."
    "..##....",
    // '8'
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    ".##..##."
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // '9'
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##....##"
    ".##...##"
    "..######"
    "......##"
    "......##"
    "......##"
    ".##..##."
    "..####..",
    // 'A'
    "...##..."
    "..####.."
    "..####.."
    ".##..##."
    ".##..##."
    ".##..##."
    "##....##"
    "########"
    "##....##"
    "##....##"
    "##....##"
    "##....##",
    // 'B'
    "######.."
    "##...##."
    "##....##"
    "##...##."
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##...##."
    "######..",
    // 'C'
    "..####.."
    ".##..##."
    "##....##"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##....##"
    ".##..##."
    "..####..",
    // 'D'
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##...##."
    "######..",
    // 'E'
    "########"
    "##......"
    "##......"
    "##......"
    "######.."
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "########",
    // 'F'
    "########"
    "##......"
    "##......"
    "##......"
    "######.."
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......",
    // 'G'
    "..####.."
    ".##..##."
    "##....##"
    "##......"
    "##......"
    "##......"
    "##..####"
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // 'H'
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "########"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##",
    // 'I'
    ".######."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    ".######.",
    // 'J'
    "..######"
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    "##...##."
    "##...##."
    ".#####..",
    // 'K'
    "##....##"
    "##...##."
    "##..##.."
    "##.##..."
    "####...."
    "###....."
    "####...."
    "##.##..."
    "##..##.."
    "##...##."
    "##....##"
    "##....##",
    // 'L'
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "########",
    // 'M'
    "##....##"
    "###..###"
    "########"
    "##.##.##"
    "##.##.##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##",
    // 'N'
    "##....##"
    "###...##"
    "####..##"
    "####..##"
    "##.##.##"
    "##.##.##"
    "##..####"
    "##..####"
    "##...###"
    "##....##"
    "##....##"
    "##....##",
    // 'O'
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // 'P'
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##...##."
    "######.."
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......",
    // 'Q'
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##.##.##"
    "##..####"
    ".##..##."
    "..####.#",
    // 'R'
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##...##."
    "######.."
    "####...."
    "##.##..."
    "##..##.."
    "##...##."
    "##....##"
    "##....##",
    // 'S'
    "..####.."
    ".##..##."
    "##....##"
    "##......"
    ".##....."
    "..####.."
    ".....##."
    "......##"
    "......##"
    "##....##"
    ".##..##."
    "..####..",
    // 'T'
    "########"
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##...",
    // 'U'
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // 'V'
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    ".##..##."
    ".##..##."
    ".##..##."
    "..####.."
    "..####.."
    "...##...",
    // 'W'
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "########"
    "###..###"
    "##....##",
    // 'X'
    "##....##"
    "##....##"
    ".##..##."
    ".##..##."
    "..####.."
    "...##..."
    "...##..."
    "..####.."
    ".##..##."
    ".##..##."
    "##....##"
    "##....##",
    // 'Y'
    "##....##"
    "##....##"
    ".##..##."
    ".##..##."
    "..####.."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##...",
    // 'Z'
    "########"
    "......##"
    ".....##."
    "....##.."
    "....##.."
    "...##..."
    "...##..."
    "..##...."
    "..##...."
    ".##....."
    "##......"
    "########",
    // 'a'
    "........"
    "........"
    "........"
    ".#####.."
    "......##"
    "......##"
    ".#######"
    "##....##"
    "##....##"
    "##....##"
    "##...###"
    ".###..##",
    // 'b'
    "##......"
    "##......"
    "##......"
    "##......"
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##...##."
    "######..",
    // 'c'
    "........"
    "........"
    "........"
    "..####.."
    ".##..##."
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    ".##..##."
    "..####..",
    // 'd'
    "......##"
    "......##"
    "......##"
    "......##"
    "..######"
    ".##...##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##...##"
    "..######",
    // 'e'
    "........"
    "........"
    "........"
    "..####.."
    ".##..##."
    "##....##"
    "########"
    "##......"
    "##......"
    "##......"
    ".##..##."
    "..####..",
    // 'f'
    "...####."
    "..##...."
    "..##...."
    "..##...."
    "######.."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##....",
    // 'g'
    "........"
    "........"
    "..######"
    ".##...##"
    "##....##"
    "##....##"
    "##....##"
    ".##...##"
    "..######"
    "......##"
    "##...##."
    ".#####..",
    // 'h'
    "##......"
    "##......"
    "##......"
    "##......"
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##",
    // 'i'
    "...##..."
    "...##..."
    "........"
    "..###..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    ".######.",
    // 'j'
    ".....##."
    ".....##."
    "........"
    "....###."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    ".....##."
    "##..##.."
    ".####...",
    // 'k'
    "##......"
    "##......"
    "##......"
    "##......"
    "##...##."
    "##..##.."
    "##.##..."
    "####...."
    "####...."
    "##.##..."
    "##..##.."
    "##...##.",
    // 'l'
    "..###..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    "...##..."
    ".######.",
    // 'm'
    "........"
    "........"
    "........"
    "#######."
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "##.##.##",
    // 'n'
    "........"
    "........"
    "........"
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##",
    // 'o'
    "........"
    "........"
    "........"
    "..####.."
    ".##..##."
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##..##."
    "..####..",
    // 'p'
    "........"
    "........"
    "######.."
    "##...##."
    "##....##"
    "##....##"
    "##....##"
    "##...##."
    "######.."
    "##......"
    "##......"
    "##......",
    // 'q'
    "........"
    "........"
    "..######"
    ".##...##"
    "##....##"
    "##....##"
    "##....##"
    ".##...##"
    "..######"
    "......##"
    "......##"
    "......##",
    // 'r'
    "........"
    "........"
    "........"
    "##.####."
    "###..##."
    "###....."
    "##......"
    "##......"
    "##......"
    "##......"
    "##......"
    "##......",
    // 's'
    "........"
    "........"
    "........"
    ".#####.."
    "##...##."
    "##......"
    ".####..."
    "...###.."
    ".....##."
    "......##"
    ".##..##."
    "..####..",
    // 't'
    "..##...."
    "..##...."
    "..##...."
    "######.."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##...."
    "..##.##."
    "...###..",
    // 'u'
    "........"
    "........"
    "........"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    "##....##"
    ".##...##"
    "..###.##",
    // 'v'
    "........"
    "........"
    "........"
    "##....##"
    "##....##"
    ".##..##."
    ".##..##."
    ".##..##."
    "..####.."
    "..####.."
    "...##..."
    "...##...",
    // 'w'
    "........"
    "........"
    "........"
    "##....##"
    "##....##"
    "##....##"
    "##.##.##"
    "##.##.##"
    "##.##.##"
    "########"
    "###..###"
    "##....##",
    // 'x'
    "........"
    "........"
    "........"
    "##....##"
    ".##..##."
    "..####.."
    "...##..."
    "...##..."
    "..####.."
    ".##..##."
    "##....##"
    "##....##",
    // 'y'
    "........"
    "........"
    "##....##"
    "##....##"
    ".##..##."
    ".##..##."
    "..####.."
    "..####.."
    "...##..."
    "...##..."
    "..##...."
    ".##.....",
    // 'z'
    "........"
    "........"
    "........"
    "########"
    ".....##."
    "....##.."
    "...##..."
    "..##...."
    ".##....."
    "##......"
    "##......"
    "########",
};
// clang-format on

constexpr int kSourceWidth = 8;
constexpr int kSourceHeight = 12;
constexpr int kScale = 2;

}  // namespace glyphdata

inline char char_for_class(int cls) {
    if (cls < 0 || cls >= 62) throw std::invalid_argument("character class out of range");
    if (cls < 10) return static_cast<char>('0' + cls);
    if (cls < 36) return static_cast<char>('A' + cls - 10);
    return static_cast<char>('a' + cls - 36);
}

inline int class_for_char(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'Z') return 10 + c - 'A';
    if (c >= 'a' && c <= 'z') return 36 + c - 'a';
    throw std::invalid_argument(std::string("no glyph class for character '") + c + "'");
}

/// Binary glyph bitmap on a fixed grid.
struct GlyphBitmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> on;  // width*height, 0/1

    std::uint8_t at(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x]; }
};

/// The 62-entry atlas, 16x24 per glyph.
class GlyphAtlas {
public:
    GlyphAtlas() {
        using namespace glyphdata;
        for (int cls = 0; cls < 62; ++cls) {
            const char* rows = kGlyphRows[cls];
            GlyphBitmap g;
            g.width = kSourceWidth * kScale;
            g.height = kSourceHeight * kScale;
            g.on.assign(static_cast<std::size_t>(g.width) * g.height, 0);
            bool any = false;
            for (int y = 0; y < g.height; ++y)
                for (int x = 0; x < g.width; ++x) {
                    char c = rows[(y / kScale) * kSourceWidth + x / kScale];
                    g.on[static_cast<std::size_t>(y) * g.width + x] = c == '#';
                    any |= c == '#';
                }
            if (!any) throw std::logic_error("empty glyph in atlas");
            glyphs_[cls] = std::move(g);
        }
    }

    const GlyphBitmap& glyph(int cls) const {
        if (cls < 0 || cls >= 62) throw std::invalid_argument("character class out of range");
        return glyphs_[cls];
    }

    static const GlyphAtlas& instance() {
        static const GlyphAtlas atlas;
        return atlas;
    }

private:
    std::array<GlyphBitmap, 62> glyphs_;
};

}  // namespace textdet
