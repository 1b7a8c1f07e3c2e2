#ifndef MEMEKIT_FONT5_HPP
#define MEMEKIT_FONT5_HPP

#include <array>
#include <cstdint>
#include <optional>

namespace memekit::font5 {

// 3x5 bitmap font, A-Z and 0-9. Each glyph is five rows of three bits,
// most significant bit leftmost.
inline constexpr int kGlyphWidth = 3;
inline constexpr int kGlyphHeight = 5;

inline std::optional<std::array<std::uint8_t, 5>> glyph_rows(char c) {
  if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  switch (c) {
    case 'A': return {{2, 5, 7, 5, 5}};
    case 'B': return {{6, 5, 6, 5, 6}};
    case 'C': return {{3, 4, 4, 4, 3}};
    case 'D': return {{6, 5, 5, 5, 6}};
    case 'E': return {{7, 4, 6, 4, 7}};
    case 'F': return {{7, 4, 6, 4, 4}};
    case 'G': return {{3, 4, 5, 5, 3}};
    case 'H': return {{5, 5, 7, 5, 5}};
    case 'I': return {{7, 2, 2, 2, 7}};
    case 'J': return {{1, 1, 1, 5, 2}};
    case 'K': return {{5, 5, 6, 5, 5}};
    case 'L': return {{4, 4, 4, 4, 7}};
    case 'M': return {{5, 7, 7, 5, 5}};
    case 'N': return {{6, 5, 5, 5, 5}};
    case 'O': return {{2, 5, 5, 5, 2}};
    case 'P': return {{6, 5, 6, 4, 4}};
    case 'Q': return {{2, 5, 5, 2, 1}};
    case 'R': return {{6, 5, 6, 5, 5}};
    case 'S': return {{3, 4, 2, 1, 6}};
    case 'T': return {{7, 2, 2, 2, 2}};
    case 'U': return {{5, 5, 5, 5, 7}};
    case 'V': return {{5, 5, 5, 5, 2}};
    case 'W': return {{5, 5, 7, 7, 5}};
    case 'X': return {{5, 5, 2, 5, 5}};
    case 'Y': return {{5, 5, 2, 2, 2}};
    case 'Z': return {{7, 1, 2, 4, 7}};
    case '0': return {{7, 5, 5, 5, 7}};
    case '1': return {{2, 6, 2, 2, 7}};
    case '2': return {{6, 1, 2, 4, 7}};
    case '3': return {{6, 1, 2, 1, 6}};
    case '4': return {{5, 5, 7, 1, 1}};
    case '5': return {{7, 4, 6, 1, 6}};
    case '6': return {{3, 4, 6, 5, 2}};
    case '7': return {{7, 1, 2, 2, 2}};
    case '8': return {{2, 5, 2, 5, 2}};
    case '9': return {{2, 5, 3, 1, 6}};
    default: return std::nullopt;
  }
}

inline bool glyph_bit(const std::array<std::uint8_t, 5>& rows, int col, int row) {
  return (rows[row] >> (kGlyphWidth - 1 - col)) & 1;
}

}  // namespace memekit::font5

#endif  // MEMEKIT_FONT5_HPP
