#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace precut {

// Node colour classes: the eight intended target classes, then Multiple,
// Other and RingFragment.
enum class ColorClass {
  CYP450,
  GPCR,
  IonChannel,
  Kinase,
  Nuclear,
  PDE,
  Phosphatase,
  Protease,
  Multiple,
  Other,
  RingFragment,
};

inline constexpr int kColorClassCount = 11;
inline constexpr int kTargetClassCount = 8;

std::string_view class_name(ColorClass c);
// Accepts the canonical names above and common aliases ("ion channel",
// "nuclear receptor", "cytochrome p450", ...). Case and separators ignored.
std::optional<ColorClass> parse_class(std::string_view text);

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

using Palette = std::array<Rgba, kColorClassCount>;

const Palette& default_palette();

}  // namespace precut
