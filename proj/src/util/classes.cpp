#include <cctype>
#include <string>

#include "precut/classes.hpp"

namespace precut {

std::string_view class_name(ColorClass c) {
  switch (c) {
    case ColorClass::CYP450: return "CYP450";
    case ColorClass::GPCR: return "GPCR";
    case ColorClass::IonChannel: return "IonChannel";
    case ColorClass::Kinase: return "Kinase";
    case ColorClass::Nuclear: return "Nuclear";
    case ColorClass::PDE: return "PDE";
    case ColorClass::Phosphatase: return "Phosphatase";
    case ColorClass::Protease: return "Protease";
    case ColorClass::Multiple: return "Multiple";
    case ColorClass::Other: return "Other";
    case ColorClass::RingFragment: return "RingFragment";
  }
  return "Other";
}

std::optional<ColorClass> parse_class(std::string_view text) {
  std::string k;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const std::pair<const char*, ColorClass> names[] = {
      {"cyp450", ColorClass::CYP450},
      {"cyp", ColorClass::CYP450},
      {"cytochromep450", ColorClass::CYP450},
      {"gpcr", ColorClass::GPCR},
      {"gproteincoupledreceptor", ColorClass::GPCR},
      {"ionchannel", ColorClass::IonChannel},
      {"kinase", ColorClass::Kinase},
      {"proteinkinase", ColorClass::Kinase},
      {"nuclear", ColorClass::Nuclear},
      {"nuclearreceptor", ColorClass::Nuclear},
      {"pde", ColorClass::PDE},
      {"phosphodiesterase", ColorClass::PDE},
      {"phosphatase", ColorClass::Phosphatase},
      {"protease", ColorClass::Protease},
      {"multiple", ColorClass::Multiple},
      {"other", ColorClass::Other},
      {"ringfragment", ColorClass::RingFragment},
  };
  for (const auto& [name, c] : names) {
    if (k == name) return c;
  }
  return std::nullopt;
}

const Palette& default_palette() {
  static const Palette p = {
      Rgba{255, 0, 0, 255},      // CYP450 red
      Rgba{0, 128, 0, 255},      // GPCR green
      Rgba{135, 206, 235, 255},  // IonChannel sky blue
      Rgba{0, 0, 255, 255},      // Kinase blue
      Rgba{255, 165, 0, 255},    // Nuclear orange
      Rgba{238, 130, 238, 255},  // PDE violet
      Rgba{128, 0, 128, 255},    // Phosphatase purple
      Rgba{255, 255, 0, 255},    // Protease yellow
      Rgba{0, 0, 0, 255},        // Multiple
      Rgba{128, 128, 128, 255},  // Other
      Rgba{0, 100, 0, 255},      // RingFragment
  };
  return p;
}

}  // namespace precut
