#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "erysegm/image.hpp"

namespace erysegm {

/// Class name -> id table published alongside a face-parsing label map.
struct ClassMap {
  std::map<std::string, int> classes;

  /// Throws UnknownClassName when `name` is absent.
  int id_of(const std::string& name) const;
  bool has_id(int id) const;
};

/// Reads `{ "classes": { "<name>": <id>, ... } }`. Ids must lie in [0, 255].
/// Throws FileNotFound / Config on unreadable or malformed input.
ClassMap load_class_map(const std::filesystem::path& path);

/// Path of the class table shipped with the project (source tree or install
/// prefix, whichever exists).
std::filesystem::path default_class_map_path();

/// Pixels whose id is absent from the class map are rewritten to this id.
inline constexpr std::uint8_t kUnknownLabel = 255;

struct LabelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;
  ClassMap class_map;
  std::size_t unknown_pixels = 0;
};

/// Builds a LabelMask from raw ids. Ids missing from `class_map` become
/// kUnknownLabel; more than `max_unknown_fraction` of them throws
/// UnknownIdFraction.
LabelMask make_label_mask(int width, int height, std::vector<std::uint8_t> ids,
                          ClassMap class_map, double max_unknown_fraction = 0.01);

/// Loads a single-channel 8-bit PNG of class ids. Multi-channel input throws
/// NotSingleChannel.
LabelMask load_label_mask(const std::filesystem::path& path, const ClassMap& class_map,
                          double max_unknown_fraction = 0.01);

inline const std::vector<std::string>& default_skin_include() {
  static const std::vector<std::string> names{"skin"};
  return names;
}
inline const std::vector<std::string>& default_skin_exclude() {
  static const std::vector<std::string> names{"nose", "upper_lip", "lower_lip"};
  return names;
}

/// True where the pixel's class is in `include` and not in `exclude`.
BinaryMask select_skin(const LabelMask& mask,
                       const std::vector<std::string>& include = default_skin_include(),
                       const std::vector<std::string>& exclude = default_skin_exclude());

}  // namespace erysegm
