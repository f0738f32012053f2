#include "erysegm/labels.hpp"

#include <array>
#include <fstream>

#include <json.hpp>

#include "erysegm/error.hpp"
#include "erysegm/io.hpp"

namespace erysegm {

int ClassMap::id_of(const std::string& name) const {
  const auto it = classes.find(name);
  if (it == classes.end()) {
    throw Error(ErrorKind::UnknownClassName, "class '" + name + "' is not in the class map");
  }
  return it->second;
}

bool ClassMap::has_id(int id) const {
  for (const auto& [name, value] : classes) {
    if (value == id) return true;
  }
  return false;
}

ClassMap load_class_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "class map " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, "class map " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_object()) {
    throw Error(ErrorKind::Config, "class map " + path.string() + ": missing \"classes\" object");
  }
  ClassMap map;
  for (const auto& [name, value] : doc["classes"].items()) {
    if (!value.is_number_integer() || value.get<int>() < 0 || value.get<int>() > 255) {
      throw Error(ErrorKind::Config,
                  "class map " + path.string() + ": id for '" + name + "' must be in [0,255]");
    }
    map.classes[name] = value.get<int>();
  }
  return map;
}

std::filesystem::path default_class_map_path() {
  const std::filesystem::path build = std::filesystem::path(ERYSEGM_DATA_DIR_BUILD) /
                                      "face_parsing_classes.json";
  const std::filesystem::path installed = std::filesystem::path(ERYSEGM_DATA_DIR_INSTALL) /
                                          "face_parsing_classes.json";
  std::error_code ec;
  if (std::filesystem::exists(installed, ec)) return installed;
  return build;
}

LabelMask make_label_mask(int width, int height, std::vector<std::uint8_t> ids,
                          ClassMap class_map, double max_unknown_fraction) {
  if (ids.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::DimensionMismatch, "label buffer does not match dimensions");
  }
  std::array<bool, 256> known{};
  for (const auto& [name, id] : class_map.classes) known[static_cast<std::size_t>(id)] = true;
  std::size_t unknown = 0;
  for (auto& id : ids) {
    if (!known[id]) {
      id = kUnknownLabel;
      ++unknown;
    }
  }
  const double fraction = ids.empty() ? 0.0 : static_cast<double>(unknown) / ids.size();
  if (fraction > max_unknown_fraction) {
    throw Error(ErrorKind::UnknownIdFraction,
                std::to_string(unknown) + " of " + std::to_string(ids.size()) +
                    " label pixels carry ids absent from the class map (limit " +
                    std::to_string(max_unknown_fraction) + ")");
  }
  return LabelMask{width, height, std::move(ids), std::move(class_map), unknown};
}

LabelMask load_label_mask(const std::filesystem::path& path, const ClassMap& class_map,
                          double max_unknown_fraction) {
  PngPixels px = load_png_pixels(path);
  if (px.channels != 1) {
    throw Error(ErrorKind::NotSingleChannel,
                path.string() + " has " + std::to_string(px.channels) + " channels");
  }
  try {
    return make_label_mask(px.width, px.height, std::move(px.data), class_map,
                           max_unknown_fraction);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

BinaryMask select_skin(const LabelMask& mask, const std::vector<std::string>& include,
                       const std::vector<std::string>& exclude) {
  std::array<bool, 256> keep{};
  for (const auto& name : include) keep[static_cast<std::size_t>(mask.class_map.id_of(name))] = true;
  for (const auto& name : exclude) {
    keep[static_cast<std::size_t>(mask.class_map.id_of(name))] = false;
  }
  BinaryMask out(mask.width, mask.height);
  auto bits = out.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = keep[mask.labels[i]] ? 1 : 0;
  return out;
}

}  // namespace erysegm
