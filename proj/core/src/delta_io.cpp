#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "erysegm/error.hpp"
#include "erysegm/erythema.hpp"

namespace erysegm {

namespace {

constexpr char kMagic[8] = {'E', 'R', 'Y', 'D', 'M', 'A', 'P', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void save_delta_map(const DeltaMap& map, const std::filesystem::path& path) {
  const std::size_t n = map.delta_a.size();
  std::string buf(kMagic, sizeof(kMagic));
  buf.reserve(16 + n * 5);
  put_u32(buf, static_cast<std::uint32_t>(map.width));
  put_u32(buf, static_cast<std::uint32_t>(map.height));
  for (float v : map.delta_a) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  for (auto b : map.domain.bits()) buf.push_back(static_cast<char>(b));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

DeltaMap load_delta_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::CorruptStream, path.string() + ": not a delta map");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const std::uint32_t w = get_u32(p + 8);
  const std::uint32_t h = get_u32(p + 12);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (w == 0 || h == 0 || buf.size() != 16 + n * 5) {
    throw Error(ErrorKind::CorruptStream, path.string() + ": truncated delta map");
  }
  DeltaMap map;
  map.width = static_cast<int>(w);
  map.height = static_cast<int>(h);
  map.delta_a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    map.delta_a[i] = std::bit_cast<float>(get_u32(p + 16 + 4 * i));
  }
  std::vector<std::uint8_t> bits(p + 16 + 4 * n, p + 16 + 5 * n);
  map.domain = BinaryMask(map.width, map.height, std::move(bits));
  return map;
}

}  // namespace erysegm
