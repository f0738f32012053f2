// Stand-in synthesizer adapter for tests and CI: no models are loaded.
//
//   erysegm-stub-adapter [--stub] <request-manifest.json>
//
// synthesize  -> the input re-encoded as reference.png
// parse_face  -> labelmask.png with every pixel labelled skin, plus the
//                shipped class table as class_map.json
//
// Exit status: 0 ok, 1 invalid manifest, 2 model failure, 3 io.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "erysegm/adapter.hpp"
#include "erysegm/error.hpp"
#include "erysegm/io.hpp"
#include "erysegm/labels.hpp"

namespace fs = std::filesystem;
using namespace erysegm;

namespace {

int fail(int code, const std::string& message) {
  std::cerr << "stub-adapter: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args.erase(std::remove(args.begin(), args.end(), "--stub"), args.end());
  if (args.size() != 1) return fail(1, "usage: erysegm-stub-adapter [--stub] <manifest.json>");

  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(args[0], std::ios::binary);
  if (!in) return fail(1, "cannot read manifest " + args[0]);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  SynthRequest req;
  try {
    req = parse_request_manifest(text);
  } catch (const Error& e) {
    return fail(1, e.what());
  }

  SynthResponse resp;
  try {
    fs::create_directories(req.out_dir);
    const RasterImage input = load_image(req.input);
    const bool synth = std::find(req.tasks.begin(), req.tasks.end(), kTaskSynthesize) != req.tasks.end();
    const bool parse = std::find(req.tasks.begin(), req.tasks.end(), kTaskParseFace) != req.tasks.end();
    if (synth) {
      resp.reference = fs::absolute(req.out_dir / "reference.png");
      encode_png(input, resp.reference);
      resp.model_ids["synthesizer"] = "stub";
    }
    if (parse) {
      const ClassMap map = load_class_map(default_class_map_path());
      const int skin = map.id_of("skin");
      resp.labelmask = fs::absolute(req.out_dir / "labelmask.png");
      encode_gray_png(input.width(), input.height(),
                      std::vector<std::uint8_t>(input.pixel_count(), static_cast<std::uint8_t>(skin)),
                      resp.labelmask);
      resp.class_map = fs::absolute(req.out_dir / "class_map.json");
      fs::copy_file(default_class_map_path(), resp.class_map, fs::copy_options::overwrite_existing);
      resp.model_ids["face_parser"] = "stub";
    }
  } catch (const Error& e) {
    return fail(3, e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(3, e.what());
  }

  resp.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Response last, via rename, so a reader never sees a partial manifest.
  const fs::path final_path = req.out_dir / kResponseManifestName;
  const fs::path tmp_path = req.out_dir / (std::string(kResponseManifestName) + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) return fail(3, "cannot write " + tmp_path.string());
    out << response_manifest_json(resp);
    if (!out) return fail(3, "failed writing " + tmp_path.string());
  }
  std::error_code ec;
  fs::rename(tmp_path, final_path, ec);
  if (ec) return fail(3, "cannot publish " + final_path.string() + ": " + ec.message());
  return 0;
}
