#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <functional>

#include "erysegm/config.hpp"
#include "erysegm/error.hpp"
#include "fixtures.hpp"

using namespace erysegm;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Io;
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  const PipelineConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.k, 1.5);
  EXPECT_DOUBLE_EQ(c.inlier_px, 3.0);
  EXPECT_EQ(c.ransac_iters, 2000);
  EXPECT_EQ(c.adapter.steps, 50);
  EXPECT_EQ(c.adapter.edit_prompt, "a photograph of a person with clear skin, no redness or rash");
}

TEST(Config, InvariantsEnforced) {
  PipelineConfig c;
  c.k = std::nan("");
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::Config);
  c = {};
  c.overlay_alpha = 1.5;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::Config);
  c = {};
  c.histogram_bins = 0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::Config);
}

TEST(Config, FileOverlay) {
  const auto dir = fixture::temp_dir("cfg");
  std::ofstream(dir / "c.json") << R"({"k": 2.0, "overlay-color": "0,255,0", "no-skin-mask": true,
                                       "adapter-command": "x --y", "steps": 20})";
  const PipelineConfig c = merge_config_file({}, dir / "c.json");
  EXPECT_DOUBLE_EQ(c.k, 2.0);
  EXPECT_EQ(c.overlay_color, (Rgb{0, 255, 0}));
  EXPECT_FALSE(c.skin_mask);
  EXPECT_EQ(c.adapter.command, "x --y");
  EXPECT_EQ(c.adapter.steps, 20);
  EXPECT_DOUBLE_EQ(c.ratio_max, 0.75);

  std::ofstream(dir / "bad.json") << R"({"k": "high"})";
  EXPECT_EQ(kind_of([&] { merge_config_file({}, dir / "bad.json"); }), ErrorKind::Config);
}

TEST(Config, ParseRgb) {
  EXPECT_EQ(parse_rgb("1,2,3"), (Rgb{1, 2, 3}));
  EXPECT_EQ(kind_of([] { parse_rgb("1,2"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse_rgb("1,2,256"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse_rgb("a,b,c"); }), ErrorKind::Config);
}

TEST(Config, AdapterPrecedence) {
  AdapterConfig a;
  a.command = "from-config";
  ::unsetenv(kAdapterEnvVar);
  EXPECT_EQ(resolve_adapter_command(a), "from-config");
  ::setenv(kAdapterEnvVar, "from-env", 1);
  EXPECT_EQ(resolve_adapter_command(a), "from-env");
  a.command = "from-flag";
  a.command_from_cli = true;
  EXPECT_EQ(resolve_adapter_command(a), "from-flag");
  ::unsetenv(kAdapterEnvVar);
}
