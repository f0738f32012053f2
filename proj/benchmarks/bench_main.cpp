#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "erysegm/align.hpp"
#include "erysegm/color.hpp"
#include "erysegm/features.hpp"
#include "erysegm/io.hpp"
#include "erysegm/pipeline.hpp"
#include "erysegm/ransac.hpp"
#include "fixtures.hpp"

using namespace erysegm;

namespace {

void BM_SrgbToLab(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RasterImage img = fixture::Texture(n, n, 1, true).view();
  for (auto _ : state) benchmark::DoNotOptimize(srgb_to_lab(img));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SrgbToLab)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GrayImage gray = to_grayscale(fixture::Texture(n, n, 2).view());
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(gray));
}
BENCHMARK(BM_ExtractFeatures)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

// 1000 correspondences, 30% of them outliers.
void BM_Ransac(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Homography h = fixture::random_homography(rng, 512, 512, 30);
  std::uniform_real_distribution<double> u(0, 512);
  std::vector<PointPair> pairs;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    pairs.push_back({p, i % 10 < 3 ? Vec2{u(rng), u(rng)} : h.apply(p)});
  }
  RansacParams params;
  params.confidence = state.range(0) ? 0.999 : 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(ransac_homography(pairs, params));
}
BENCHMARK(BM_Ransac)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dir = fixture::temp_dir("bench");
  const auto f = fixture::red_patch_fixture(n, 9, 20.0, n / 32.0);
  encode_png(f.original, dir / "orig.png");
  encode_png(f.reference, dir / "ref.png");
  PipelineConfig c;
  c.input = dir / "orig.png";
  c.reference = dir / "ref.png";
  c.skin_mask = false;
  c.out_dir = dir / "out";
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(c));
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_Pipeline)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
