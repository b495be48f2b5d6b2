#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "fpacs/median_filter.hpp"
#include "fpacs/metrics.hpp"
#include "fpacs/rates.hpp"
#include "fpacs/scenes.hpp"
#include "fpacs/sweeps.hpp"
#include "fpacs/types.hpp"
#include "oracles.hpp"

using namespace fpacs;
namespace ft = fpacs::testing;
namespace fs = std::filesystem;

namespace {

SolverConfig exact_regime_config() {
  SolverConfig cfg;
  cfg.lambda = 1e-12;
  cfg.max_iters = 3000;
  cfg.tol = 1e-12;
  return cfg;
}

}  // namespace

TEST_CASE("published operating point in exact integers") {
  const RateReport r = rate_report(64, 480.0, 16.0);
  CHECK(r.measurement_rate == 1966080.0);
  CHECK(r.alpha == 16.0);
  CHECK(r.str == 31457280.0);
  bool saw_1mp = false;
  for (const auto& [mp, fps] : r.achievable) {
    if (mp == 1.0) {
      saw_1mp = true;
      CHECK(fps == 31457280.0 / 1e6);
    }
  }
  CHECK(saw_1mp);
}

TEST_CASE("a single-pixel camera at 20 kHz crawls") {
  const RateReport r = rate_report(1, 20000.0, 16.0);
  CHECK(r.measurement_rate == 20000.0);
  CHECK(r.str == 320000.0);
  for (const auto& [mp, fps] : r.achievable)
    if (mp == 1.0) CHECK(fps == 320000.0 / 1e6);
}

TEST_CASE("a Nyquist megapixel camera sets the reference rate") {
  const RateReport r = rate_report(1000, 30.0, 1.0);
  CHECK(r.str == 30.0e6);
  CHECK(r.str == r.alpha * r.measurement_rate);
}

TEST_CASE("rate preconditions") {
  CHECK_THROWS_AS(rate_report(0, 480.0, 16.0), ConfigError);
  CHECK_THROWS_AS(rate_report(64, -1.0, 16.0), ConfigError);
  CHECK_THROWS_AS(rate_report(64, 480.0, 0.0), ConfigError);
}

TEST_CASE("compression factors are exact binary fractions") {
  CHECK(compression_factor(1000000, 64, 4096) == 3.814697265625);
  CHECK(compression_factor(1000000, 128, 4096) == 1.9073486328125);
  CHECK(compression_factor(1000000, 256, 4096) == 0.95367431640625);
  CHECK(compression_factor(1000000, 512, 4096) == 0.476837158203125);
  CHECK(compression_factor(1048576, 256, 4096) == 1.0);
}

TEST_CASE("psnr of an exact match is infinite") {
  const HiResFrame x = ft::random_frame(8, 8, 3);
  CHECK(std::isinf(psnr(x, x)));
  CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a constant tenth-of-peak offset scores 20 dB") {
  const HiResFrame ref(16, 16, 0.5);
  HiResFrame x(16, 16, 0.6);
  CHECK(psnr(x, ref, 1.0) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(x, ref, 1.0) == psnr(ref, x, 1.0));
}

TEST_CASE("default psnr peak is the reference maximum") {
  HiResFrame ref(8, 8, 1.0);
  ref.at(0, 0) = 2.0;
  HiResFrame x = ref;
  for (auto& v : x.data) v += 0.2;
  CHECK(psnr(x, ref) == doctest::Approx(20.0).epsilon(1e-10));
}

TEST_CASE("ssim of constants reduces to the luminance term") {
  const HiResFrame a(12, 12, 0.5);
  const HiResFrame b(12, 12, 0.6);
  const double c1 = 1e-4;  // (0.01 * peak)^2 at peak 1
  const double expected = (2.0 * 0.5 * 0.6 + c1) / (0.25 + 0.36 + c1);
  CHECK(ssim(a, b, 1.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ssim is symmetric under the shared default peak") {
  const HiResFrame x = ft::random_frame(16, 16, 7);
  const HiResFrame y = ft::random_frame(16, 16, 8);
  CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)).epsilon(1e-12));
}

TEST_CASE("cube metrics extend the frame metrics") {
  VideoCube a, b;
  a.frames = {ft::random_frame(6, 6, 1), ft::random_frame(6, 6, 2)};
  b.frames = a.frames;
  CHECK(std::isinf(psnr(a, b)));
  CHECK(ssim(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bar charts are exact square waves") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  ChartParams params;
  params.frequency = 0.125;  // period 8: four bright, four dark
  const HiResFrame f = make_chart(g, ChartKind::Bars, params);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      const double expected = ((c / 4) % 2 == 0) ? 1.0 : 0.0;
      CHECK(f.at(r, c) == expected);
    }
  }
}

TEST_CASE("chart parameters are validated") {
  const GeometryConfig g = ft::make_geometry(8, 8, 2, 2);
  ChartParams params;
  params.frequency = 0.6;
  CHECK_THROWS_AS(make_chart(g, ChartKind::Bars, params), ConfigError);
  params = ChartParams{};
  params.cell = 0;
  CHECK_THROWS_AS(make_chart(g, ChartKind::Checker, params), ConfigError);
  params = ChartParams{};
  params.levels = 0;
  CHECK_THROWS_AS(make_chart(g, ChartKind::UsafLike, params), ConfigError);
}

TEST_CASE("checkerboards alternate cell by cell") {
  const GeometryConfig g = ft::make_geometry(12, 12, 3, 3);
  ChartParams params;
  params.cell = 3;
  const HiResFrame f = make_chart(g, ChartKind::Checker, params);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) {
      CHECK((f.at(r, c) == 0.0 || f.at(r, c) == 1.0));
      CHECK(f.at(r, c) == f.at((r / 3) * 3, (c / 3) * 3));
      if (c + 3 < 12) CHECK(f.at(r, c) == 1.0 - f.at(r, c + 3));
    }
  }
}

TEST_CASE("tri-bar charts stay within intensity range") {
  const GeometryConfig g = ft::make_geometry(64, 64, 8, 8);
  const HiResFrame f = make_chart(g, ChartKind::UsafLike, ChartParams{});
  double lo = 1.0, hi = 0.0;
  for (double v : f.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
}

TEST_CASE("chart kind names round trip") {
  for (ChartKind k : {ChartKind::Bars, ChartKind::UsafLike, ChartKind::Checker})
    CHECK(chart_kind_from_name(chart_kind_name(k)) == k);
  CHECK_THROWS_AS(chart_kind_from_name("sinusoid"), ConfigError);
}

TEST_CASE("zero velocity freezes the scene") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  const HiResFrame object(4, 4, 1.0);
  const VideoCube cube = make_moving_scene(g, object, 0.0, 0.0, 5);
  REQUIRE(cube.frame_count() == 5);
  for (int t = 1; t < 5; ++t)
    CHECK(cube.frames[static_cast<std::size_t>(t)].data == cube.frames[0].data);
}

TEST_CASE("objects advance by the rounded velocity and wrap") {
  const GeometryConfig g = ft::make_geometry(8, 8, 2, 2);
  HiResFrame object(2, 2, 0.0);
  object.data = {1.0, 2.0, 3.0, 4.0};
  const double v = 2.5;
  const VideoCube cube = make_moving_scene(g, object, 0.0, v, 4);
  for (int t = 0; t < 4; ++t) {
    const int off = static_cast<int>(std::llround(v * t)) % 8;
    const HiResFrame& f = cube.frames[static_cast<std::size_t>(t)];
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(f.at(r, (off + c) % 8) == object.at(r, c));
  }
}

TEST_CASE("oversized objects are rejected") {
  const GeometryConfig g = ft::make_geometry(8, 8, 2, 2);
  CHECK_THROWS_AS(make_moving_scene(g, HiResFrame(9, 4, 1.0), 0.0, 1.0, 2),
                  ConfigError);
}

TEST_CASE("median filtering never invents values") {
  VideoCube cube;
  for (int t = 0; t < 3; ++t) cube.frames.push_back(ft::random_frame(5, 5, 60 + t));
  const VideoCube out = median_filter_3d(cube, 1, 1, 1);
  for (int t = 0; t < 3; ++t) {
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) {
        std::vector<double> hood;
        for (int dt = -1; dt <= 1; ++dt)
          for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
              const int tt = std::clamp(t + dt, 0, 2);
              const int rr = std::clamp(r + dr, 0, 4);
              const int cc = std::clamp(c + dc, 0, 4);
              hood.push_back(cube.frames[static_cast<std::size_t>(tt)].at(rr, cc));
            }
        const double v = out.frames[static_cast<std::size_t>(t)].at(r, c);
        CHECK(std::count(hood.begin(), hood.end(), v) > 0);
      }
    }
  }
}

TEST_CASE("constant cubes pass through the median filter") {
  VideoCube cube;
  cube.frames = {HiResFrame(4, 4, 2.5), HiResFrame(4, 4, 2.5)};
  const VideoCube out = median_filter_3d(cube);
  for (const auto& f : out.frames)
    for (double v : f.data) CHECK(v == 2.5);
}

TEST_CASE("compression sweeps score one point per T") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  ChartParams params;
  params.frequency = 0.25;
  const HiResFrame scene = make_chart(g, ChartKind::Bars, params);
  SolverConfig cfg;
  cfg.lambda = 2e-3;
  cfg.max_iters = 120;
  cfg.tol = 1e-7;
  NoiseSpec noise = NoiseSpec::at_snr(30.0, 421);
  const std::vector<int> t_list = {4, 8};
  const SweepResult a = compression_sweep(scene, g, OpticsConfig{},
                                          PatternKind::RandomBinary, t_list, noise, cfg);
  CHECK(a.axis_name == "T");
  REQUIRE(a.axis.size() == 2);
  REQUIRE(a.psnr_db.size() == 2);
  REQUIRE(a.ssim_values.size() == 2);
  CHECK(a.axis[0] == 4.0);
  CHECK(a.axis[1] == 8.0);

  const SweepResult b = compression_sweep(scene, g, OpticsConfig{},
                                          PatternKind::RandomBinary, t_list, noise, cfg);
  CHECK(a.psnr_db == b.psnr_db);
  CHECK(a.ssim_values == b.ssim_values);
}

TEST_CASE("a full pixel scan reconstructs essentially exactly") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  ChartParams params;
  params.frequency = 0.125;
  const HiResFrame scene = make_chart(g, ChartKind::Bars, params);
  const SweepResult r =
      compression_sweep(scene, g, OpticsConfig{}, PatternKind::PixelScan, {16},
                        NoiseSpec::none(), exact_regime_config());
  REQUIRE(r.psnr_db.size() == 1);
  // relative error 1e-6 corresponds to roughly 120 dB on this target
  CHECK(r.psnr_db[0] >= 100.0);
  CHECK(r.ssim_values[0] >= 0.9999);
}

TEST_CASE("noiseless capture dominates a noisy one") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  ChartParams params;
  const HiResFrame scene = make_chart(g, ChartKind::Checker, params);
  SolverConfig cfg;
  cfg.lambda = 2e-3;
  cfg.max_iters = 120;
  cfg.tol = 1e-7;
  const std::vector<std::optional<double>> snrs = {10.0, std::nullopt};
  const SweepResult r = noise_sweep(scene, g, OpticsConfig{},
                                    PatternKind::RandomBinary, snrs, 8, 77, cfg);
  CHECK(r.axis_name == "snr_db");
  REQUIRE(r.axis.size() == 2);
  CHECK(r.axis[0] == 10.0);
  CHECK(std::isinf(r.axis[1]));
  CHECK(r.psnr_db[1] >= r.psnr_db[0]);

  const SweepResult again = noise_sweep(scene, g, OpticsConfig{},
                                        PatternKind::RandomBinary, snrs, 8, 77, cfg);
  CHECK(r.psnr_db == again.psnr_db);
}

TEST_CASE("full-scan mtf is flat at coarse frequencies") {
  // bar width 16 = 4 blocks at B = 4, sampled by the full 16-pattern scan
  const GeometryConfig g = ft::make_geometry(64, 64, 16, 16);
  const MtfCurve curve = mtf_curve(g, OpticsConfig{}, PatternKind::PixelScan, 16,
                                   {0.03125}, exact_regime_config(), 5);
  REQUIRE(curve.mtf.size() == 1);
  CHECK(curve.mtf[0] >= 0.95);
  CHECK(curve.mtf[0] <= 1.05);
  CHECK(curve.alpha == 1.0);
}

TEST_CASE("mtf values stay clamped") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  SolverConfig cfg;
  cfg.lambda = 5e-3;
  cfg.max_iters = 80;
  cfg.tol = 1e-6;
  const MtfCurve curve = mtf_curve(g, OpticsConfig{}, PatternKind::RandomBinary, 6,
                                   {0.125, 0.25, 0.5}, cfg, 9);
  for (double v : curve.mtf) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.05);
  }
}

TEST_CASE("a contrast-free target is a numerical error") {
  const GeometryConfig g = ft::make_geometry(16, 16, 4, 4);
  // period 1000 px: the central readout sees a single flat bar
  CHECK_THROWS_AS(mtf_curve(g, OpticsConfig{}, PatternKind::RandomBinary, 4, {0.001},
                            exact_regime_config(), 1),
                  NumericalError);
}

TEST_CASE("sweep and mtf results export as CSV") {
  const fs::path dir = fs::temp_directory_path() / "fpacs-test-analysis";
  fs::create_directories(dir);

  SweepResult sweep;
  sweep.axis_name = "snr_db";
  sweep.axis = {10.0, std::numeric_limits<double>::infinity()};
  sweep.psnr_db = {20.0, 40.0};
  sweep.ssim_values = {0.5, 0.9};
  const fs::path sweep_path = dir / "sweep.csv";
  save_sweep_csv(sweep, sweep_path.string());
  std::ifstream is(sweep_path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "snr_db,psnr_db,ssim");
  std::getline(is, line);
  CHECK(line == "10,20,0.5");
  std::getline(is, line);
  CHECK(line.rfind("none,", 0) == 0);

  MtfCurve curve;
  curve.frequencies = {0.125};
  curve.mtf = {0.75};
  curve.alpha = 2.0;
  const fs::path mtf_path = dir / "mtf.csv";
  save_mtf_csv(curve, mtf_path.string());
  std::ifstream im(mtf_path);
  std::getline(im, line);
  CHECK(line == "frequency,mtf,alpha");
  std::getline(im, line);
  CHECK(line == "0.125,0.75,2");
}
