#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "panolayout/imageops.hpp"
#include "panolayout/layout.hpp"
#include "panolayout/png_io.hpp"
#include "panolayout/random.hpp"

using namespace panolayout;

namespace {

Raster random_raster(Rng& rng, std::size_t w, std::size_t h, std::size_t c) {
  Raster r(w, h, c);
  for (double& v : r.values()) v = rng.uniform01();
  return r;
}

Kernel2D random_kernel(Rng& rng, std::size_t kh, std::size_t kw) {
  std::vector<double> k(kh * kw);
  for (double& v : k) v = rng.normal();
  return Kernel2D(kh, kw, k);
}

std::vector<double> kernel_values(const Kernel2D& k) {
  std::vector<double> out;
  for (std::size_t y = 0; y < k.height(); ++y)
    for (std::size_t x = 0; x < k.width(); ++x) out.push_back(k.at(y, x));
  return out;
}

SceneLayout random_scene(Rng& rng, std::size_t n, std::size_t w) {
  std::vector<ObjectVector> objects;
  for (std::size_t i = 0; i < n; ++i)
    objects.push_back({{rng.uniform(0.0, kTwoPi), rng.uniform(0.2, kPi - 0.2), rng.uniform(0.0, kPi),
                        rng.uniform(0.0, 0.9)},
                       rng.uniform(0.2, 1.0),
                       {rng.normal(), rng.normal()}});
  return SceneLayout(w, w / 2, 1, 1, objects);
}

}  // namespace

TEST_CASE("circular_pad") {
  Raster img(4, 1, 1, std::vector<double>{0, 1, 2, 3});
  CHECK(circular_pad(img, 0) == img);
  const Raster one = circular_pad(img, 1);
  CHECK(one.width() == 6);
  CHECK(std::vector<double>(one.values().begin(), one.values().end()) ==
        std::vector<double>{3, 0, 1, 2, 3, 0});
  const Raster full = circular_pad(img, 4);
  CHECK(full.width() == 12);
  CHECK(full.at(0, 0) == 0.0);
  CHECK(full.at(11, 0) == 3.0);
  CHECK_THROWS_AS(circular_pad(img, 5), std::invalid_argument);
}

TEST_CASE("kernel extents must be odd") {
  CHECK_THROWS_AS(Kernel2D(2, 3, std::vector<double>(6, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(Kernel2D(3, 3, std::vector<double>(8, 0.0)), std::invalid_argument);
}

TEST_CASE("conv2d_circular") {
  Rng rng(200);
  SUBCASE("identity kernel") {
    const Raster img = random_raster(rng, 12, 6, 3);
    std::vector<double> k(9, 0.0);
    k[4] = 1.0;
    CHECK(conv2d_circular(img, Kernel2D(3, 3, k)) == img);
  }
  SUBCASE("matches the naive oracle and is shift equivariant") {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t w = 2 + rng.uniform_index(20), h = 1 + rng.uniform_index(10);
      const std::size_t kh = 1 + 2 * rng.uniform_index(3), kw = 1 + 2 * rng.uniform_index(4);
      const Raster img = random_raster(rng, w, h, 2);
      const Kernel2D k = random_kernel(rng, kh, kw);
      const Raster out = conv2d_circular(img, k);
      CHECK(max_abs_diff(out, oracle::conv_circular(img, kh, kw, kernel_values(k))) < 1e-12);
      const std::int64_t t = static_cast<std::int64_t>(rng.uniform_index(w));
      CHECK(conv2d_circular(circshift(img, t), k) == circshift(out, t));
    }
  }
  SUBCASE("padded valid convolution preserves width") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t w = 8 + rng.uniform_index(20), kw = 1 + 2 * rng.uniform_index(4);
      const Raster padded = circular_pad(random_raster(rng, w, 4, 1), kw / 2);
      CHECK(padded.width() - (kw - 1) == w);
    }
  }
  SUBCASE("kernel wider than the image wraps more than once") {
    const Raster img = random_raster(rng, 3, 2, 1);
    const Kernel2D k = random_kernel(rng, 1, 9);
    CHECK(max_abs_diff(conv2d_circular(img, k), oracle::conv_circular(img, 1, 9, kernel_values(k))) < 1e-12);
  }
}

TEST_CASE("circshift and flip") {
  Raster img(4, 1, 1, std::vector<double>{0, 1, 2, 3});
  const Raster s = circshift(img, 1);
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{3, 0, 1, 2});
  CHECK(circshift(img, -1) == circshift(img, 3));
  CHECK(circshift(img, 9) == s);
  const Raster f = flip_horizontal(img);
  CHECK(std::vector<double>(f.values().begin(), f.values().end()) == std::vector<double>{3, 2, 1, 0});
  Rng rng(201);
  const Raster r = random_raster(rng, 10, 5, 3);
  CHECK(circshift(circshift(r, 7), -7) == r);
  CHECK(flip_horizontal(flip_horizontal(r)) == r);
}

TEST_CASE("augmentation records are seeded") {
  const AugmentRecord a = draw_augmentation(42, 64);
  CHECK(a == draw_augmentation(42, 64));
  CHECK(a.seed == 42);
  CHECK(a.t < 64);
  const auto json = a.to_json();
  CHECK(json["t"] == a.t);
  CHECK(json["flip"] == a.flip);
  CHECK(json["seed"] == 42);
  bool saw_flip = false, saw_plain = false;
  for (std::uint64_t s = 0; s < 50; ++s) (draw_augmentation(s, 64).flip ? saw_flip : saw_plain) = true;
  CHECK(saw_flip);
  CHECK(saw_plain);
}

TEST_CASE("augment co-transforms layouts so rendering commutes") {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const SceneLayout layout = random_scene(rng, 3, 32);
    const AugmentRecord rec{rng.uniform_index(32), rng.coin(), 0};
    const LayoutMap lhs = composite(apply_augmentation(layout, rec));
    const LayoutMap rhs = apply_augmentation(composite(layout), rec);
    CHECK(max_abs_diff(lhs, rhs) < 1e-6);
  }
  SUBCASE("identity record") {
    const SceneLayout layout = random_scene(rng, 2, 16);
    CHECK(apply_augmentation(layout, AugmentRecord{0, false, 0}) == layout);
  }
  SUBCASE("double flip is an involution") {
    const SceneLayout layout = random_scene(rng, 3, 16);
    const AugmentRecord flip{0, true, 0};
    const SceneLayout back = apply_augmentation(apply_augmentation(layout, flip), flip);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& a = layout.object(i).ellipse;
      const auto& b = back.object(i).ellipse;
      CHECK(std::abs(std::remainder(a.alpha - b.alpha, kTwoPi)) < 1e-12);
      CHECK(std::abs(a.gamma - b.gamma) < 1e-12);
    }
  }
  SUBCASE("augment applies the same record to image and layout") {
    Raster pixels = random_raster(rng, 32, 16, 3);
    const SceneLayout layout = random_scene(rng, 2, 32);
    const AugmentResult res = augment(EquirectImage(pixels), layout, 9);
    CHECK(res.record == draw_augmentation(9, 32));
    CHECK(res.image.pixels() == apply_augmentation(pixels, res.record));
    CHECK(res.layout == apply_augmentation(layout, res.record));
  }
}

TEST_CASE("equirect image validation") {
  CHECK_THROWS_AS(EquirectImage(Raster(10, 4, 3)), std::invalid_argument);
  CHECK_THROWS_AS(EquirectImage(Raster(8, 4, 1)), std::invalid_argument);
  CHECK_THROWS_AS(EquirectImage(Raster(8, 4, 3, 1.5)), std::invalid_argument);
  CHECK_NOTHROW(EquirectImage(Raster(8, 4, 3, 0.5)));
}

TEST_CASE("bilinear taps") {
  Rng rng(203);
  for (int i = 0; i < 1000; ++i) {
    const auto taps = bilinear_taps(32, 16, rng.uniform(-1.0, 33.0), rng.uniform(-1.0, 17.0));
    double sum = 0.0;
    for (const auto& t : taps) {
      CHECK(t.x < 32);
      CHECK(t.y < 16);
      CHECK(t.weight >= 0.0);
      sum += t.weight;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  // a pixel center samples exactly that pixel
  const auto center = bilinear_taps(32, 16, 5.5, 7.5);
  CHECK(center[0].x == 5);
  CHECK(center[0].y == 7);
  CHECK(center[0].weight == 1.0);
  // halfway across the seam mixes the first and last columns
  const auto seam = bilinear_taps(32, 16, 0.0, 7.5);
  CHECK(seam[0].x == 31);
  CHECK(seam[1].x == 0);
  CHECK(seam[0].weight == doctest::Approx(0.5));
}

TEST_CASE("perspective projection") {
  Rng rng(204);
  SUBCASE("constant panorama gives constant view") {
    const Raster img(64, 32, 3, 0.375);
    PerspectiveCamera cam{0.7, 0.4, -0.3, 1.2, 40, 30};
    for (double v : project_perspective(img, cam).values()) CHECK(v == doctest::Approx(0.375).epsilon(1e-14));
    cam.pitch = kPi / 2;
    for (double v : project_perspective(img, cam).values()) CHECK(v == doctest::Approx(0.375).epsilon(1e-14));
  }
  SUBCASE("yaw pi and -pi agree") {
    const Raster img = random_raster(rng, 64, 32, 3);
    const Raster a = project_perspective(img, {kPi, 0.2, 0.1, 1.0, 32, 24});
    const Raster b = project_perspective(img, {-kPi, 0.2, 0.1, 1.0, 32, 24});
    CHECK(a == b);
  }
  SUBCASE("views straddling the seam differ smoothly") {
    const Raster img = random_raster(rng, 256, 128, 3);
    const double half_deg = 0.5 * kPi / 180.0;
    const Raster a = project_perspective(img, {-half_deg, 0.0, 0.0, 1.0, 64, 64});
    const Raster b = project_perspective(img, {half_deg, 0.0, 0.0, 1.0, 64, 64});
    const Raster c = project_perspective(img, {1.0 - half_deg, 0.0, 0.0, 1.0, 64, 64});
    const Raster d = project_perspective(img, {1.0 + half_deg, 0.0, 0.0, 1.0, 64, 64});
    // the seam pair is no rougher than a pair away from it
    CHECK(max_abs_diff(a, b) <= 1.5 * max_abs_diff(c, d) + 1e-12);
  }
  SUBCASE("one white pixel lands where the camera model predicts") {
    int located = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t w = 256, h = 128;
      const std::size_t px = rng.uniform_index(w), py = 20 + rng.uniform_index(h - 40);
      Raster img(w, h, 3);
      for (std::size_t c = 0; c < 3; ++c) img.at(px, py, c) = 1.0;
      const double theta = kTwoPi * (px + 0.5) / w, phi = kPi * (py + 0.5) / h;
      const PerspectiveCamera cam{theta + rng.uniform(-0.3, 0.3), kPi / 2 - phi + rng.uniform(-0.3, 0.3),
                                  rng.uniform(-0.5, 0.5), 1.4, 96, 80};

      // Independent model: world = Rz(yaw) Ry(-pitch) Rx(roll) * (forward, right, up).
      const oracle::Mat3 rz = oracle::rot_z(cam.yaw), ry = oracle::rot_y(-cam.pitch);
      const oracle::Mat3 rx{{{1, 0, 0}, {0, std::cos(cam.roll), -std::sin(cam.roll)},
                             {0, std::sin(cam.roll), std::cos(cam.roll)}}};
      const oracle::Vec3 dir = oracle::unit(theta, phi);
      // inverse rotation is the transpose, applied in reverse order
      auto tmul = [](const oracle::Mat3& m, const oracle::Vec3& v) {
        oracle::Vec3 o{};
        for (int r = 0; r < 3; ++r) o[r] = m[0][r] * v[0] + m[1][r] * v[1] + m[2][r] * v[2];
        return o;
      };
      const oracle::Vec3 local = tmul(rx, tmul(ry, tmul(rz, dir)));
      REQUIRE(local[0] > 0.0);
      const double f = 48.0 / std::tan(0.7);
      const double ex = 48.0 + f * local[1] / local[0] - 0.5;
      const double ey = 40.0 - f * local[2] / local[0] - 0.5;
      if (ex < 2 || ex > 93 || ey < 2 || ey > 77) continue;

      const Raster view = project_perspective(img, cam);
      std::size_t bx = 0, by = 0;
      for (std::size_t y = 0; y < 80; ++y)
        for (std::size_t x = 0; x < 96; ++x)
          if (view.at(x, y, 0) > view.at(bx, by, 0)) {
            bx = x;
            by = y;
          }
      INFO("expected (" << ex << ", " << ey << ") got (" << bx << ", " << by << ")");
      CHECK(view.at(bx, by, 0) > 0.0);
      CHECK(std::abs(static_cast<double>(bx) - ex) <= 1.0);
      CHECK(std::abs(static_cast<double>(by) - ey) <= 1.0);
      ++located;
    }
    CHECK(located >= 25);
  }
  SUBCASE("invalid cameras") {
    const Raster img(16, 8, 3);
    CHECK_THROWS_AS(project_perspective(img, {0, 0, 0, 0.0, 8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(project_perspective(img, {0, 0, 0, kPi, 8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(project_perspective(img, {0, 0, 0, 1.0, 0, 8}), std::invalid_argument);
  }
}

TEST_CASE("png round trip") {
  Raster img(8, 4, 3);
  for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = static_cast<double>(i % 256) / 255.0;
  const auto bytes = encode_png(img);
  REQUIRE(bytes.size() > 8);
  CHECK(bytes[1] == 'P');
  const Raster back = decode_png(bytes);
  CHECK(back.same_shape(img));
  CHECK(max_abs_diff(back, img) < 1e-12);
  CHECK(decode_equirect_png(bytes).width() == 8);

  // single channel encodes as gray replicated to RGB
  Raster gray(4, 2, 1, 1.0);
  const Raster g = decode_png(encode_png(gray));
  CHECK(g.channels() == 3);
  for (double v : g.values()) CHECK(v == 1.0);

  // out-of-range values clamp
  Raster wild(4, 2, 3, 2.0);
  wild.at(0, 0, 0) = -1.0;
  const Raster clamped = decode_png(encode_png(wild));
  CHECK(clamped.at(0, 0, 0) == 0.0);
  CHECK(clamped.at(1, 0, 0) == 1.0);
}

TEST_CASE("png rejects non panoramas and garbage") {
  const auto square = encode_png(Raster(6, 6, 3, 0.5));
  CHECK_NOTHROW(decode_png(square));
  CHECK_THROWS_AS(decode_equirect_png(square), std::invalid_argument);
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS(decode_png(junk));
  CHECK_THROWS(decode_png(std::vector<std::uint8_t>{}));
}
