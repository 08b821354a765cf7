#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "panolayout/losses.hpp"
#include "panolayout/random.hpp"

using namespace panolayout;

namespace {

std::vector<double> random_scores(Rng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (double& v : s) v = rng.uniform01();
  return s;
}

std::vector<Raster> random_images(Rng& rng, std::size_t b, std::size_t w, std::size_t h) {
  std::vector<Raster> out;
  for (std::size_t i = 0; i < b; ++i) {
    Raster r(w, h, 3);
    for (double& v : r.values()) v = rng.uniform(-1.0, 1.0);
    out.push_back(r);
  }
  return out;
}

// Independent long-double reference.
double ref_recon(const std::vector<Raster>& a, const std::vector<Raster>& b) {
  long double total = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const long double d = static_cast<long double>(a[i].values()[k]) - b[i].values()[k];
      total += d * d;
    }
  return static_cast<double>(total / a.size());
}

double ref_mean(const std::vector<double>& s) {
  long double total = 0.0L;
  for (double v : s) total += v;
  return static_cast<double>(total / s.size());
}

}  // namespace

TEST_CASE("loss_G") {
  CHECK(loss_G(std::vector<double>{1.0, 1.0, 1.0}) == 0.0);
  CHECK(loss_G(std::vector<double>{0.0, 0.5, 1.0}) == 0.5);
  CHECK_THROWS_AS(loss_G(std::vector<double>{}), std::invalid_argument);
  Rng rng(300);
  const auto s = random_scores(rng, 37);
  CHECK(std::abs(loss_G(s) - (1.0 - ref_mean(s))) < 1e-12);
}

TEST_CASE("loss_D") {
  CHECK(loss_D(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}) == 0.0);
  CHECK(loss_D(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0}) == 2.0);
  CHECK_THROWS_AS(loss_D(std::vector<double>{}, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(loss_D(std::vector<double>{1.0}, std::vector<double>{}), std::invalid_argument);
  Rng rng(301);
  const auto f = random_scores(rng, 20), r = random_scores(rng, 13);
  CHECK(std::abs(loss_D(f, r) - (ref_mean(f) + 1.0 - ref_mean(r))) < 1e-12);
}

TEST_CASE("generator and fake-discriminator terms sum to one") {
  Rng rng(302);
  for (int i = 0; i < 100; ++i) {
    auto s = random_scores(rng, 1 + rng.uniform_index(64));
    for (double& v : s) v = rng.uniform(-5.0, 5.0);
    const std::vector<double> perfect_real(1, 1.0);
    CHECK(std::abs(loss_G(s) + loss_D(s, perfect_real) - 1.0) < 1e-12);
  }
}

TEST_CASE("loss_recon and loss_cycle") {
  const std::vector<Raster> zero{Raster(1, 1, 1, 0.0)}, three{Raster(1, 1, 1, 3.0)};
  CHECK(loss_recon(zero, three) == 9.0);
  CHECK(loss_cycle(zero, three) == 9.0);

  Rng rng(303);
  const auto a = random_images(rng, 4, 6, 3), b = random_images(rng, 4, 6, 3);
  CHECK(loss_recon(a, a) == 0.0);
  CHECK(std::abs(loss_recon(a, b) - ref_recon(a, b)) < 1e-12);
  CHECK(std::abs(loss_cycle(a, b) - ref_recon(a, b)) < 1e-12);
  CHECK(loss_recon(a, b) == loss_recon(b, a));

  // one pixel off by delta
  auto c = a;
  c[2].at(1, 1, 2) += 0.25;
  CHECK(loss_cycle(a, c) == doctest::Approx(0.0625 / 4.0).epsilon(1e-12));

  // homogeneity
  auto ka = a, kb = b;
  for (auto& r : ka)
    for (double& v : r.values()) v *= 3.0;
  for (auto& r : kb)
    for (double& v : r.values()) v *= 3.0;
  CHECK(loss_recon(ka, kb) == doctest::Approx(9.0 * loss_recon(a, b)).epsilon(1e-12));

  auto wrong = b;
  wrong[1] = Raster(5, 3, 3);
  CHECK_THROWS_AS(loss_recon(a, wrong), std::invalid_argument);
  CHECK_THROWS_AS(loss_recon(a, std::vector<Raster>(b.begin(), b.begin() + 3)), std::invalid_argument);
  CHECK_THROWS_AS(loss_recon(std::vector<Raster>{}, std::vector<Raster>{}), std::invalid_argument);
}

TEST_CASE("emptier loss") {
  const std::vector<Raster> imgs{Raster(2, 1, 3, 0.4), Raster(2, 1, 3, 0.1)};
  const std::vector<double> half{0.5, 0.5};
  CHECK(loss_emp(half, half, imgs, imgs) == 1.5);

  const std::vector<Raster> zeros{Raster(2, 1, 3, 0.0)};
  CHECK(loss_emp(std::vector<double>{1.0}, std::vector<double>{0.0}, zeros, zeros) == 1.0);

  Rng rng(304);
  const auto real = random_scores(rng, 8), fake = random_scores(rng, 8);
  const auto x = random_images(rng, 3, 4, 2), e = random_images(rng, 3, 4, 2);
  const EmptierLoss parts = emptier_loss(real, fake, x, e);
  CHECK(std::abs(parts.generator - (1.0 - ref_mean(fake))) < 1e-12);
  CHECK(std::abs(parts.discriminator - ((1.0 - ref_mean(real)) + ref_mean(fake))) < 1e-12);
  CHECK(std::abs(parts.recon - ref_recon(x, e)) < 1e-12);
  CHECK(loss_emp(real, fake, x, e) == parts.total());
  CHECK(parts.generator >= 0.0);
  CHECK(parts.discriminator >= 0.0);
  CHECK(parts.recon >= 0.0);
}

TEST_CASE("loss_total") {
  const LossWeights w;
  CHECK(w.lambda_gan == 1.0);
  CHECK(w.lambda_cycle == 5.0);
  CHECK(loss_total(1.0, 1.0, 1.0) == 7.0);
  CHECK(loss_total(0.3, 0.9, 2.0, LossWeights{0.0, 0.0}) == 0.0);
  CHECK(loss_total(0.3, 0.9, 2.0, LossWeights{2.0, 0.5}) == doctest::Approx(2.0 * 1.2 + 1.0).epsilon(1e-15));
  CHECK_THROWS_AS(loss_total(1.0, 1.0, 1.0, LossWeights{-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("losses are non-negative for scores in [0, 1]") {
  Rng rng(305);
  for (int i = 0; i < 200; ++i) {
    const auto f = random_scores(rng, 1 + rng.uniform_index(10));
    const auto r = random_scores(rng, 1 + rng.uniform_index(10));
    CHECK(loss_G(f) >= 0.0);
    CHECK(loss_D(f, r) >= 0.0);
  }
}
