#pragma once

#include <span>

#include "panolayout/raster.hpp"

namespace panolayout {

// Loss terms of the decorator/emptier objectives, evaluated literally on
// discriminator scores supplied by an external trainer. Scores are raw reals
// (no clamping, no log). Squared-L2 terms sum over elements and average over
// the batch.

using ScoreBatch = std::span<const double>;
using ImageBatch = std::span<const Raster>;

struct LossWeights {
  double lambda_gan = 1.0;
  double lambda_cycle = 5.0;
};

/// mean(1 - D(fake))
double loss_G(ScoreBatch fake_scores);

/// mean(D(fake)) + mean(1 - D(real))
double loss_D(ScoreBatch fake_scores, ScoreBatch real_scores);

/// (1 / B) * sum_b ||a_b - b_b||^2
double loss_recon(ImageBatch a, ImageBatch b);

/// Reconstruction between the backgrounds X and the emptied fakes E(Y_hat).
double loss_cycle(ImageBatch backgrounds, ImageBatch emptied_fakes);

struct EmptierLoss {
  double generator = 0.0;      ///< mean(1 - D_emp(E(Y)))
  double discriminator = 0.0;  ///< mean(1 - D_emp(X)) + mean(D_emp(E(Y)))
  double recon = 0.0;          ///< ||X - E(Y)||^2
  double total() const { return generator + discriminator + recon; }
};

/// Emptier pretraining terms; `real_empty` are scores of real empty scenes
/// X, `fake_empty` scores of emptied decorated scenes E(Y).
EmptierLoss emptier_loss(ScoreBatch real_empty, ScoreBatch fake_empty, ImageBatch backgrounds,
                         ImageBatch emptied);

/// Sum of the three emptier terms.
double loss_emp(ScoreBatch real_empty, ScoreBatch fake_empty, ImageBatch backgrounds,
                ImageBatch emptied);

/// lambda_gan * (g + d) + lambda_cycle * cycle
double loss_total(double g, double d, double cycle, const LossWeights& weights = {});

}  // namespace panolayout
